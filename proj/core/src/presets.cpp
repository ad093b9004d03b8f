#include "logwave/presets.hpp"

#include <cmath>
#include <stdexcept>

#include "logwave/bounds.hpp"
#include "logwave/numerics.hpp"

namespace logwave {

namespace {

Field first_eigenmode(const DomainPtr& domain, double amplitude) {
  std::vector<double> c(domain->mode_count(), 0.0);
  c[0] = amplitude;
  return Field(domain, std::move(c));
}

// Amplitude A on the descending fibering branch of the first eigenmode with
// J(A phi_1) = target; the branch falls monotonically from the fibering
// maximum to -inf, so bisection is safe.
double solve_amplitude(const FiberingScalars& s, double lambda_peak, double target) {
  double hi = lambda_peak;
  int guard = 0;
  while (j_at_scale(s, hi) > target) {
    hi *= 2.0;
    if (++guard > 200) throw std::runtime_error("preset: amplitude search failed to bracket");
  }
  auto f = [&](double a) { return j_at_scale(s, a) - target; };
  return bisect_root(f, lambda_peak, hi, 200).x;
}

[[noreturn]] void fail(const std::string& name, const std::string& why) {
  throw std::runtime_error("preset '" + name + "': defining inequality failed: " + why);
}

std::string num(double v) { return format_double(v); }

}  // namespace

std::vector<std::string> preset_names() {
  return {"negative_energy", "subcritical_unstable", "small_data_global", "high_energy_growth"};
}

PresetData make_preset(const std::string& name, const DomainPtr& domain, const Exponents& e,
                       const WellAnalysis& well, double lambda1) {
  const Field unit = first_eigenmode(domain, 1.0);
  const FiberingScalars s1 = fibering_scalars(unit, e.p);
  const double lambda_peak = lambda_star(s1).lambda;

  double amplitude = 0.0;
  double velocity_scale = 0.0;

  if (name == "negative_energy") {
    amplitude = solve_amplitude(s1, lambda_peak, -2.0 * well.d0);
  } else if (name == "subcritical_unstable") {
    amplitude = solve_amplitude(s1, lambda_peak, 0.5 * std::min(well.d0, well.d_est));
  } else if (name == "small_data_global") {
    amplitude = 0.35 * lambda_peak;
  } else if (name == "high_energy_growth") {
    amplitude = solve_amplitude(s1, lambda_peak, 0.05 * well.d0);
    velocity_scale = c0_constant(e.p, lambda1) / e.p;
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }

  PresetData data{first_eigenmode(domain, amplitude), Field(domain), amplitude, velocity_scale,
                  {}};
  if (velocity_scale != 0.0) {
    data.u1 = data.u0;
    data.u1 *= velocity_scale;
  }

  // Re-verify the defining inequalities with the full functionals.
  const double p = e.p;
  const double e0 = energy(data.u0, data.u1, p);
  const double i0 = i_functional(data.u0, p);

  if (name == "negative_energy") {
    if (!(e0 < 0.0)) fail(name, "E(0) = " + num(e0) + " is not negative");
    data.verified.push_back("E(0) = " + num(e0) + " < 0");
  } else if (name == "subcritical_unstable") {
    if (!(i0 < 0.0)) fail(name, "I(u0) = " + num(i0) + " is not negative");
    if (!(e0 > 0.0 && e0 < well.d_est))
      fail(name, "E(0) = " + num(e0) + " not in (0, d_est = " + num(well.d_est) + ")");
    data.verified.push_back("I(u0) = " + num(i0) + " < 0");
    data.verified.push_back("0 < E(0) = " + num(e0) + " < d_est = " + num(well.d_est));
    if (e0 < well.d0)
      data.verified.push_back("E(0) < d0 = " + num(well.d0) +
                              " (rigorous upper bound applies)");
  } else if (name == "small_data_global") {
    if (!(i0 > 0.0)) fail(name, "I(u0) = " + num(i0) + " is not positive");
    if (!(e0 < well.d_est))
      fail(name, "E(0) = " + num(e0) + " not below d_est = " + num(well.d_est));
    data.verified.push_back("I(u0) = " + num(i0) + " > 0");
    data.verified.push_back("E(0) = " + num(e0) + " < d_est = " + num(well.d_est));
  } else if (name == "high_energy_growth") {
    const double c0 = c0_constant(p, lambda1);
    const double uv = l2_inner(data.u0, data.u1);
    const double l2 = l2_norm_sq(data.u0);
    if (!(e0 > 0.0 && e0 < c0 / p * uv))
      fail(name, "0 < E(0) = " + num(e0) + " < (C0/p)(u0,u1) = " + num(c0 / p * uv) +
                     " does not hold");
    if (!(e0 < c0 / p * l2))
      fail(name, "E(0) = " + num(e0) + " < (C0/p)|u0|_2^2 = " + num(c0 / p * l2) +
                     " does not hold");
    data.verified.push_back("0 < E(0) = " + num(e0) + " < (C0/p)(u0,u1) = " + num(c0 / p * uv));
    data.verified.push_back("E(0) < (C0/p)|u0|_2^2 = " + num(c0 / p * l2));
    data.verified.push_back("H(0) = " + num(uv - p / c0 * e0) + " > 0");
  }
  return data;
}

std::pair<Field, Field> make_initial_data(const ProblemConfig& cfg, const DomainPtr& domain,
                                          const Exponents& e, const WellAnalysis& well) {
  switch (cfg.initial.kind) {
    case InitialDataConfig::Kind::preset: {
      PresetData data = make_preset(cfg.initial.preset, domain, e, well, domain->lambda1());
      return {std::move(data.u0), std::move(data.u1)};
    }
    case InitialDataConfig::Kind::eigenmode: {
      Field u0 = first_eigenmode(domain, cfg.initial.amplitude);
      Field u1 = u0;
      u1 *= cfg.initial.velocity_scale;
      return {std::move(u0), std::move(u1)};
    }
    case InitialDataConfig::Kind::modes: {
      auto build = [&](const std::vector<ModeAmplitude>& list) {
        std::vector<double> c(domain->mode_count(), 0.0);
        for (const auto& ma : list) {
          std::size_t idx = static_cast<std::size_t>(ma.index[0] - 1);
          if (domain->dim() == 2)
            idx = idx * domain->modes(1) + static_cast<std::size_t>(ma.index[1] - 1);
          c.at(idx) += ma.amplitude;
        }
        return Field(domain, std::move(c));
      };
      return {build(cfg.initial.u0), build(cfg.initial.u1)};
    }
  }
  throw std::logic_error("make_initial_data: unhandled kind");
}

}  // namespace logwave
