#include "logwave/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "logwave/numerics.hpp"

namespace logwave {

namespace {

// e^(-delta t) * cos-type and sin-type phase factors of the damped mode
//   y'' + 2 delta y' + s y = 0,   w2 = s - delta^2.
// Underdamped modes use cos/sin, overdamped ones the exponentially weighted
// cosh/sinh written so no intermediate overflows (w < delta there), and a
// series covers the near-critical band.
inline void damped_phase(double w2, double delta, double t, double& ec, double& es) {
  const double x = w2 * t * t;
  if (std::abs(x) < 1e-8) {
    const double ed = std::exp(-delta * t);
    ec = ed * (1.0 - 0.5 * x + x * x / 24.0);
    es = ed * t * (1.0 - x / 6.0 + x * x / 120.0);
  } else if (w2 > 0.0) {
    const double w = std::sqrt(w2);
    const double ed = std::exp(-delta * t);
    ec = ed * std::cos(w * t);
    es = ed * std::sin(w * t) / w;
  } else {
    const double w = std::sqrt(-w2);
    // exp(-delta t) cosh(w t) = (e^((w-delta)t) + e^(-(w+delta)t)) / 2 with
    // w - delta = -s/(w+delta) evaluated cancellation-free.
    const double s = delta * delta + w2;
    const double em = std::exp(-s * t / (w + delta));
    const double ep = std::exp(-(w + delta) * t);
    ec = 0.5 * (em + ep);
    es = 0.5 * (em - ep) / w;
  }
}

// Coefficients of f(u) = |u|^(p-2) u ln|u| evaluated on the grid and
// truncated back to the retained modes (the 2x grid margin absorbs the
// spectral spill of the non-polynomial term).
std::vector<double> nonlinear_term(const EquationSetup& eq, const Field& u) {
  const auto& s = u.samples();
  std::vector<double> f(s.size());
  const double q = eq.p - 2.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double a = std::abs(s[i]);
    f[i] = a == 0.0 ? 0.0 : pow_fast(a, q) * s[i] * std::log(a);
  }
  std::vector<double> fc(eq.domain->mode_count());
  eq.domain->analyze(f, fc);
  return fc;
}

void add_scaled_coeffs(Field& v, const std::vector<double>& fc, double factor) {
  auto& vc = v.mutable_coeffs();
  for (std::size_t k = 0; k < vc.size(); ++k) vc[k] += factor * fc[k];
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

struct SampleScalars {
  double e, j, i, l2, h1, hsq, vl2, uv, n;
};

SampleScalars sample_scalars(const State& s, double p) {
  SampleScalars out{};
  out.l2 = l2_norm_sq(s.u);
  out.h1 = h1_norm_sq(s.u);
  out.hsq = h_norm_sq(s.u);
  out.vl2 = l2_norm_sq(s.v);
  out.uv = l2_inner(s.u, s.v);
  const double log_pot = log_potential(s.u, p);
  const double p_pow = p_norm_p(s.u, p);
  out.j = 0.5 * out.hsq - log_pot / p + p_pow / (p * p);
  out.i = out.hsq - log_pot;
  out.e = 0.5 * out.vl2 + out.j;
  out.n = out.vl2 + out.hsq;
  return out;
}

void push_sample(TrajectoryRecord& rec, const State& s, double dt, double p) {
  const SampleScalars sc = sample_scalars(s, p);
  rec.t.push_back(s.t);
  rec.e.push_back(sc.e);
  rec.j.push_back(sc.j);
  rec.i.push_back(sc.i);
  rec.l2_sq.push_back(sc.l2);
  rec.h1_sq.push_back(sc.h1);
  rec.h_sq.push_back(sc.hsq);
  rec.v_l2_sq.push_back(sc.vl2);
  rec.uv_inner.push_back(sc.uv);
  rec.n.push_back(sc.n);
  rec.acc_h1.push_back(s.acc_h1);
  rec.acc_dissipation.push_back(s.acc_dissipation);
  rec.dt.push_back(dt);
}

// Weighted distance between two states relative to their size; the /3 is the
// Richardson factor for an order-2 step pair.
double pair_error(const State& big, const State& half) {
  double diff = 0.0;
  const auto& mu = half.u.domain().eigenvalues();
  const auto& bu = big.u.coeffs();
  const auto& hu = half.u.coeffs();
  const auto& bv = big.v.coeffs();
  const auto& hv = half.v.coeffs();
  double scale = 0.0;
  for (std::size_t k = 0; k < bu.size(); ++k) {
    const double wu = 1.0 + mu[k] + mu[k] * mu[k];
    const double du = bu[k] - hu[k];
    const double dv = bv[k] - hv[k];
    diff += wu * du * du + dv * dv;
    scale += wu * hu[k] * hu[k] + hv[k] * hv[k];
  }
  const double nf = half.u.domain().mode_l2_factor();
  return std::sqrt(diff * nf) / (3.0 * (1.0 + std::sqrt(scale * nf)));
}

}  // namespace

namespace {

// The kick at the incoming state can be shared between the full step and the
// first half step of an error-estimation pair.
StepStatus step_impl(State& state, double dt, const EquationSetup& eq,
                     const std::vector<double>* entry_kick) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  if (state.u.domain_ptr() != eq.domain || state.v.domain_ptr() != eq.domain)
    throw std::invalid_argument("step: state fields not on the setup domain");

  if (eq.nonlinear) {
    if (entry_kick)
      add_scaled_coeffs(state.v, *entry_kick, 0.5 * dt);
    else
      add_scaled_coeffs(state.v, nonlinear_term(eq, state.u), 0.5 * dt);
  }

  const double alpha_mid = eq.alpha(state.t + 0.5 * dt);
  const auto& mu = eq.domain->eigenvalues();
  auto& uc = state.u.mutable_coeffs();
  auto& vc = state.v.mutable_coeffs();

  // Exact modal propagation over dt plus the same evaluation at dt/2 for the
  // midpoint accumulators.
  double vmid_l2 = 0.0, vmid_grad = 0.0, umid_h1 = 0.0;
  for (std::size_t k = 0; k < uc.size(); ++k) {
    const double stiff = mu[k] * mu[k] + mu[k];
    const double delta = 0.5 * (eq.omega * mu[k] + alpha_mid);
    const double w2 = stiff - delta * delta;
    double ec, es;
    damped_phase(w2, delta, 0.5 * dt, ec, es);
    const double um = uc[k] * ec + (vc[k] + delta * uc[k]) * es;
    const double vm = vc[k] * ec - (stiff * uc[k] + delta * vc[k]) * es;
    vmid_l2 += vm * vm;
    vmid_grad += mu[k] * vm * vm;
    umid_h1 += (1.0 + mu[k]) * um * um;
    damped_phase(w2, delta, dt, ec, es);
    const double uf = uc[k] * ec + (vc[k] + delta * uc[k]) * es;
    const double vf = vc[k] * ec - (stiff * uc[k] + delta * vc[k]) * es;
    uc[k] = uf;
    vc[k] = vf;
  }
  const double nf = eq.domain->mode_l2_factor();
  state.acc_dissipation += dt * (alpha_mid * vmid_l2 + eq.omega * vmid_grad) * nf;
  state.acc_h1 += dt * umid_h1 * nf;

  if (eq.nonlinear) add_scaled_coeffs(state.v, nonlinear_term(eq, state.u), 0.5 * dt);
  state.t += dt;

  if (!all_finite(state.u.coeffs()) || !all_finite(state.v.coeffs()) ||
      !std::isfinite(state.acc_dissipation) || !std::isfinite(state.acc_h1))
    return StepStatus::overflow;
  return StepStatus::ok;
}

}  // namespace

StepStatus step(State& state, double dt, const EquationSetup& eq) {
  return step_impl(state, dt, eq, nullptr);
}

DetectorVerdict detect_blowup(const TrajectoryRecord& record, const DetectorConfig& detector,
                              double dt_next, double dt_min) {
  DetectorVerdict verdict;
  if (record.size() == 0) return verdict;
  const std::size_t last = record.size() - 1;
  const double q = record.l2_sq[last] + record.acc_h1[last];
  if (q >= detector.divergence_threshold) {
    verdict.blow_up = true;
    verdict.info = {record.t[last], record.t[last] + dt_next,
                    BlowupTrigger::divergence_threshold};
    return verdict;
  }
  if (dt_next < dt_min && record.size() >= 3) {
    const bool n_growing =
        record.n[last] > record.n[last - 1] && record.n[last - 1] > record.n[last - 2];
    if (n_growing) {
      verdict.blow_up = true;
      verdict.info = {record.t[last], record.t[last] + dt_min,
                      BlowupTrigger::dt_underflow_growth};
    }
  }
  return verdict;
}

SimulationResult simulate(const EquationSetup& eq, const IntegratorConfig& integrator,
                          const DetectorConfig& detector, const Field& u0, const Field& u1) {
  if (!(integrator.tolerance > 0.0 && integrator.tolerance < 1.0))
    throw std::invalid_argument("simulate: tolerance must lie in (0, 1)");
  if (!(integrator.dt_min > 0.0) || !(integrator.dt_max > integrator.dt_min))
    throw std::invalid_argument("simulate: need 0 < dt_min < dt_max");
  if (integrator.t_max < 0.0) throw std::invalid_argument("simulate: t_max must be nonnegative");
  if (u0.domain_ptr() != eq.domain || u1.domain_ptr() != eq.domain)
    throw std::invalid_argument("simulate: initial data not on the setup domain");

  SimulationResult result{TrajectoryRecord{}, State(u0, u1)};
  State& s = result.final_state;
  TrajectoryRecord& rec = result.record;

  push_sample(rec, s, 0.0, eq.p);

  if (integrator.t_max == 0.0) {
    rec.cause = TerminationCause::t_max_reached;
    return result;
  }

  const double tol = integrator.tolerance;
  double dt = integrator.dt_init > 0.0
                  ? integrator.dt_init
                  : std::clamp(1e-3 * std::min(1.0, integrator.t_max), integrator.dt_min,
                               integrator.dt_max);
  double ratio_prev = 1.0;  // PI history: last accepted target/est

  while (true) {
    dt = std::min({dt, integrator.dt_max, integrator.t_max - s.t});
    dt = std::max(dt, integrator.dt_min);

    State big = s;
    State half = s;
    const std::vector<double> entry_kick =
        eq.nonlinear ? nonlinear_term(eq, s.u) : std::vector<double>{};
    const std::vector<double>* kick = eq.nonlinear ? &entry_kick : nullptr;
    StepStatus status = step_impl(big, dt, eq, kick);
    if (status == StepStatus::ok) {
      status = step_impl(half, 0.5 * dt, eq, kick);
      if (status == StepStatus::ok) status = step_impl(half, 0.5 * dt, eq, nullptr);
    }

    if (status == StepStatus::overflow) {
      if (0.5 * dt >= integrator.dt_min) {
        dt *= 0.5;
        continue;
      }
      rec.cause = TerminationCause::blow_up;
      rec.blowup = BlowupInfo{s.t, s.t + dt, BlowupTrigger::overflow};
      return result;
    }

    const double est = pair_error(big, half);
    const double target = tol * dt;
    if (est <= target) {
      s = std::move(half);
      push_sample(rec, s, dt, eq.p);

      double grow = 1.5;
      if (est > 0.0) {
        const double ratio = target / est;
        grow = 0.9 * std::pow(ratio, 0.35) * std::pow(ratio / ratio_prev, 0.15);
        ratio_prev = ratio;
      }
      const double dt_next = dt * std::clamp(grow, 0.2, 1.5);

      const DetectorVerdict verdict = detect_blowup(rec, detector, dt_next, integrator.dt_min);
      if (verdict.blow_up) {
        rec.cause = TerminationCause::blow_up;
        rec.blowup = verdict.info;
        return result;
      }
      if (s.t >= integrator.t_max * (1.0 - 1e-14)) {
        rec.cause = TerminationCause::t_max_reached;
        return result;
      }
      dt = dt_next;
    } else {
      const double shrink = std::max(0.2, 0.9 * std::sqrt(target / est));
      const double dt_new = dt * shrink;
      if (dt_new < integrator.dt_min) {
        const DetectorVerdict verdict = detect_blowup(rec, detector, dt_new, integrator.dt_min);
        if (verdict.blow_up) {
          rec.cause = TerminationCause::blow_up;
          rec.blowup = verdict.info;
        } else {
          rec.cause = TerminationCause::dt_underflow;
        }
        return result;
      }
      dt = dt_new;
    }
  }
}

DissipationResidual dissipation_residual(const TrajectoryRecord& record) {
  DissipationResidual out;
  if (record.size() == 0) return out;
  const double e0 = record.e.front();
  out.residual.resize(record.size());
  for (std::size_t j = 0; j < record.size(); ++j) {
    out.residual[j] = record.e[j] - e0 + record.acc_dissipation[j];
    out.max_abs = std::max(out.max_abs, std::abs(out.residual[j]));
    if (j > 0)
      out.max_energy_increase = std::max(out.max_energy_increase, record.e[j] - record.e[j - 1]);
  }
  out.max_rel = out.max_abs / std::max(1.0, std::abs(e0));
  return out;
}

std::string to_string(TerminationCause cause) {
  switch (cause) {
    case TerminationCause::t_max_reached: return "t_max_reached";
    case TerminationCause::blow_up: return "blow_up";
    case TerminationCause::dt_underflow: return "dt_underflow";
  }
  return "unknown";
}

std::string to_string(BlowupTrigger trigger) {
  switch (trigger) {
    case BlowupTrigger::divergence_threshold: return "divergence_threshold";
    case BlowupTrigger::dt_underflow_growth: return "dt_underflow_growth";
    case BlowupTrigger::overflow: return "overflow";
  }
  return "unknown";
}

}  // namespace logwave
