#include "logwave/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "logwave/numerics.hpp"

namespace logwave {

double critical_exponent(int n) {
  if (n <= 4) return std::numeric_limits<double>::infinity();
  return 2.0 * n / (n - 4.0);
}

Exponents resolve_exponents(double p, int n, double sigma_override, double mu_override) {
  Exponents e;
  e.p = p;
  e.two_star = critical_exponent(n);
  if (sigma_override > 0.0) {
    e.sigma = sigma_override;
  } else {
    e.sigma = std::isinf(e.two_star) ? 1.0 : std::min(1.0, 0.5 * (e.two_star - p));
  }
  if (mu_override > 0.0) {
    e.mu = mu_override;
  } else if (std::isinf(e.two_star)) {
    e.mu = 1.0;
  } else {
    // Largest mu keeps 2n(p-1+mu)/(n+2) below two_star; take 90% of it.
    const double mu_max = (n + 2.0) * e.two_star / (2.0 * n) - (p - 1.0);
    e.mu = std::min(1.0, 0.9 * mu_max);
  }
  return e;
}

std::vector<std::string> validate_exponents(const Exponents& e) {
  std::vector<std::string> issues;
  if (!(e.p > 2.0)) issues.push_back("exponents.p: need p > 2, got " + std::to_string(e.p));
  if (!(e.p < e.two_star))
    issues.push_back("exponents.p: need p < critical exponent " + std::to_string(e.two_star));
  if (!(e.sigma > 0.0)) issues.push_back("exponents.sigma: must be positive");
  if (!(e.p + e.sigma < e.two_star))
    issues.push_back("exponents.sigma: p + sigma must stay below the critical exponent");
  if (!(e.mu > 0.0)) issues.push_back("exponents.mu: must be positive");
  return issues;
}

namespace {

double weighted_coeff_sum(const Field& u, const std::function<double(double)>& weight) {
  const auto& c = u.coeffs();
  const auto& mu = u.domain().eigenvalues();
  double acc = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) acc += weight(mu[k]) * c[k] * c[k];
  return acc * u.domain().mode_l2_factor();
}

}  // namespace

double l2_norm_sq(const Field& u) {
  const auto& c = u.coeffs();
  double acc = 0.0;
  for (double ck : c) acc += ck * ck;
  return acc * u.domain().mode_l2_factor();
}

double grad_norm_sq(const Field& u) {
  return weighted_coeff_sum(u, [](double mu) { return mu; });
}

double h_norm_sq(const Field& u) {
  return weighted_coeff_sum(u, [](double mu) { return mu * mu + mu; });
}

double h1_norm_sq(const Field& u) {
  return weighted_coeff_sum(u, [](double mu) { return 1.0 + mu; });
}

double l2_inner(const Field& u, const Field& v) {
  if (u.domain_ptr() != v.domain_ptr())
    throw std::invalid_argument("l2_inner: fields from different domains");
  const auto& cu = u.coeffs();
  const auto& cv = v.coeffs();
  double acc = 0.0;
  for (std::size_t k = 0; k < cu.size(); ++k) acc += cu[k] * cv[k];
  return acc * u.domain().mode_l2_factor();
}

double p_norm_p(const Field& u, double p) {
  const auto& s = u.samples();
  std::vector<double> integrand(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) integrand[i] = pow_fast(std::abs(s[i]), p);
  return u.domain().integrate(integrand);
}

double log_potential(const Field& u, double p) {
  const auto& s = u.samples();
  std::vector<double> integrand(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double a = std::abs(s[i]);
    integrand[i] = a == 0.0 ? 0.0 : pow_fast(a, p) * std::log(a);
  }
  return u.domain().integrate(integrand);
}

double j_functional(const Field& u, double p) {
  return 0.5 * h_norm_sq(u) - log_potential(u, p) / p + p_norm_p(u, p) / (p * p);
}

double i_functional(const Field& u, double p) { return h_norm_sq(u) - log_potential(u, p); }

double energy(const Field& u, const Field& v, double p) {
  return 0.5 * l2_norm_sq(v) + j_functional(u, p);
}

FiberingScalars fibering_scalars(const Field& u, double p) {
  FiberingScalars s;
  s.h_sq = h_norm_sq(u);
  s.log_pot = log_potential(u, p);
  s.p_pow = p_norm_p(u, p);
  s.p = p;
  return s;
}

double j_at_scale(const FiberingScalars& s, double lambda) {
  const double lp = std::pow(lambda, s.p);
  return 0.5 * lambda * lambda * s.h_sq -
         lp / s.p * (s.log_pot + s.p_pow * std::log(lambda)) + lp / (s.p * s.p) * s.p_pow;
}

double i_at_scale(const FiberingScalars& s, double lambda) {
  const double lp = std::pow(lambda, s.p);
  return lambda * lambda * s.h_sq - lp * (s.log_pot + s.p_pow * std::log(lambda));
}

FiberingProfile fibering_profile(const Field& u, std::span<const double> lambda_grid, double p) {
  const FiberingScalars s = fibering_scalars(u, p);
  if (s.h_sq == 0.0) throw std::invalid_argument("fibering_profile: zero field");
  FiberingProfile prof;
  prof.lambda.assign(lambda_grid.begin(), lambda_grid.end());
  prof.j.reserve(lambda_grid.size());
  prof.i.reserve(lambda_grid.size());
  for (double l : lambda_grid) {
    prof.j.push_back(j_at_scale(s, l));
    prof.i.push_back(i_at_scale(s, l));
  }
  return prof;
}

LambdaStar lambda_star(const FiberingScalars& s) {
  if (s.h_sq == 0.0) throw std::invalid_argument("lambda_star: zero field");
  // g(l) = |u|_H^2 - l^(p-2) (L + P ln l); positive for small l, negative for
  // large l, single sign change where the fibering derivative vanishes.
  auto g = [&](double l) {
    return s.h_sq - std::pow(l, s.p - 2.0) * (s.log_pot + s.p_pow * std::log(l));
  };
  auto dg = [&](double l) {
    const double lpm = std::pow(l, s.p - 3.0);
    return -lpm * ((s.p - 2.0) * (s.log_pot + s.p_pow * std::log(l)) + s.p_pow);
  };

  double lo = 1.0, hi = 1.0;
  if (g(1.0) > 0.0) {
    while (g(hi) > 0.0) {
      hi *= 2.0;
      if (hi > 1e80)
        throw std::runtime_error("lambda_star: no sign change in (1, 1e80]");
    }
    lo = hi / 2.0;
  } else {
    while (g(lo) <= 0.0) {
      lo *= 0.5;
      if (lo < 1e-80)
        throw std::runtime_error("lambda_star: no sign change in [1e-80, 1)");
    }
    hi = lo * 2.0;
  }

  const RootResult root = bisect_root(g, lo, hi, 100, dg);
  return {root.x, root.residual};
}

LambdaStar lambda_star(const Field& u, double p) { return lambda_star(fibering_scalars(u, p)); }

namespace {

// |u|_q and |u|_H plus the H-preconditioned ascent direction for the
// embedding quotient, all from one synthesis.
struct QuotientState {
  double q_norm = 0.0;
  double h_norm = 0.0;
  double ratio = 0.0;
};

QuotientState quotient(const DomainPtr& dom, std::vector<double>& coeffs, double q) {
  Field u(dom, coeffs);
  QuotientState st;
  st.q_norm = std::pow(p_norm_p(u, q), 1.0 / q);
  st.h_norm = std::sqrt(h_norm_sq(u));
  st.ratio = st.h_norm == 0.0 ? 0.0 : st.q_norm / st.h_norm;
  return st;
}

void h_normalize(const DomainPtr& dom, std::vector<double>& coeffs) {
  Field u(dom, coeffs);
  const double h = std::sqrt(h_norm_sq(u));
  if (h == 0.0) return;
  for (auto& c : coeffs) c /= h;
}

}  // namespace

EmbeddingEstimate estimate_embedding_constant(const DomainPtr& domain, double q,
                                              double two_star, int restarts,
                                              std::uint64_t seed) {
  if (!(q >= 2.0) || !(q < two_star))
    throw std::invalid_argument("estimate_embedding_constant: need 2 <= q < two_star");
  if (restarts < 1) throw std::invalid_argument("estimate_embedding_constant: restarts >= 1");

  const std::size_t m = domain->mode_count();
  const auto& mu = domain->eigenvalues();

  EmbeddingEstimate best;
  best.q = q;
  best.restarts = restarts;

  SplitMix64 rng(seed);
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> c(m, 0.0);
    if (r == 0) {
      c[0] = 1.0;  // first eigenmode as the deterministic seed
    } else {
      for (auto& ck : c) ck = rng.next_normal();
    }
    h_normalize(domain, c);

    double ratio = quotient(domain, c, q).ratio;
    double step = 0.5;
    int iter = 0;
    for (; iter < 400; ++iter) {
      // Gradient of |u|_q^q in coefficient space is q * nf * analyze(|u|^(q-2) u);
      // precondition by the diagonal H metric so the first eigenmode is a
      // fixed point and convergence does not stall on stiff modes.
      Field u(domain, c);
      const auto& s = u.samples();
      std::vector<double> gsamp(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) {
        const double a = std::abs(s[i]);
        gsamp[i] = a == 0.0 ? 0.0 : std::pow(a, q - 2.0) * s[i];
      }
      // Common positive factors (q, the mode normalization) drop out of the
      // direction, so only the H-metric preconditioner is applied.
      std::vector<double> grad(m);
      domain->analyze(gsamp, grad);
      for (std::size_t k = 0; k < m; ++k) grad[k] /= (mu[k] * mu[k] + mu[k]);

      bool improved = false;
      for (int half = 0; half < 25; ++half) {
        std::vector<double> trial = c;
        for (std::size_t k = 0; k < m; ++k) trial[k] += step * grad[k];
        h_normalize(domain, trial);
        const double trial_ratio = quotient(domain, trial, q).ratio;
        if (trial_ratio > ratio) {
          const double gain = trial_ratio - ratio;
          c = std::move(trial);
          ratio = trial_ratio;
          improved = true;
          if (gain < 1e-13 * std::max(1.0, ratio)) iter = 400;  // converged
          step *= 1.3;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    if (ratio > best.raw) {
      best.raw = ratio;
      best.iterations = iter;
    }
  }
  best.value = best.raw * best.safety;
  return best;
}

NehariFloor nehari_floor(const Exponents& e, double b_sigma) {
  if (!(b_sigma > 0.0)) throw std::invalid_argument("nehari_floor: B_sigma must be positive");
  NehariFloor f;
  const double q = e.p + e.sigma;
  f.c_star = std::pow(std::numbers::e_v<double> * e.sigma / std::pow(b_sigma, q),
                      1.0 / (q - 2.0));
  f.d0 = (e.p - 2.0) / (2.0 * e.p) * f.c_star * f.c_star;
  return f;
}

DepthEstimate estimate_well_depth(const DomainPtr& domain, const Exponents& e, int restarts,
                                  int mode_budget, std::uint64_t seed,
                                  std::span<const std::vector<double>> warm_starts) {
  if (restarts < 1) throw std::invalid_argument("estimate_well_depth: restarts >= 1");
  const int budget = std::min<int>(mode_budget, static_cast<int>(domain->mode_count()));
  if (budget < 1) throw std::invalid_argument("estimate_well_depth: mode_budget >= 1");

  DepthEstimate est;
  est.mode_budget = budget;
  est.d_est = std::numeric_limits<double>::infinity();

  // J(lambda*(u) u) for H-normalized u built from the leading `budget`
  // coefficients.  Every evaluation feeds the running minimum, so d_est is by
  // construction the smallest fibering maximum seen.
  auto objective = [&](std::span<const double> x) {
    std::vector<double> c(domain->mode_count(), 0.0);
    std::copy(x.begin(), x.end(), c.begin());
    Field u(domain, c);
    const FiberingScalars s = fibering_scalars(u, e.p);
    if (s.h_sq == 0.0) return 1e100;  // degenerate simplex vertex
    const double scale = 1.0 / std::sqrt(s.h_sq);
    FiberingScalars ns;
    ns.p = s.p;
    ns.h_sq = 1.0;
    // |cu|_p^p = c^p |u|_p^p and int |cu|^p ln|cu| picks up a ln c term.
    ns.p_pow = std::pow(scale, e.p) * s.p_pow;
    ns.log_pot = std::pow(scale, e.p) * (s.log_pot + s.p_pow * std::log(scale));
    const LambdaStar ls = lambda_star(ns);
    const double value = j_at_scale(ns, ls.lambda);
    est.evaluations++;
    if (value < est.d_est) {
      est.d_est = value;
      est.coeffs.assign(x.begin(), x.end());
    }
    return value;
  };

  SplitMix64 rng(seed);
  std::vector<std::vector<double>> starts;
  starts.emplace_back(budget, 0.0);
  starts.back()[0] = 1.0;  // first eigenmode, deterministic
  for (const auto& w : warm_starts) {
    std::vector<double> padded(budget, 0.0);
    std::copy_n(w.begin(), std::min<std::size_t>(w.size(), padded.size()), padded.begin());
    starts.push_back(std::move(padded));
  }
  while (static_cast<int>(starts.size()) < restarts + static_cast<int>(warm_starts.size()) + 1) {
    std::vector<double> c(budget);
    for (auto& ck : c) ck = rng.next_normal();
    starts.push_back(std::move(c));
  }

  for (auto& start : starts) {
    // Normalize the start so the simplex scale is meaningful.
    double norm = 0.0;
    for (double v : start) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      start[0] = 1.0;
      norm = 1.0;
    }
    for (auto& v : start) v /= norm;
    const NelderMeadResult nm = nelder_mead(objective, start, 0.2, 1e-8);
    est.restart_values.push_back(nm.value);
  }
  return est;
}

WellAnalysis analyze_well(const DomainPtr& domain, const Exponents& e, int restarts,
                          int mode_budget, std::uint64_t seed) {
  WellAnalysis w;
  w.exponents = e;
  w.restarts = restarts;
  w.seed = seed;
  w.b_sigma = estimate_embedding_constant(domain, e.p + e.sigma, e.two_star, restarts, seed);
  w.b_mu = estimate_embedding_constant(domain, 2.0 * (e.p - 1.0 + e.mu), e.two_star, restarts,
                                       seed ^ 0x9e3779b97f4a7c15ULL);
  const NehariFloor floor = nehari_floor(e, w.b_sigma.value);
  w.c_star = floor.c_star;
  w.d0 = floor.d0;
  w.depth = estimate_well_depth(domain, e, restarts, mode_budget, seed ^ 0x5bf0365ULL);
  w.d_est = w.depth.d_est;
  return w;
}

RegimeTag classify_initial_data(const Field& u0, const Field& u1, const WellAnalysis& well,
                                double lambda1) {
  RegimeTag tag;
  const double p = well.exponents.p;
  tag.e0 = energy(u0, u1, p);
  tag.j0 = j_functional(u0, p);
  tag.l2_0 = l2_norm_sq(u0);
  tag.uv0 = l2_inner(u0, u1);
  tag.d_est = well.d_est;
  const double c0 = std::min({p + 2.0, p * (p - 2.0) * lambda1,
                              0.5 * (p - 2.0) * (lambda1 + lambda1 * lambda1)});
  tag.c0 = c0;

  const bool zero_u0 = h_norm_sq(u0) == 0.0;
  tag.i0 = zero_u0 ? 0.0 : i_functional(u0, p);

  tag.negative_energy = tag.e0 < 0.0;
  // I is undefined at u = 0; zero data is never inside the unstable set.
  tag.subcritical_unstable = !zero_u0 && tag.i0 < 0.0 && tag.e0 < well.d_est;
  tag.high_energy_growth = tag.e0 > 0.0 && tag.e0 < c0 / p * tag.uv0;
  tag.high_energy_bound = tag.high_energy_growth && tag.e0 < c0 / p * tag.l2_0;
  return tag;
}

}  // namespace logwave
