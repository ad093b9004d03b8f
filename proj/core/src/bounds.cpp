#include "logwave/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "logwave/numerics.hpp"

namespace logwave {

double c0_constant(double p, double lambda1) {
  if (!(p > 2.0) || !(lambda1 > 0.0))
    throw std::invalid_argument("c0_constant: need p > 2 and lambda1 > 0");
  return std::min({p + 2.0, p * (p - 2.0) * lambda1,
                   0.5 * (p - 2.0) * (lambda1 + lambda1 * lambda1)});
}

InitialScalars initial_scalars(const Field& u0, const Field& u1, double p) {
  InitialScalars s;
  s.l2 = l2_norm_sq(u0);
  s.h1 = h1_norm_sq(u0);
  s.h_sq = h_norm_sq(u0);
  s.v_l2 = l2_norm_sq(u1);
  s.uv = l2_inner(u0, u1);
  const double log_pot = log_potential(u0, p);
  const double p_pow = p_norm_p(u0, p);
  s.j0 = 0.5 * s.h_sq - log_pot / p + p_pow / (p * p);
  s.i0 = s.h_sq - log_pot;
  s.e0 = 0.5 * s.v_l2 + s.j0;
  return s;
}

double subcritical_t_of_tau(const InitialScalars& init, double b, double p, double tau) {
  const double denom = (p - 2.0) * (init.uv + b * tau) - 2.0 * init.h1;
  if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
  return 2.0 * (init.l2 + b * tau * tau) / denom;
}

SubcriticalBound subcritical_upper_bound(const InitialScalars& init, double d_value, double p) {
  SubcriticalBound out;
  out.d_used = d_value;
  if (!(init.i0 < 0.0)) {
    out.reason = "I(u0) >= 0: initial datum not in the unstable set";
    return out;
  }
  if (!(init.e0 < d_value)) {
    out.reason = "E(0) >= d: energy not below the well level used";
    return out;
  }
  out.applicable = true;
  out.b = d_value - init.e0;
  out.a = 2.0 * init.h1 - (p - 2.0) * init.uv;
  const double pm2 = p - 2.0;
  const double disc = std::sqrt(out.a * out.a + pm2 * pm2 * out.b * init.l2);
  out.tau0 = (disc + out.a) / (pm2 * out.b);
  out.t_upper = 4.0 * (disc + out.a) / (pm2 * pm2 * out.b);
  return out;
}

double high_energy_t_of_t0(const InitialScalars& init, double beta, double p, double t0) {
  const double denom = (p - 2.0) * (init.uv + beta * t0) - 2.0 * init.h1;
  if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
  return 2.0 * (init.l2 + beta * t0 * t0) / denom;
}

HighEnergyBound high_energy_upper_bound(const InitialScalars& init, double p, double c0) {
  HighEnergyBound out;
  const double rate = c0 / p;
  if (!(init.e0 > 0.0 && init.e0 < rate * init.uv)) {
    out.reason = "condition 0 < E(0) < (C0/p)(u0,u1) fails";
    return out;
  }
  if (!(init.e0 < rate * init.l2)) {
    out.reason = "condition E(0) < (C0/p)|u0|_2^2 fails";
    return out;
  }
  out.applicable = true;
  out.beta = 2.0 * (rate * init.l2 - init.e0);
  const double a = 2.0 * init.h1 - (p - 2.0) * init.uv;
  out.t0_min = std::max(0.0, a / ((p - 2.0) * out.beta));

  auto t_of = [&](double t0) { return high_energy_t_of_t0(init, out.beta, p, t0); };

  double lo = out.t0_min * (1.0 + 1e-6);
  if (lo == 0.0) lo = 1e-12;
  for (int guard = 0; guard < 200 && !std::isfinite(t_of(lo)); ++guard) lo *= 2.0;

  double hi = std::max(2.0 * lo, 1.0);
  for (int guard = 0; guard < 200; ++guard) {
    if (t_of(hi) > t_of(0.5 * hi) && hi > 4.0 * lo) break;
    hi *= 2.0;
  }
  const MinResult min = golden_section(t_of, lo, hi, 1e-12, 400);
  out.t0 = min.x;
  out.t_upper = min.value;
  return out;
}

double lower_bound_integral(double c4, double c5, double exponent, double n0) {
  if (!(c5 > 0.0) || !(exponent > 1.0))
    throw std::invalid_argument("lower_bound_integral: need c5 > 0 and exponent > 1");
  if (n0 < 0.0) throw std::invalid_argument("lower_bound_integral: N(0) must be nonnegative");
  if (c4 == 0.0 && n0 == 0.0) return std::numeric_limits<double>::infinity();

  auto integrand = [&](double s) { return 1.0 / (c4 + c5 * std::pow(s, exponent)); };

  // Cut where the C4 part is negligible relative to C5 s^q, then add the
  // analytic tail M^(1-q) / (C5 (q-1)).
  double cut = std::max(2.0 * n0, 1.0);
  if (c4 > 0.0) cut = std::max(cut, std::pow(1e12 * c4 / c5, 1.0 / exponent));

  // Dyadic segments keep the adaptive rule honest over many decades.  Each
  // segment's tolerance is tied to its own crude Simpson value, so scaling
  // the integrand scales every recursion decision with it and exact algebraic
  // homogeneities (doubling both constants halves the result) survive in
  // floating point.
  double total = 0.0;
  double lo = n0;
  while (lo < cut) {
    const double hi = std::min(cut, std::max(2.0 * lo, lo + 1.0));
    const double crude =
        (hi - lo) / 6.0 * (integrand(lo) + 4.0 * integrand(0.5 * (lo + hi)) + integrand(hi));
    total += adaptive_simpson(integrand, lo, hi, std::max(1e-300, 1e-12 * std::abs(crude)));
    lo = hi;
  }
  total += std::pow(cut, 1.0 - exponent) / (c5 * (exponent - 1.0));
  return total;
}

LowerBound lifespan_lower_bound(const InitialScalars& init, const Exponents& e, double b_mu,
                                double measure, double lambda1, const DampingInfo& damping) {
  LowerBound out;
  out.mu = e.mu;
  out.b_mu = b_mu;
  out.n0 = init.n0();
  if (!(e.mu > 0.0)) {
    out.reason = "mu must be positive";
    return out;
  }
  if (!(b_mu > 0.0)) {
    out.reason = "embedding constant for the mu exponent unavailable";
    return out;
  }
  // The velocity term produced by the Young steps is absorbed into the
  // damping; either both coefficients bound |u_t|^2 from below or the strong
  // damping alone does through lambda1.
  out.absorber = std::max(std::min(damping.alpha_floor, damping.omega),
                          damping.omega * lambda1 / (1.0 + lambda1));
  if (!(out.absorber > 0.0)) {
    out.reason = "no damping available to absorb the velocity term";
    return out;
  }

  const double q = e.p - 1.0 + e.mu;
  out.s_sq = 1.0 / (1.0 + lambda1);
  out.a_const = std::sqrt(measure) / (std::numbers::e * (e.p - 1.0));
  out.b_const = std::pow(b_mu, q) / (std::numbers::e * e.mu);
  out.c4 = out.s_sq * out.a_const * out.a_const / out.absorber;
  out.c5 = out.s_sq * out.b_const * out.b_const / out.absorber;
  out.t_lower = lower_bound_integral(out.c4, out.c5, q, out.n0);
  out.applicable = true;
  return out;
}

MonitorResult monitor_growth(const TrajectoryRecord& record, double c0, double p,
                             double rel_tol) {
  MonitorResult out;
  if (record.size() == 0) {
    out.detail = "empty record";
    return out;
  }
  const double h0 = record.uv_inner[0] - p / c0 * record.e[0];
  if (!(h0 > 0.0)) {
    out.detail = "H(0) <= 0: exponential floor hypothesis fails";
    return out;
  }
  out.verdict = MonitorVerdict::pass;
  const double log_floor = std::log1p(-rel_tol) + std::log(h0);
  for (std::size_t j = 0; j < record.size(); ++j) {
    const double h = record.uv_inner[j] - p / c0 * record.e[j];
    const double log_bound = log_floor + c0 * record.t[j];
    const bool ok = h > 0.0 && std::log(h) >= log_bound;
    const double slack = h > 0.0 ? std::log(h) - (std::log(h0) + c0 * record.t[j])
                                 : -std::numeric_limits<double>::infinity();
    out.worst_slack = std::min(out.worst_slack, slack);
    if (!ok) {
      out.verdict = MonitorVerdict::fail;
      out.first_violation = j;
      out.detail = "H(t) fell below (1-tol) H(0) exp(C0 t) at t = " + std::to_string(record.t[j]);
      return out;
    }
  }
  out.detail = "growth floor held at all " + std::to_string(record.size()) + " samples";
  return out;
}

MonitorResult monitor_concavity(const TrajectoryRecord& record, double b, double tau, double p,
                                double rel_tol) {
  if (record.size() < 3)
    throw std::invalid_argument("monitor_concavity: record too short to difference");
  MonitorResult out;
  if (!(record.i[0] < 0.0)) {
    out.detail = "I(u0) >= 0: concavity functional hypothesis fails";
    return out;
  }
  if (!(b > 0.0)) {
    out.detail = "b <= 0: no well gap to build the functional from";
    return out;
  }

  const double t_star = record.t.back();
  const double h1_0 = record.h1_sq[0];
  const std::size_t n = record.size();
  std::vector<double> g(n), gp(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double shift = record.t[j] + tau;
    g[j] = record.l2_sq[j] + record.acc_h1[j] + (t_star - record.t[j]) * h1_0 + b * shift * shift;
    gp[j] = 2.0 * record.uv_inner[j] + (record.h1_sq[j] - h1_0) + 2.0 * b * shift;
  }

  out.verdict = MonitorVerdict::pass;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double hl = record.t[j] - record.t[j - 1];
    const double hr = record.t[j + 1] - record.t[j];
    // Second-order first derivative of G' on a nonuniform stencil.
    const double gpp = (hl * hl * gp[j + 1] - (hl * hl - hr * hr) * gp[j] - hr * hr * gp[j - 1]) /
                       (hl * hr * (hl + hr));
    const double lhs = g[j] * gpp - 0.25 * (p + 2.0) * gp[j] * gp[j];
    const double scale = g[j] * std::abs(gpp);
    const double slack = scale > 0.0 ? lhs / scale : lhs;
    out.worst_slack = std::min(out.worst_slack, slack);
    if (lhs < -rel_tol * scale) {
      out.verdict = MonitorVerdict::fail;
      out.first_violation = j;
      out.detail =
          "concavity inequality failed at t = " + std::to_string(record.t[j]);
      return out;
    }
  }
  out.detail = "concavity inequality held at all interior samples";
  return out;
}

BoundReport audit_run(const AuditInputs& in, const TrajectoryRecord& record) {
  BoundReport rep;
  rep.regime = in.regime;
  rep.initial = in.initial;
  rep.c0 = c0_constant(in.exponents.p, in.lambda1);
  rep.cause = record.cause;
  rep.t_num = record.blowup;
  rep.t_final = record.size() ? record.t.back() : 0.0;

  const double p = in.exponents.p;
  rep.subcritical_est = subcritical_upper_bound(in.initial, in.d_est, p);
  if (rep.subcritical_est.applicable)
    rep.notes.push_back(
        "subcritical bound with b = d_est - E(0) is heuristic: d_est estimates d from above");
  rep.subcritical_rigorous = subcritical_upper_bound(in.initial, in.d0, p);
  if (rep.subcritical_rigorous.applicable)
    rep.notes.push_back(
        "subcritical bound with b = d0 - E(0) uses the analytic floor d0 <= d and is a valid "
        "upper bound");
  rep.high_energy = high_energy_upper_bound(in.initial, p, rep.c0);
  rep.lower = lifespan_lower_bound(in.initial, in.exponents, in.b_mu, in.measure, in.lambda1,
                                   in.damping);
  if (rep.lower.applicable)
    rep.notes.push_back("lower-bound constants use estimated B_mu (safety factor included); "
                        "larger B_mu shrinks T_lower, keeping it conservative");

  rep.growth = monitor_growth(record, rep.c0, p);
  if (rep.subcritical_est.applicable && record.size() >= 3) {
    rep.concavity =
        monitor_concavity(record, rep.subcritical_est.b, rep.subcritical_est.tau0, p);
  } else {
    rep.concavity.detail = "concavity monitor skipped: subcritical bound not applicable";
  }

  const bool blew_up = record.cause == TerminationCause::blow_up && record.blowup.has_value();
  if (blew_up) {
    const double t_hi = record.blowup->t_attempted;
    if (rep.lower.applicable)
      rep.ordering.push_back({"t_lower <= t_num_hi", rep.lower.t_lower <= t_hi,
                              t_hi - rep.lower.t_lower});
    auto push_upper = [&](const std::string& name, const SubcriticalBound& sb) {
      if (sb.applicable)
        rep.ordering.push_back({name, t_hi <= sb.t_upper, sb.t_upper - t_hi});
    };
    push_upper("t_num_hi <= t_upper(d_est)", rep.subcritical_est);
    push_upper("t_num_hi <= t_upper(d0)", rep.subcritical_rigorous);
    if (rep.high_energy.applicable)
      rep.ordering.push_back({"t_num_hi <= t_upper(high_energy)",
                              t_hi <= rep.high_energy.t_upper,
                              rep.high_energy.t_upper - t_hi});
  } else if (rep.lower.applicable) {
    // A run alive at t_final cannot contradict the lower bound; the slack
    // records how far past (or short of) the guaranteed window it got.
    rep.ordering.push_back({"no blow-up observed before t_max (t_lower guarantee consistent)",
                            true, rep.t_final - rep.lower.t_lower});
  }
  return rep;
}

std::string to_string(MonitorVerdict v) {
  switch (v) {
    case MonitorVerdict::pass: return "pass";
    case MonitorVerdict::fail: return "fail";
    case MonitorVerdict::not_applicable: return "not_applicable";
  }
  return "unknown";
}

}  // namespace logwave
