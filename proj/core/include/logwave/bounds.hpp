#pragma once

// Closed-form lifespan bounds and growth monitors for blow-up runs.
//
// Upper bounds come from the concavity argument applied to
// G(t) = |u|_2^2 + int_0^t |u|^2 ds + (T*-t)|u0|^2 + b (t+tau)^2 (subcritical
// well regime, b = d - E(0)) and to the same functional with beta, t0 in the
// high-energy regime.  The lower bound integrates N' <= C4 + C5 N^(p-1+mu)
// for N = |u_t|_2^2 + |u|_H^2, with C4, C5 assembled from an L2 Hoelder
// split of the logarithmic term, the embedding H -> L^(2(p-1+mu)) and Young
// inequalities absorbed by the damping.  Monitors audit the inequalities the
// proofs rely on against recorded trajectories and never report outside
// their hypotheses.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "logwave/dynamics.hpp"
#include "logwave/functionals.hpp"

namespace logwave {

// min{p+2, p(p-2) lambda1, (p-2)(lambda1 + lambda1^2)/2}; the exponential
// growth rate of (u, u_t) - (p/C0) E(t).
double c0_constant(double p, double lambda1);

// Scalars of the initial pair that every bound is built from.
struct InitialScalars {
  double l2 = 0.0;    // |u0|_2^2
  double h1 = 0.0;    // |u0|^2
  double h_sq = 0.0;  // |u0|_H^2
  double v_l2 = 0.0;  // |u1|_2^2
  double uv = 0.0;    // (u0, u1)
  double e0 = 0.0;
  double i0 = 0.0;
  double j0 = 0.0;
  double n0() const { return v_l2 + h_sq; }
};

InitialScalars initial_scalars(const Field& u0, const Field& u1, double p);

struct SubcriticalBound {
  bool applicable = false;
  std::string reason;  // filled when not applicable
  double d_used = 0.0;
  double b = 0.0;
  double a = 0.0;
  double tau0 = 0.0;
  double t_upper = 0.0;
};

// Needs I(u0) < 0 and E(0) < d_value; b = d_value - E(0).  tau0 and the bound
// are the closed-form minimizer of t_of_tau below.
SubcriticalBound subcritical_upper_bound(const InitialScalars& init, double d_value, double p);

// T(tau) = 2(|u0|_2^2 + b tau^2) / ((p-2)[(u0,u1) + b tau] - 2|u0|^2);
// +inf where the denominator is not positive.
double subcritical_t_of_tau(const InitialScalars& init, double b, double p, double tau);

struct HighEnergyBound {
  bool applicable = false;
  std::string reason;
  double beta = 0.0;
  double t0_min = 0.0;
  double t0 = 0.0;  // golden-section minimizer over the admissible ray
  double t_upper = 0.0;
};

// Needs 0 < E(0) < (C0/p)(u0,u1) and E(0) < (C0/p)|u0|_2^2.
HighEnergyBound high_energy_upper_bound(const InitialScalars& init, double p, double c0);

double high_energy_t_of_t0(const InitialScalars& init, double beta, double p, double t0);

struct LowerBound {
  bool applicable = false;
  std::string reason;
  double c4 = 0.0;
  double c5 = 0.0;
  double n0 = 0.0;
  double t_lower = 0.0;
  // Provenance of the constants.
  double s_sq = 0.0;      // |w|_2^2 <= s_sq |w|^2, s_sq = 1/(1+lambda1)
  double a_const = 0.0;   // |Omega|^(1/2) / (e(p-1))
  double b_const = 0.0;   // B_mu^(p-1+mu) / (e mu)
  double absorber = 0.0;  // damping coefficient that absorbs |u_t|^2
  double b_mu = 0.0;
  double mu = 0.0;
};

// T >= int_{N(0)}^inf ds / (C4 + C5 s^(p-1+mu)) with C4 = S^2 A^2 / m,
// C5 = S^2 B^2 / m, m the damping absorber (m = 1 reproduces the unit
// omega = alpha = 1 constants).  Not applicable when omega and the damping
// floor both vanish.
LowerBound lifespan_lower_bound(const InitialScalars& init, const Exponents& e, double b_mu,
                                double measure, double lambda1, const DampingInfo& damping);

// The lower-bound integral alone (exposed for oracle comparison): adaptive
// quadrature on dyadic segments up to a cut plus the analytic pure-C5 tail.
double lower_bound_integral(double c4, double c5, double exponent, double n0);

enum class MonitorVerdict { pass, fail, not_applicable };

struct MonitorResult {
  MonitorVerdict verdict = MonitorVerdict::not_applicable;
  std::string detail;
  std::size_t first_violation = static_cast<std::size_t>(-1);
  double worst_slack = std::numeric_limits<double>::infinity();
};

// Checks H(t_j) >= (1 - rel_tol) H(0) e^(C0 t_j) with H = (u,u_t) - (p/C0)E
// at every sample; not applicable when H(0) <= 0.
MonitorResult monitor_growth(const TrajectoryRecord& record, double c0, double p,
                             double rel_tol = 1e-3);

// Checks G G'' - (p+2)/4 (G')^2 >= -rel_tol G |G''| at interior samples with
// G' assembled analytically from recorded scalars and G'' by centered
// differencing of G'.  T* is the final recorded time.  Not applicable unless
// the run started in the unstable set (I(u0) < 0) with b > 0; throws when the
// record is too short to difference.
MonitorResult monitor_concavity(const TrajectoryRecord& record, double b, double tau, double p,
                                double rel_tol = 1e-3);

struct OrderingCheck {
  std::string name;
  bool holds = false;
  double slack = 0.0;  // positive = margin, negative = violation size
};

struct BoundReport {
  RegimeTag regime;
  double c0 = 0.0;
  InitialScalars initial;
  SubcriticalBound subcritical_est;       // b from d_est (heuristic: d_est >= d)
  SubcriticalBound subcritical_rigorous;  // b from d0 (valid bound when d0 > E0)
  HighEnergyBound high_energy;
  LowerBound lower;
  MonitorResult growth;
  MonitorResult concavity;
  TerminationCause cause = TerminationCause::t_max_reached;
  std::optional<BlowupInfo> t_num;
  double t_final = 0.0;
  std::vector<OrderingCheck> ordering;
  std::vector<std::string> notes;
};

struct AuditInputs {
  InitialScalars initial;
  Exponents exponents;
  double lambda1 = 0.0;
  double measure = 0.0;
  DampingInfo damping;
  double d0 = 0.0;
  double d_est = 0.0;
  double b_mu = 0.0;
  RegimeTag regime;
};

// One consolidated report per completed run; pure function of its inputs.
BoundReport audit_run(const AuditInputs& in, const TrajectoryRecord& record);

std::string to_string(MonitorVerdict v);

}  // namespace logwave
