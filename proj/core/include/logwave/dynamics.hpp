#pragma once

// Time integration of
//
//   u_tt + lap^2 u - lap u - omega lap u_t + alpha(t) u_t = |u|^(p-2) u ln|u|
//
// by Strang splitting: half nonlinear kick, exact propagation of each sine
// mode's damped-oscillator system over dt (alpha frozen at the step
// midpoint), half kick.  The stiff fourth-order part therefore never limits
// dt; the controller only has to resolve the smooth nonlinearity and the
// blow-up approach.  Steps are adapted by step doubling with an
// error-per-unit-step acceptance test, which makes the global defect scale
// like dt^2 and proportionally with the tolerance.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "logwave/functionals.hpp"
#include "logwave/spectral.hpp"

namespace logwave {

struct DampingSchedule {
  enum class Kind { constant, exponential_decay };
  Kind kind = Kind::constant;
  double alpha0 = 1.0;  // alpha(0) >= 0
  double rate = 0.0;    // decay rate >= 0 (exponential_decay)

  double operator()(double t) const {
    return kind == Kind::constant ? alpha0 : alpha0 * std::exp(-rate * t);
  }
  // inf over t >= 0; enters the lower-bound absorber.
  double floor() const {
    return kind == Kind::constant || rate == 0.0 ? alpha0 : 0.0;
  }
};

// Damping coefficients as the bound evaluators see them.
struct DampingInfo {
  double omega = 1.0;
  double alpha_floor = 1.0;  // inf_t alpha(t)
};

struct IntegratorConfig {
  double tolerance = 1e-8;  // relative, in (0,1)
  double dt_init = 0.0;     // 0 = automatic
  double dt_min = 1e-12;
  double dt_max = 0.05;
  double t_max = 1.0;
  bool nonlinear = true;  // diagnostic switch: false integrates the linear part only
};

struct DetectorConfig {
  double divergence_threshold = 1e8;  // on |u|_2^2 + int_0^t |u|^2 ds
};

// Everything step() needs besides the state itself.
struct EquationSetup {
  DomainPtr domain;
  double p = 3.0;
  double omega = 1.0;
  DampingSchedule alpha;
  bool nonlinear = true;
};

struct State {
  double t = 0.0;
  Field u;
  Field v;  // u_t
  double acc_dissipation = 0.0;  // int_0^t alpha |u_s|_2^2 + omega |grad u_s|_2^2 ds
  double acc_h1 = 0.0;           // int_0^t |u(s)|^2 ds

  State(Field u0, Field u1) : u(std::move(u0)), v(std::move(u1)) {}
};

enum class StepStatus { ok, overflow };

// One Strang step of size dt.  Accumulators advance with the midpoint rule so
// the recorded dissipation integral carries the same order-2 defect as the
// state itself.  A non-finite result reports overflow and leaves the caller
// to treat it as a blow-up signal; it never throws.
StepStatus step(State& state, double dt, const EquationSetup& eq);

enum class TerminationCause { t_max_reached, blow_up, dt_underflow };

enum class BlowupTrigger { divergence_threshold, dt_underflow_growth, overflow };

struct BlowupInfo {
  double t_resolved = 0.0;   // last time the state was accepted
  double t_attempted = 0.0;  // end of the step that was or would have been tried
  BlowupTrigger trigger = BlowupTrigger::divergence_threshold;
};

struct TrajectoryRecord {
  std::vector<double> t;
  std::vector<double> e;       // E = 1/2 |u_t|_2^2 + J(u)
  std::vector<double> j;
  std::vector<double> i;
  std::vector<double> l2_sq;   // |u|_2^2
  std::vector<double> h1_sq;   // |u|^2
  std::vector<double> h_sq;    // |u|_H^2
  std::vector<double> v_l2_sq; // |u_t|_2^2
  std::vector<double> uv_inner;
  std::vector<double> n;       // |u_t|_2^2 + |u|_H^2
  std::vector<double> acc_h1;  // int_0^t |u|^2 ds
  std::vector<double> acc_dissipation;
  std::vector<double> dt;      // step that produced the sample (0 for t = 0)

  TerminationCause cause = TerminationCause::t_max_reached;
  std::optional<BlowupInfo> blowup;

  std::size_t size() const { return t.size(); }
};

struct SimulationResult {
  TrajectoryRecord record;
  State final_state;
};

// Runs the adaptive loop from (u0, u1) until t_max, blow-up or dt underflow.
// Every accepted step is recorded; output thinning is the caller's business.
// Deterministic: same inputs give a bit-identical record.
SimulationResult simulate(const EquationSetup& eq, const IntegratorConfig& integrator,
                          const DetectorConfig& detector, const Field& u0, const Field& u1);

struct DetectorVerdict {
  bool blow_up = false;
  BlowupInfo info;
};

// Divergence test on the tail of a record: fires when |u|_2^2 + int |u|^2 ds
// crosses the threshold, or when dt has collapsed to dt_min while N is still
// growing.
DetectorVerdict detect_blowup(const TrajectoryRecord& record, const DetectorConfig& detector,
                              double dt_next, double dt_min);

struct DissipationResidual {
  std::vector<double> residual;   // E(t) - E(0) + acc_dissipation(t)
  double max_abs = 0.0;
  double max_rel = 0.0;           // scaled by max(1, |E(0)|)
  double max_energy_increase = 0.0;  // largest E(t_{j+1}) - E(t_j)
};

DissipationResidual dissipation_residual(const TrajectoryRecord& record);

std::string to_string(TerminationCause cause);
std::string to_string(BlowupTrigger trigger);

}  // namespace logwave
