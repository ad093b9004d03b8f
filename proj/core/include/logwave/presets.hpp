#pragma once

// Shipped initial-data presets.  Each one solves for its amplitude on the
// first-eigenmode fibering profile (deterministic bisection) and then
// re-verifies its defining inequalities with the full functionals before
// handing the fields out; a preset that fails its own inequality throws
// instead of silently running the wrong regime.
//
//   negative_energy       E(0) < 0 (large-amplitude eigenmode)
//   subcritical_unstable  I(u0) < 0 and 0 < E(0) < d_est (also below d0)
//   small_data_global     I(u0) > 0 and E(0) < d_est
//   high_energy_growth    0 < E(0) < (C0/p)(u0,u1) via u1 = c u0, plus the
//                         |u0|_2^2 variant that makes the upper bound apply

#include <string>
#include <utility>
#include <vector>

#include "logwave/config.hpp"
#include "logwave/functionals.hpp"
#include "logwave/spectral.hpp"

namespace logwave {

struct PresetData {
  Field u0;
  Field u1;
  double amplitude = 0.0;       // eigenmode amplitude used for u0
  double velocity_scale = 0.0;  // u1 = velocity_scale * u0
  std::vector<std::string> verified;  // defining inequalities, with values
};

std::vector<std::string> preset_names();

PresetData make_preset(const std::string& name, const DomainPtr& domain, const Exponents& e,
                       const WellAnalysis& well, double lambda1);

// Initial data from any config kind (preset | modes | eigenmode).
std::pair<Field, Field> make_initial_data(const ProblemConfig& cfg, const DomainPtr& domain,
                                          const Exponents& e, const WellAnalysis& well);

}  // namespace logwave
