#pragma once

// Run configuration: a flat `section.key = value` text format chosen for
// clean diffs in sweep templates.  Parsing validates everything and reports
// every violation at once, each naming the offending key.  Serialization is
// canonical (fixed key order, shortest round-trip floats), so a config digest
// is stable under reordering of the input file.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "logwave/dynamics.hpp"
#include "logwave/functionals.hpp"
#include "logwave/spectral.hpp"

namespace logwave {

struct ModeAmplitude {
  std::array<int, 2> index{1, 1};  // 1-based per axis; second entry unused in 1D
  double amplitude = 0.0;
};

struct InitialDataConfig {
  enum class Kind { preset, modes, eigenmode };
  Kind kind = Kind::preset;
  std::string preset = "small_data_global";
  std::vector<ModeAmplitude> u0;
  std::vector<ModeAmplitude> u1;
  double amplitude = 1.0;       // eigenmode kind: u0 = amplitude * phi_1
  double velocity_scale = 0.0;  // eigenmode kind: u1 = velocity_scale * u0
};

struct WellConfig {
  int restarts = 6;
  int mode_budget = 16;
  std::uint64_t seed = 42;
};

struct OutputConfig {
  std::string dir = "out";
  int sample_stride = 1;
};

struct ProblemConfig {
  DomainSpec domain{1, {std::numbers::pi, std::numbers::pi}, {32, 32}, {0, 0}};
  double p = 3.0;
  std::optional<double> sigma;  // empty = default rule
  std::optional<double> mu;
  double omega = 1.0;
  bool nonlinear = true;
  DampingSchedule damping;
  InitialDataConfig initial;
  IntegratorConfig integrator;
  DetectorConfig detector;
  WellConfig well;
  OutputConfig output;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Parse and fully validate; throws ConfigError listing every violation.
ProblemConfig parse_config_text(const std::string& text);
ProblemConfig parse_config(const std::string& path);

// Canonical serialization and its FNV-1a digest.
std::string serialize_config(const ProblemConfig& cfg);
std::string config_digest(const ProblemConfig& cfg);

// Apply `section.key = value` overrides (sweep axes) on top of a template.
ProblemConfig apply_overrides(const ProblemConfig& base,
                              const std::vector<std::pair<std::string, std::string>>& overrides);

// Derived pieces.
Exponents resolved_exponents(const ProblemConfig& cfg);
DomainSpec resolved_domain_spec(const ProblemConfig& cfg);  // fills auto grid = 2*modes
DampingInfo damping_info(const ProblemConfig& cfg);

// Shortest representation that parses back to the same double.
std::string format_double(double value);

}  // namespace logwave
