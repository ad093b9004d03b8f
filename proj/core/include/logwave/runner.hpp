#pragma once

// Pipelines behind the CLI subcommands: analyze (well analysis + regime
// report), simulate (analyze + time integration + bound audit, CSV and
// summary files), sweep (a parameter grid of simulate runs, optionally
// concurrent, merged deterministically) and the writers they share.  Output
// files contain no timing or machine state, so reruns with one seed are
// byte-identical; wall-clock goes to the console.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "logwave/bounds.hpp"
#include "logwave/config.hpp"
#include "logwave/dynamics.hpp"
#include "logwave/functionals.hpp"
#include "logwave/presets.hpp"

namespace logwave {

struct RunContext {
  ProblemConfig cfg;
  DomainPtr domain;
  Exponents exponents;
  WellAnalysis well;
  Field u0;
  Field u1;
  RegimeTag regime;
  std::vector<std::string> preset_checks;
  std::string digest;
};

RunContext prepare_run(const ProblemConfig& cfg);

EquationSetup equation_setup(const ProblemConfig& cfg, const DomainPtr& domain);

// Ordered key = value document; insertion order is the serialization order.
class ReportDoc {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  void add(const std::string& key, bool value);
  void add_int(const std::string& key, long long value);
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

ReportDoc analysis_report(const RunContext& ctx);
ReportDoc summary_report(const RunContext& ctx, const TrajectoryRecord& record,
                         const BoundReport& bounds, const std::vector<std::string>& files);

// CSV with the frozen column set
//   t,E,J,I,l2_sq,h1_sq,H_sq,v_l2_sq,uv_inner,N,H_growth,dt
// thinned by `stride` but always keeping the first and last sample.
std::string trajectory_csv(const TrajectoryRecord& record, double p, double lambda1, int stride);

struct AnalyzeOutcome {
  RunContext ctx;
  std::string report_path;
};

AnalyzeOutcome cmd_analyze(const ProblemConfig& cfg, const std::string& out_dir);

struct SimulateOutcome {
  RunContext ctx;
  TrajectoryRecord record;
  BoundReport bounds;
  std::string analysis_path;
  std::string csv_path;
  std::string summary_path;
  double wall_seconds = 0.0;  // console-only; never serialized
};

SimulateOutcome cmd_simulate(const ProblemConfig& cfg, const std::string& out_dir);

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

// "key=v1,v2,..." or "key=start:stop:count" (inclusive linear grid).
SweepAxis parse_sweep_axis(const std::string& text);

struct SweepPoint {
  std::vector<std::string> values;  // one per axis, grid order
  bool ok = false;
  std::string error;
  std::string summary_line;  // selected scalars for the aggregate table
};

struct SweepOutcome {
  std::vector<SweepPoint> points;
  std::string table_path;
  int failures = 0;
};

SweepOutcome cmd_sweep(const ProblemConfig& base, const std::vector<SweepAxis>& axes,
                       const std::string& out_dir, int workers);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace logwave
