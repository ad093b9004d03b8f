#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "logwave/runner.hpp"
#include "logwave/verify.hpp"

using namespace logwave;

namespace {

// Cheap template: tiny spectral resolution and a light well search so every
// pipeline test stays fast.
const char* kBaseConfig =
    "exponents.p = 3\n"
    "domain.modes = 16\n"
    "well.restarts = 2\n"
    "well.mode_budget = 4\n"
    "integrator.tolerance = 1e-6\n"
    "integrator.t_max = 0.4\n"
    "initial.kind = eigenmode\n"
    "initial.amplitude = 1.0\n";

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
  const std::filesystem::path dir = std::filesystem::path("runner_test_out") / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("analyze pipeline") {
  SUBCASE("zero data reports none_proven") {
    const ProblemConfig cfg = parse_config_text(
        "exponents.p = 3\ndomain.modes = 16\nwell.restarts = 2\nwell.mode_budget = 4\n"
        "initial.kind = modes\n");
    const auto dir = fresh_dir("analyze_zero");
    const AnalyzeOutcome outcome = cmd_analyze(cfg, dir.string());
    CHECK(outcome.ctx.regime.none_proven());
    const std::string report = slurp(outcome.report_path);
    CHECK(report.find("regime.none_proven = true") != std::string::npos);
    CHECK(report.find("well.d0 = ") != std::string::npos);
  }

  SUBCASE("negative-energy preset carries its tag and is byte-stable") {
    const ProblemConfig cfg = parse_config_text(
        "exponents.p = 3\ndomain.modes = 16\nwell.restarts = 2\nwell.mode_budget = 4\n"
        "initial.kind = preset\ninitial.preset = negative_energy\n");
    const AnalyzeOutcome a = cmd_analyze(cfg, fresh_dir("analyze_neg_a").string());
    const AnalyzeOutcome b = cmd_analyze(cfg, fresh_dir("analyze_neg_b").string());
    CHECK(a.ctx.regime.negative_energy);
    const std::string report = slurp(a.report_path);
    CHECK(report.find("regime.negative_energy = true") != std::string::npos);
    CHECK(report.find("preset.verified.0 = ") != std::string::npos);
    CHECK(report == slurp(b.report_path));
  }
}

TEST_CASE("verify suite flags an injected eigen-table fault") {
  logwave::VerifyOptions options;
  options.seed = 5;
  options.inject_eigen_fault = true;
  const logwave::VerifyResult result = logwave::run_verification(options);
  CHECK_FALSE(result.all_passed);
  CHECK(result.report.find("FAIL spectral.eigen_relation") != std::string::npos);

  options.inject_eigen_fault = false;
  CHECK(logwave::run_verification(options).all_passed);
}

TEST_CASE("csv schema is frozen") {
  const ProblemConfig cfg =
      apply_overrides(parse_config_text(kBaseConfig), {{"integrator.t_max", "1e-4"}});
  const auto dir = fresh_dir("csv_schema");
  const SimulateOutcome outcome = cmd_simulate(cfg, dir.string());

  const std::string csv = slurp(outcome.csv_path);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "t,E,J,I,l2_sq,h1_sq,H_sq,v_l2_sq,uv_inner,N,H_growth,dt");

  int rows = 0;
  std::string line;
  while (std::getline(lines, line))
    if (!line.empty()) ++rows;
  CHECK(rows >= 2);  // the t = 0 sample plus at least one step
}

TEST_CASE("simulate pipeline writes analysis, csv and summary") {
  const ProblemConfig cfg = parse_config_text(kBaseConfig);
  const auto dir = fresh_dir("pipeline");
  const SimulateOutcome outcome = cmd_simulate(cfg, dir.string());

  CHECK(std::filesystem::exists(outcome.analysis_path));
  CHECK(std::filesystem::exists(outcome.csv_path));
  CHECK(std::filesystem::exists(outcome.summary_path));

  const std::string summary = slurp(outcome.summary_path);
  CHECK(summary.find("termination.cause = t_max_reached") != std::string::npos);
  CHECK(summary.find("config.digest = ") != std::string::npos);
  CHECK(summary.find("file.2 = summary.txt") != std::string::npos);
  // No timing in the files: reruns must be byte-identical.
  CHECK(summary.find("wall") == std::string::npos);
}

TEST_CASE("blow-up preset summary carries the bracket and the bounds") {
  const ProblemConfig cfg = parse_config_text(
      "exponents.p = 3\n"
      "domain.modes = 16\n"
      "well.restarts = 2\n"
      "well.mode_budget = 4\n"
      "integrator.tolerance = 1e-6\n"
      "integrator.t_max = 10\n"
      "initial.kind = preset\n"
      "initial.preset = negative_energy\n");
  const auto dir = fresh_dir("blowup_summary");
  const SimulateOutcome outcome = cmd_simulate(cfg, dir.string());
  REQUIRE(outcome.record.cause == TerminationCause::blow_up);

  const std::string summary = slurp(outcome.summary_path);
  CHECK(summary.find("termination.blowup.t_resolved = ") != std::string::npos);
  CHECK(summary.find("termination.blowup.t_attempted = ") != std::string::npos);
  CHECK(summary.find("bounds.subcritical_rigorous.t_upper = ") != std::string::npos);
  CHECK(summary.find("bounds.lower.t_lower = ") != std::string::npos);
  CHECK(summary.find("ordering.0.check = t_lower <= t_num_hi") != std::string::npos);
}

TEST_CASE("reruns with one seed are byte-identical") {
  const ProblemConfig cfg = parse_config_text(kBaseConfig);
  const auto dir1 = fresh_dir("repeat_a");
  const auto dir2 = fresh_dir("repeat_b");
  const SimulateOutcome a = cmd_simulate(cfg, dir1.string());
  const SimulateOutcome b = cmd_simulate(cfg, dir2.string());
  CHECK(slurp(a.analysis_path) == slurp(b.analysis_path));
  CHECK(slurp(a.csv_path) == slurp(b.csv_path));
  CHECK(slurp(a.summary_path) == slurp(b.summary_path));
}

TEST_CASE("sweep axes parse both forms") {
  const SweepAxis list = parse_sweep_axis("initial.amplitude=1,2.5,4");
  CHECK(list.key == "initial.amplitude");
  REQUIRE(list.values.size() == 3);
  CHECK(list.values[1] == "2.5");

  const SweepAxis range = parse_sweep_axis("equation.omega=0:1:5");
  REQUIRE(range.values.size() == 5);
  CHECK(range.values.front() == "0");
  CHECK(range.values.back() == "1");

  CHECK_THROWS_AS(parse_sweep_axis("missing-equals"), std::invalid_argument);
}

TEST_CASE("sweep") {
  const ProblemConfig base = parse_config_text(kBaseConfig);

  SUBCASE("one-point sweep agrees with a direct simulate") {
    const auto dir = fresh_dir("sweep_single");
    const SweepOutcome sweep =
        cmd_sweep(base, {parse_sweep_axis("initial.amplitude=1.0")}, dir.string(), 1);
    REQUIRE(sweep.points.size() == 1);
    CHECK(sweep.failures == 0);
    REQUIRE(sweep.points[0].ok);

    const SimulateOutcome direct = cmd_simulate(base, fresh_dir("sweep_single_ref").string());
    // cause,E0,... : compare the cause and E0 fields.
    std::istringstream fields(sweep.points[0].summary_line);
    std::string cause, e0;
    std::getline(fields, cause, ',');
    std::getline(fields, e0, ',');
    CHECK(cause == to_string(direct.record.cause));
    CHECK(e0 == format_double(direct.ctx.regime.e0));
  }

  SUBCASE("amplitude sweep brackets the E(0) = 0 crossing") {
    const auto dir = fresh_dir("sweep_amplitude");
    const SweepOutcome sweep =
        cmd_sweep(base, {parse_sweep_axis("initial.amplitude=1:6:6")}, dir.string(), 2);
    CHECK(sweep.failures == 0);
    std::vector<double> e0s;
    for (const auto& pt : sweep.points) {
      REQUIRE(pt.ok);
      std::istringstream fields(pt.summary_line);
      std::string cause, e0;
      std::getline(fields, cause, ',');
      std::getline(fields, e0, ',');
      e0s.push_back(std::stod(e0));
    }
    CHECK(e0s.front() > 0.0);
    CHECK(e0s.back() < 0.0);
    // Strictly decreasing once past the fibering peak.
    bool crossed = false;
    for (std::size_t i = 1; i < e0s.size(); ++i) {
      if (e0s[i] < 0.0 && e0s[i - 1] >= 0.0) crossed = true;
      if (e0s[i - 1] < 0.0) CHECK(e0s[i] < e0s[i - 1]);
    }
    CHECK(crossed);
  }

  SUBCASE("aggregate bytes do not depend on the worker count") {
    const auto dir1 = fresh_dir("sweep_serial");
    const auto dir2 = fresh_dir("sweep_parallel");
    const auto axis = parse_sweep_axis("initial.amplitude=1:4:4");
    const SweepOutcome serial = cmd_sweep(base, {axis}, dir1.string(), 1);
    const SweepOutcome parallel = cmd_sweep(base, {axis}, dir2.string(), 4);
    CHECK(slurp(serial.table_path) == slurp(parallel.table_path));
  }

  SUBCASE("a failing point is recorded and the sweep continues") {
    const auto dir = fresh_dir("sweep_failure");
    // p = 1 violates the exponent assumption for that point only.
    const SweepOutcome sweep =
        cmd_sweep(base, {parse_sweep_axis("exponents.p=3,1")}, dir.string(), 1);
    CHECK(sweep.points.size() == 2);
    CHECK(sweep.failures == 1);
    CHECK(sweep.points[0].ok);
    CHECK_FALSE(sweep.points[1].ok);
    const std::string table = slurp(sweep.table_path);
    CHECK(table.find("failed: ") != std::string::npos);
  }
}
