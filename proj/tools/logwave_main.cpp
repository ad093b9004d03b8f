// Command line front end: analyze, simulate, sweep, verify.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "logwave/config.hpp"
#include "logwave/runner.hpp"
#include "logwave/verify.hpp"

namespace {

logwave::ProblemConfig load_config(const std::string& path, std::uint64_t seed, bool seed_set) {
  logwave::ProblemConfig cfg = logwave::parse_config(path);
  if (seed_set) cfg.well.seed = seed;
  return cfg;
}

void print_regime(const logwave::RegimeTag& r) {
  std::cout << "regime:";
  if (r.negative_energy) std::cout << " negative_energy";
  if (r.subcritical_unstable) std::cout << " subcritical_unstable";
  if (r.high_energy_growth) std::cout << " high_energy_growth";
  if (r.high_energy_bound) std::cout << " high_energy_bound_eligible";
  if (r.none_proven()) std::cout << " none_proven";
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral simulator and lifespan-bound auditor for the damped "
               "fourth-order wave equation with logarithmic nonlinearity"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 42;
  bool seed_set = false;
  int workers = 1;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config_path, "configuration file");
    if (needs_config) opt->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed, "seed override for the well-analysis search")
        ->each([&seed_set](const std::string&) { seed_set = true; });
  };

  auto* analyze = app.add_subcommand("analyze", "well analysis and regime classification");
  add_common(analyze, true);

  auto* simulate = app.add_subcommand("simulate", "analyze, integrate and audit one run");
  add_common(simulate, true);

  auto* sweep = app.add_subcommand("sweep", "grid of simulate runs over config overrides");
  add_common(sweep, true);
  std::vector<std::string> axis_specs;
  sweep->add_option("--axis", axis_specs,
                    "sweep axis 'key=v1,v2,...' or 'key=start:stop:count' (repeatable)")
      ->required();
  sweep->add_option("--workers", workers, "concurrent runs");

  auto* verify = app.add_subcommand("verify", "run the full property suite");
  verify->add_option("--out", out_dir, "output directory");
  verify->add_option("--seed", seed, "property-suite seed");
  std::string fault;
  verify->add_option("--inject-fault", fault,
                     "test hook: corrupt an internal table (eigen-table)")
      ->check(CLI::IsMember({"eigen-table"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      const auto outcome =
          logwave::cmd_analyze(load_config(config_path, seed, seed_set), out_dir);
      std::cout << "wrote " << outcome.report_path << "\n";
      print_regime(outcome.ctx.regime);
      std::cout << "d0 = " << logwave::format_double(outcome.ctx.well.d0)
                << "  d_est = " << logwave::format_double(outcome.ctx.well.d_est) << "\n";
      return 0;
    }
    if (*simulate) {
      const auto outcome =
          logwave::cmd_simulate(load_config(config_path, seed, seed_set), out_dir);
      std::cout << "wrote " << outcome.summary_path << "\n";
      print_regime(outcome.ctx.regime);
      std::cout << "termination: " << logwave::to_string(outcome.record.cause);
      if (outcome.record.blowup)
        std::cout << " in [" << logwave::format_double(outcome.record.blowup->t_resolved) << ", "
                  << logwave::format_double(outcome.record.blowup->t_attempted) << "]";
      std::cout << "\nsamples: " << outcome.record.size()
                << "  wall: " << outcome.wall_seconds << " s\n";
      return 0;
    }
    if (*sweep) {
      std::vector<logwave::SweepAxis> axes;
      for (const auto& spec : axis_specs) axes.push_back(logwave::parse_sweep_axis(spec));
      const auto outcome = logwave::cmd_sweep(load_config(config_path, seed, seed_set), axes,
                                              out_dir, workers);
      std::cout << "wrote " << outcome.table_path << " (" << outcome.points.size()
                << " points, " << outcome.failures << " failures)\n";
      return outcome.failures == 0 ? 0 : 1;
    }
    if (*verify) {
      logwave::VerifyOptions options;
      options.seed = seed;
      options.inject_eigen_fault = fault == "eigen-table";
      const logwave::VerifyResult result = logwave::run_verification(options);
      logwave::write_text_file(
          (std::filesystem::path(out_dir) / "verify.txt").string(), result.report);
      std::cout << result.report;
      return result.all_passed ? 0 : 1;
    }
  } catch (const logwave::ConfigError& err) {
    std::cerr << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
