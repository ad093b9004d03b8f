// Acceptance suite: end-to-end checks of the simulator and the lifespan
// machinery at their contracted tolerances, one PASS/FAIL line per criterion.
//
// Usage: acceptance [--cli PATH] [--workdir DIR]
// The CLI path is needed for the byte-determinism criterion; without it that
// criterion is marked FAIL (it is part of the contract).

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "logwave/bounds.hpp"
#include "logwave/config.hpp"
#include "logwave/dynamics.hpp"
#include "logwave/functionals.hpp"
#include "logwave/numerics.hpp"
#include "logwave/presets.hpp"
#include "logwave/runner.hpp"
#include "logwave/spectral.hpp"

using namespace logwave;

namespace {

constexpr double kPi = std::numbers::pi;

struct Harness {
  int failures = 0;

  void report(int criterion, const std::string& what, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": " << what;
    if (!detail.empty()) std::cout << " [" << detail << "]";
    std::cout << std::endl;
    if (!ok) ++failures;
  }
};

Field smooth_random_field(const DomainPtr& dom, SplitMix64& rng, double scale = 1.0) {
  const auto& mu = dom->eigenvalues();
  std::vector<double> c(dom->mode_count());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = scale * rng.next_normal() / (1.0 + mu[k]);
  return Field(dom, std::move(c));
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<missing:" + path.string() + ">";
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---- criterion 1: spectral exactness ----
void criterion_spectral(Harness& h) {
  bool ok = true;
  std::string detail;

  // Eigenmode transform: one-hot coefficients against analytic samples.
  {
    auto dom = Domain::create({1, {kPi, 0}, {32, 0}, {64, 0}});
    std::vector<double> c(dom->mode_count(), 0.0);
    c[4] = 1.0;  // sin(5x)
    Field u(dom, std::move(c));
    double worst = 0.0;
    for (int j = 0; j < 63; ++j) {
      const double x = (j + 1) * kPi / 64.0;
      worst = std::max(worst, std::abs(u.samples()[j] - std::sin(5.0 * x)));
    }
    auto dom2 = Domain::create({2, {kPi, kPi}, {8, 8}, {16, 16}});
    std::vector<double> c2(dom2->mode_count(), 0.0);
    c2[0] = 1.0;  // sin(x) sin(y)
    Field u2(dom2, std::move(c2));
    for (int j1 = 0; j1 < 15; ++j1)
      for (int j2 = 0; j2 < 15; ++j2) {
        const double x = (j1 + 1) * kPi / 16.0, y = (j2 + 1) * kPi / 16.0;
        worst = std::max(worst,
                         std::abs(u2.samples()[j1 * 15 + j2] - std::sin(x) * std::sin(y)));
      }
    ok = ok && worst <= 1e-10;
    detail += "eigenmode_err=" + format_double(worst);

    // Eigenvalue application.
    const double lap = apply_neg_laplacian(u).coeffs()[4];
    const double bilap = apply_bilaplacian(u).coeffs()[4];
    const double lap2 = apply_neg_laplacian(u2).coeffs()[0];
    const double worst_eig = std::max({std::abs(lap - 25.0), std::abs(bilap - 625.0),
                                       std::abs(lap2 - 2.0)});
    ok = ok && worst_eig <= 1e-10;
  }

  // int_0^pi sin^3 = 4/3 to 1e-10.
  {
    auto dom = Domain::create({1, {kPi, 0}, {512, 0}, {1024, 0}});
    std::vector<double> c(dom->mode_count(), 0.0);
    c[0] = 1.0;
    Field u(dom, std::move(c));
    std::vector<double> cube(u.samples().size());
    for (std::size_t i = 0; i < cube.size(); ++i)
      cube[i] = u.samples()[i] * u.samples()[i] * u.samples()[i];
    const double err = std::abs(dom->integrate(cube) - 4.0 / 3.0);
    ok = ok && err <= 1e-10;
    detail += " sin3_err=" + format_double(err);
  }

  // Transform round trip <= 1e-12 relative.
  {
    SplitMix64 rng(2024);
    double worst = 0.0;
    for (const auto& dom : {Domain::create({1, {kPi, 0}, {128, 0}, {256, 0}}),
                            Domain::create({2, {kPi, 1.3}, {12, 10}, {24, 20}})}) {
      for (int rep = 0; rep < 5; ++rep) {
        std::vector<double> c(dom->mode_count());
        for (auto& ck : c) ck = rng.next_normal();
        std::vector<double> grid(dom->node_count()), back(dom->mode_count());
        dom->synthesize(c, grid);
        dom->analyze(grid, back);
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) {
          num = std::max(num, std::abs(back[k] - c[k]));
          den = std::max(den, std::abs(c[k]));
        }
        worst = std::max(worst, num / den);
      }
    }
    ok = ok && worst <= 1e-12;
    detail += " roundtrip=" + format_double(worst);
  }

  h.report(1, "spectral exactness", ok, detail);
}

// ---- criterion 2: energy dissipation identity and its convergence order ----
void criterion_energy_identity(Harness& h) {
  const ProblemConfig cfg = parse_config_text(
      "exponents.p = 3\n"
      "domain.modes = 16\n"
      "integrator.tolerance = 1e-10\n"
      "integrator.t_max = 0.5\n"
      "initial.kind = preset\n"
      "initial.preset = small_data_global\n"
      "well.restarts = 4\n"
      "well.mode_budget = 8\n");
  RunContext ctx = prepare_run(cfg);
  const EquationSetup eq = equation_setup(cfg, ctx.domain);

  const SimulationResult tight = simulate(eq, cfg.integrator, cfg.detector, ctx.u0, ctx.u1);
  const DissipationResidual tight_res = dissipation_residual(tight.record);
  const bool residual_ok = tight_res.max_rel <= 1e-6;

  // Convergence order: residual against the median accepted dt over a 4x
  // tolerance ladder.
  std::vector<double> log_res, log_dt;
  for (double tol : {1e-6, 2.5e-7, 6.25e-8, 1.5625e-8}) {
    IntegratorConfig integ = cfg.integrator;
    integ.tolerance = tol;
    const SimulationResult run = simulate(eq, integ, cfg.detector, ctx.u0, ctx.u1);
    std::vector<double> dts(run.record.dt.begin() + 1, run.record.dt.end());
    std::nth_element(dts.begin(), dts.begin() + dts.size() / 2, dts.end());
    log_res.push_back(std::log(dissipation_residual(run.record).max_rel));
    log_dt.push_back(std::log(dts[dts.size() / 2]));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(log_res.size());
  for (std::size_t i = 0; i < log_res.size(); ++i) {
    sx += log_dt[i];
    sy += log_res[i];
    sxx += log_dt[i] * log_dt[i];
    sxy += log_dt[i] * log_res[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const bool order_ok = slope >= 1.8 && slope <= 2.2;

  h.report(2, "energy dissipation identity", residual_ok && order_ok,
           "max_rel_residual=" + format_double(tight_res.max_rel) +
               " order=" + format_double(slope));
}

// ---- criterion 3: fibering suite ----
void criterion_fibering(Harness& h) {
  auto dom = Domain::create({1, {kPi, 0}, {32, 0}, {64, 0}});
  const double p = 3.0;
  SplitMix64 rng(99);

  double worst_resid = 0.0, worst_fd = 0.0;
  int sign_violations = 0;
  for (int rep = 0; rep < 20; ++rep) {
    Field u = smooth_random_field(dom, rng);
    u *= 1.0 / std::sqrt(h_norm_sq(u));
    const FiberingScalars fs = fibering_scalars(u, p);
    const LambdaStar ls = lambda_star(fs);

    // Residual on the Nehari-adjacent rescaling, relative to |w|_H^2.
    Field w = u;
    w *= ls.lambda;
    const FiberingScalars ws = fibering_scalars(w, p);
    const LambdaStar wls = lambda_star(ws);
    worst_resid = std::max(worst_resid, std::abs(i_at_scale(ws, wls.lambda)) / ws.h_sq);

    // I(lambda u) = lambda dJ/dlambda against centered differences.
    for (double lambda : {0.5 * ls.lambda, ls.lambda, 2.0 * ls.lambda}) {
      const double step = 1e-5 * lambda;
      const double dj =
          (j_at_scale(fs, lambda + step) - j_at_scale(fs, lambda - step)) / (2.0 * step);
      const double lhs = i_at_scale(fs, lambda);
      worst_fd = std::max(worst_fd, std::abs(lhs - lambda * dj) /
                                        (lambda * lambda * fs.h_sq + std::abs(lhs)));
    }

    // Strict sign change across lambda_star on a 50-point grid.
    for (int g = 1; g <= 50; ++g) {
      if (!(i_at_scale(fs, ls.lambda * g / 51.0) > 0.0)) ++sign_violations;
      if (!(i_at_scale(fs, ls.lambda * (1.0 + 0.08 * g)) < 0.0)) ++sign_violations;
    }
  }

  const bool ok = worst_resid <= 1e-9 && worst_fd <= 1e-6 && sign_violations == 0;
  h.report(3, "fibering map suite", ok,
           "resid=" + format_double(worst_resid) + " fd=" + format_double(worst_fd) +
               " sign_violations=" + std::to_string(sign_violations));
}

// ---- criterion 4: potential-well depth consistency ----
void criterion_depth(Harness& h) {
  auto dom = Domain::create({1, {kPi, 0}, {64, 0}, {128, 0}});
  const Exponents e = resolve_exponents(3.0, 1);
  const WellAnalysis well = analyze_well(dom, e, 6, 4, 2024);
  bool ok = well.d_est >= 0.95 * well.d0;
  std::string detail = "d0=" + format_double(well.d0) + " d_est=" + format_double(well.d_est);

  DepthEstimate prev = well.depth;
  for (int budget : {16, 64}) {
    std::vector<std::vector<double>> warm = {prev.coeffs};
    const DepthEstimate next = estimate_well_depth(dom, e, 6, budget, 2024, warm);
    ok = ok && next.d_est <= prev.d_est + 1e-9;
    prev = next;
  }
  detail += " d_est(64)=" + format_double(prev.d_est);
  h.report(4, "well depth floor and budget monotonicity", ok, detail);
}

// ---- criteria 5 and 6 share the blow-up preset runs ----
struct PresetRun {
  RunContext ctx;
  SimulationResult sim;
  BoundReport bounds;
};

PresetRun run_preset(const std::string& preset, double t_max) {
  const ProblemConfig cfg = parse_config_text(
      "exponents.p = 3\n"
      "domain.modes = 16\n"
      "integrator.tolerance = 1e-8\n"
      "integrator.t_max = " + format_double(t_max) + "\n"
      "initial.kind = preset\n"
      "initial.preset = " + preset + "\n"
      "well.restarts = 4\n"
      "well.mode_budget = 8\n");
  RunContext ctx = prepare_run(cfg);
  const EquationSetup eq = equation_setup(cfg, ctx.domain);
  SimulationResult sim = simulate(eq, cfg.integrator, cfg.detector, ctx.u0, ctx.u1);

  AuditInputs in;
  in.initial = initial_scalars(ctx.u0, ctx.u1, ctx.exponents.p);
  in.exponents = ctx.exponents;
  in.lambda1 = ctx.domain->lambda1();
  in.measure = ctx.domain->measure();
  in.damping = damping_info(cfg);
  in.d0 = ctx.well.d0;
  in.d_est = ctx.well.d_est;
  in.b_mu = ctx.well.b_mu.value;
  in.regime = ctx.regime;
  BoundReport bounds = audit_run(in, sim.record);
  return PresetRun{std::move(ctx), std::move(sim), std::move(bounds)};
}

void criterion_invariance(Harness& h, const PresetRun& sub) {
  const TrajectoryRecord& rec = sub.sim.record;
  const double p = sub.ctx.exponents.p;
  const double d_est = sub.ctx.well.d_est;

  std::size_t i_violations = 0, floor_violations = 0;
  double floor_min = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < rec.size(); ++j) {
    if (!(rec.i[j] < 0.0)) ++i_violations;
    // (p-2)/2p |u|_H^2 + |u|_p^p / p^2 = J - I/p.
    const double floor = rec.j[j] - rec.i[j] / p;
    floor_min = std::min(floor_min, floor);
    if (!(floor > d_est - 1e-6)) ++floor_violations;
  }
  const bool ok = i_violations == 0 && floor_violations == 0 && rec.size() > 0;
  h.report(5, "unstable-set invariance on subcritical_unstable", ok,
           "samples=" + std::to_string(rec.size()) +
               " floor_min=" + format_double(floor_min) + " d_est=" + format_double(d_est));
}

void criterion_ordering(Harness& h, const PresetRun& neg, const PresetRun& sub) {
  bool ok = true;
  std::string detail;
  for (const PresetRun* run : {&neg, &sub}) {
    const bool blew_up = run->sim.record.cause == TerminationCause::blow_up &&
                         run->sim.record.blowup.has_value();
    ok = ok && blew_up;
    if (!blew_up) continue;
    const double t_hi = run->sim.record.blowup->t_attempted;
    const LowerBound& lower = run->bounds.lower;
    ok = ok && lower.applicable && lower.t_lower <= t_hi;
    // The rigorous variant (b = d0 - E(0)) applies to both presets here; the
    // criterion allows 10% headroom on the upper bound.
    const SubcriticalBound& upper = run->bounds.subcritical_rigorous.applicable
                                        ? run->bounds.subcritical_rigorous
                                        : run->bounds.subcritical_est;
    ok = ok && upper.applicable && t_hi <= 1.1 * upper.t_upper;
    detail += " [t_lower=" + format_double(lower.t_lower) + " t_num_hi=" + format_double(t_hi) +
              " t_upper=" + format_double(upper.t_upper) + "]";
  }
  h.report(6, "blow-up ordering t_lower <= t_num <= 1.1 t_upper", ok, detail);
}

void criterion_growth(Harness& h) {
  const bool spot = c0_constant(4.0, 1.0) == 2.0 && c0_constant(3.0, 1.0) == 1.0;

  const PresetRun high = run_preset("high_energy_growth", 60.0);
  const bool cond41 = high.ctx.regime.high_energy_growth;
  const MonitorResult growth = monitor_growth(high.sim.record, high.bounds.c0,
                                              high.ctx.exponents.p, 1e-3);
  const bool ok = spot && cond41 && growth.verdict == MonitorVerdict::pass;
  h.report(7, "exponential growth of the energy-corrected momentum", ok,
           "samples=" + std::to_string(high.sim.record.size()) +
               " worst_log_slack=" + format_double(growth.worst_slack) +
               (spot ? "" : " c0_spot_failed"));
}

void criterion_lower_integral(Harness& h) {
  const double c4 = 0.05, c5 = 0.003, q = 3.0, n0 = 80.0;

  const double closed = std::pow(n0, 1.0 - q) / (c5 * (q - 1.0));
  const double no_c4 = lower_bound_integral(0.0, c5, q, n0);
  const bool tail_ok = std::abs(no_c4 - closed) <= 1e-8 * closed;

  // Brute-force oracle: composite Simpson in log space to a fixed cut.
  const double cut = 1e12;
  const int panels = 1 << 21;
  const double a = std::log(n0), b = std::log(cut);
  const double step = (b - a) / panels;
  auto f = [&](double x) {
    const double s = std::exp(x);
    return s / (c4 + c5 * std::pow(s, q));
  };
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += f(a + i * step) * (i % 2 ? 4.0 : 2.0);
  const double oracle = acc * step / 3.0 + std::pow(cut, 1.0 - q) / (c5 * (q - 1.0));
  const double got = lower_bound_integral(c4, c5, q, n0);
  const bool oracle_ok = std::abs(got - oracle) <= 1e-6 * oracle;

  const bool halving_ok = lower_bound_integral(2.0 * c4, 2.0 * c5, q, n0) == 0.5 * got;

  h.report(8, "lower-bound integral quadrature", tail_ok && oracle_ok && halving_ok,
           "tail_err=" + format_double(no_c4 - closed) +
               " oracle_rel=" + format_double(std::abs(got - oracle) / oracle) +
               " exact_halving=" + (halving_ok ? std::string("yes") : std::string("no")));
}

void criterion_determinism(Harness& h, const std::string& cli,
                           const std::filesystem::path& workdir) {
  if (cli.empty()) {
    h.report(9, "byte determinism of verify, simulate and sweep", false,
             "no --cli path given");
    return;
  }
  std::filesystem::create_directories(workdir);
  const auto cfg_path = workdir / "determinism.cfg";
  {
    std::ofstream out(cfg_path);
    out << "exponents.p = 3\n"
           "domain.modes = 16\n"
           "integrator.tolerance = 1e-6\n"
           "integrator.t_max = 0.3\n"
           "initial.kind = eigenmode\n"
           "initial.amplitude = 1.0\n"
           "well.restarts = 2\n"
           "well.mode_budget = 4\n";
  }

  auto run = [&](const std::string& args) {
    const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
  };

  bool ok = true;
  std::string detail;

  const auto sim1 = workdir / "sim1";
  const auto sim2 = workdir / "sim2";
  ok = ok && run("simulate --config " + cfg_path.string() + " --seed 7 --out " + sim1.string()) == 0;
  ok = ok && run("simulate --config " + cfg_path.string() + " --seed 7 --out " + sim2.string()) == 0;
  for (const char* name : {"analysis.txt", "trajectory.csv", "summary.txt"}) {
    const bool same = slurp(sim1 / name) == slurp(sim2 / name);
    ok = ok && same;
    if (!same) detail += std::string(" mismatch:") + name;
  }

  const auto ver1 = workdir / "ver1";
  const auto ver2 = workdir / "ver2";
  ok = ok && run("verify --seed 11 --out " + ver1.string()) == 0;
  ok = ok && run("verify --seed 11 --out " + ver2.string()) == 0;
  if (slurp(ver1 / "verify.txt") != slurp(ver2 / "verify.txt")) {
    ok = false;
    detail += " mismatch:verify.txt";
  }

  const auto sweep1 = workdir / "sweep1";
  const auto sweep2 = workdir / "sweep2";
  const std::string axis = " --axis initial.amplitude=1:4:4";
  ok = ok && run("sweep --config " + cfg_path.string() + axis + " --workers 1 --out " +
                 sweep1.string()) == 0;
  ok = ok && run("sweep --config " + cfg_path.string() + axis + " --workers 4 --out " +
                 sweep2.string()) == 0;
  if (slurp(sweep1 / "sweep.csv") != slurp(sweep2 / "sweep.csv")) {
    ok = false;
    detail += " mismatch:sweep.csv";
  }

  h.report(9, "byte determinism of verify, simulate and sweep", ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  std::filesystem::path workdir = "acceptance_work";
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--cli") cli = argv[i + 1];
    if (flag == "--workdir") workdir = argv[i + 1];
  }

  Harness h;
  try {
    criterion_spectral(h);
    criterion_energy_identity(h);
    criterion_fibering(h);
    criterion_depth(h);
    const PresetRun sub = run_preset("subcritical_unstable", 30.0);
    const PresetRun neg = run_preset("negative_energy", 30.0);
    criterion_invariance(h, sub);
    criterion_ordering(h, neg, sub);
    criterion_growth(h);
    criterion_lower_integral(h);
    criterion_determinism(h, cli, workdir);
  } catch (const std::exception& ex) {
    std::cout << "FAIL acceptance aborted: " << ex.what() << std::endl;
    return 1;
  }

  std::cout << (h.failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << " ("
            << (9 - h.failures) << "/9)" << std::endl;
  return h.failures == 0 ? 0 : 1;
}
