#include "logwave/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace logwave {

namespace {

AuditInputs make_audit_inputs(const RunContext& ctx) {
  AuditInputs in;
  in.initial = initial_scalars(ctx.u0, ctx.u1, ctx.exponents.p);
  in.exponents = ctx.exponents;
  in.lambda1 = ctx.domain->lambda1();
  in.measure = ctx.domain->measure();
  in.damping = damping_info(ctx.cfg);
  in.d0 = ctx.well.d0;
  in.d_est = ctx.well.d_est;
  in.b_mu = ctx.well.b_mu.value;
  in.regime = ctx.regime;
  return in;
}

}  // namespace

RunContext prepare_run(const ProblemConfig& cfg) {
  const DomainPtr domain = Domain::create(resolved_domain_spec(cfg));
  RunContext ctx{cfg,
                 domain,
                 resolved_exponents(cfg),
                 WellAnalysis{},
                 Field(domain),
                 Field(domain),
                 RegimeTag{},
                 {},
                 config_digest(cfg)};
  ctx.well = analyze_well(ctx.domain, ctx.exponents, cfg.well.restarts, cfg.well.mode_budget,
                          cfg.well.seed);
  if (cfg.initial.kind == InitialDataConfig::Kind::preset) {
    PresetData preset =
        make_preset(cfg.initial.preset, ctx.domain, ctx.exponents, ctx.well, ctx.domain->lambda1());
    ctx.u0 = std::move(preset.u0);
    ctx.u1 = std::move(preset.u1);
    ctx.preset_checks = std::move(preset.verified);
  } else {
    auto [u0, u1] = make_initial_data(cfg, ctx.domain, ctx.exponents, ctx.well);
    ctx.u0 = std::move(u0);
    ctx.u1 = std::move(u1);
  }
  ctx.regime = classify_initial_data(ctx.u0, ctx.u1, ctx.well, ctx.domain->lambda1());
  return ctx;
}

EquationSetup equation_setup(const ProblemConfig& cfg, const DomainPtr& domain) {
  return EquationSetup{domain, cfg.p, cfg.omega, cfg.damping, cfg.nonlinear};
}

void ReportDoc::add(const std::string& key, const std::string& value) {
  items_.emplace_back(key, value);
}
void ReportDoc::add(const std::string& key, double value) {
  items_.emplace_back(key, format_double(value));
}
void ReportDoc::add(const std::string& key, bool value) {
  items_.emplace_back(key, value ? "true" : "false");
}
void ReportDoc::add_int(const std::string& key, long long value) {
  items_.emplace_back(key, std::to_string(value));
}
std::string ReportDoc::str() const {
  std::string out;
  for (const auto& [k, v] : items_) {
    out += k;
    out += " = ";
    out += v;
    out += "\n";
  }
  return out;
}

ReportDoc analysis_report(const RunContext& ctx) {
  ReportDoc doc;
  doc.add("report", "analyze");
  doc.add("config.digest", ctx.digest);
  doc.add_int("domain.dim", ctx.domain->dim());
  doc.add("domain.extent", ctx.domain->extent(0));
  if (ctx.domain->dim() == 2) doc.add("domain.extent_y", ctx.domain->extent(1));
  doc.add_int("domain.modes", ctx.domain->modes(0));
  if (ctx.domain->dim() == 2) doc.add_int("domain.modes_y", ctx.domain->modes(1));
  doc.add_int("domain.grid_points", ctx.domain->grid_points(0));
  if (ctx.domain->dim() == 2) doc.add_int("domain.grid_points_y", ctx.domain->grid_points(1));
  doc.add("domain.lambda1", ctx.domain->lambda1());
  doc.add("domain.measure", ctx.domain->measure());

  doc.add("exponents.p", ctx.exponents.p);
  doc.add("exponents.sigma", ctx.exponents.sigma);
  doc.add("exponents.mu", ctx.exponents.mu);
  doc.add("exponents.two_star",
          std::isinf(ctx.exponents.two_star) ? std::string("inf")
                                             : format_double(ctx.exponents.two_star));

  const auto& w = ctx.well;
  doc.add("well.b_sigma.q", w.b_sigma.q);
  doc.add("well.b_sigma.raw", w.b_sigma.raw);
  doc.add("well.b_sigma.safety", w.b_sigma.safety);
  doc.add("well.b_sigma.value", w.b_sigma.value);
  doc.add("well.b_mu.q", w.b_mu.q);
  doc.add("well.b_mu.raw", w.b_mu.raw);
  doc.add("well.b_mu.safety", w.b_mu.safety);
  doc.add("well.b_mu.value", w.b_mu.value);
  doc.add("well.c_star", w.c_star);
  doc.add("well.d0", w.d0);
  doc.add("well.d_est", w.d_est);
  doc.add("well.d_gap", w.d_est - w.d0);
  doc.add_int("well.depth.mode_budget", w.depth.mode_budget);
  doc.add_int("well.depth.evaluations", w.depth.evaluations);
  doc.add_int("well.restarts", w.restarts);
  doc.add_int("well.seed", static_cast<long long>(w.seed));
  doc.add("well.provenance",
          "embedding constants estimated by multistart ascent times safety factor; d0 is the "
          "analytic floor from B_sigma; d_est is an upper estimate of the well depth");

  const auto& r = ctx.regime;
  doc.add("initial.e0", r.e0);
  doc.add("initial.i0", r.i0);
  doc.add("initial.j0", r.j0);
  doc.add("initial.l2_sq", r.l2_0);
  doc.add("initial.uv_inner", r.uv0);
  doc.add("regime.c0", r.c0);
  doc.add("regime.negative_energy", r.negative_energy);
  doc.add("regime.subcritical_unstable", r.subcritical_unstable);
  doc.add("regime.high_energy_growth", r.high_energy_growth);
  doc.add("regime.high_energy_bound_eligible", r.high_energy_bound);
  doc.add("regime.none_proven", r.none_proven());

  for (std::size_t i = 0; i < ctx.preset_checks.size(); ++i)
    doc.add("preset.verified." + std::to_string(i), ctx.preset_checks[i]);
  return doc;
}

ReportDoc summary_report(const RunContext& ctx, const TrajectoryRecord& record,
                         const BoundReport& bounds, const std::vector<std::string>& files) {
  ReportDoc doc;
  doc.add("report", "simulate");
  doc.add("config.digest", ctx.digest);
  doc.add("termination.cause", to_string(record.cause));
  doc.add_int("termination.samples", static_cast<long long>(record.size()));
  doc.add("termination.t_final", record.size() ? record.t.back() : 0.0);
  if (record.blowup) {
    doc.add("termination.blowup.trigger", to_string(record.blowup->trigger));
    doc.add("termination.blowup.t_resolved", record.blowup->t_resolved);
    doc.add("termination.blowup.t_attempted", record.blowup->t_attempted);
  }

  const DissipationResidual res = dissipation_residual(record);
  doc.add("energy.e0", record.size() ? record.e.front() : 0.0);
  doc.add("energy.e_final", record.size() ? record.e.back() : 0.0);
  doc.add("energy.max_dissipation_residual", res.max_abs);
  doc.add("energy.max_relative_residual", res.max_rel);
  doc.add("energy.max_energy_increase", res.max_energy_increase);

  doc.add("bounds.c0", bounds.c0);
  auto add_sub = [&doc](const std::string& prefix, const SubcriticalBound& sb) {
    doc.add(prefix + ".applicable", sb.applicable);
    if (!sb.applicable) {
      doc.add(prefix + ".reason", sb.reason);
      return;
    }
    doc.add(prefix + ".d_used", sb.d_used);
    doc.add(prefix + ".b", sb.b);
    doc.add(prefix + ".a", sb.a);
    doc.add(prefix + ".tau0", sb.tau0);
    doc.add(prefix + ".t_upper", sb.t_upper);
  };
  add_sub("bounds.subcritical_est", bounds.subcritical_est);
  add_sub("bounds.subcritical_rigorous", bounds.subcritical_rigorous);

  doc.add("bounds.high_energy.applicable", bounds.high_energy.applicable);
  if (bounds.high_energy.applicable) {
    doc.add("bounds.high_energy.beta", bounds.high_energy.beta);
    doc.add("bounds.high_energy.t0_min", bounds.high_energy.t0_min);
    doc.add("bounds.high_energy.t0", bounds.high_energy.t0);
    doc.add("bounds.high_energy.t_upper", bounds.high_energy.t_upper);
  } else {
    doc.add("bounds.high_energy.reason", bounds.high_energy.reason);
  }

  doc.add("bounds.lower.applicable", bounds.lower.applicable);
  if (bounds.lower.applicable) {
    doc.add("bounds.lower.c4", bounds.lower.c4);
    doc.add("bounds.lower.c5", bounds.lower.c5);
    doc.add("bounds.lower.n0", bounds.lower.n0);
    doc.add("bounds.lower.t_lower", bounds.lower.t_lower);
    doc.add("bounds.lower.s_sq", bounds.lower.s_sq);
    doc.add("bounds.lower.a_const", bounds.lower.a_const);
    doc.add("bounds.lower.b_const", bounds.lower.b_const);
    doc.add("bounds.lower.absorber", bounds.lower.absorber);
    doc.add("bounds.lower.b_mu", bounds.lower.b_mu);
    doc.add("bounds.lower.mu", bounds.lower.mu);
  } else {
    doc.add("bounds.lower.reason", bounds.lower.reason);
  }

  doc.add("monitor.growth.verdict", to_string(bounds.growth.verdict));
  doc.add("monitor.growth.detail", bounds.growth.detail);
  doc.add("monitor.concavity.verdict", to_string(bounds.concavity.verdict));
  doc.add("monitor.concavity.detail", bounds.concavity.detail);

  for (std::size_t i = 0; i < bounds.ordering.size(); ++i) {
    const auto& check = bounds.ordering[i];
    doc.add("ordering." + std::to_string(i) + ".check", check.name);
    doc.add("ordering." + std::to_string(i) + ".holds", check.holds);
    doc.add("ordering." + std::to_string(i) + ".slack", check.slack);
  }
  for (std::size_t i = 0; i < bounds.notes.size(); ++i)
    doc.add("note." + std::to_string(i), bounds.notes[i]);

  for (std::size_t i = 0; i < files.size(); ++i) doc.add("file." + std::to_string(i), files[i]);
  return doc;
}

std::string trajectory_csv(const TrajectoryRecord& record, double p, double lambda1, int stride) {
  std::string out = "t,E,J,I,l2_sq,h1_sq,H_sq,v_l2_sq,uv_inner,N,H_growth,dt\n";
  const double c0 = c0_constant(p, lambda1);
  const std::size_t n = record.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (stride > 1 && j != 0 && j + 1 != n && j % static_cast<std::size_t>(stride) != 0) continue;
    const double h_growth = record.uv_inner[j] - p / c0 * record.e[j];
    out += format_double(record.t[j]) + ',' + format_double(record.e[j]) + ',' +
           format_double(record.j[j]) + ',' + format_double(record.i[j]) + ',' +
           format_double(record.l2_sq[j]) + ',' + format_double(record.h1_sq[j]) + ',' +
           format_double(record.h_sq[j]) + ',' + format_double(record.v_l2_sq[j]) + ',' +
           format_double(record.uv_inner[j]) + ',' + format_double(record.n[j]) + ',' +
           format_double(h_growth) + ',' + format_double(record.dt[j]) + '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file '" + path + "'");
  out << content;
}

AnalyzeOutcome cmd_analyze(const ProblemConfig& cfg, const std::string& out_dir) {
  AnalyzeOutcome outcome{prepare_run(cfg), {}};
  outcome.report_path = (std::filesystem::path(out_dir) / "analysis.txt").string();
  write_text_file(outcome.report_path, analysis_report(outcome.ctx).str());
  return outcome;
}

SimulateOutcome cmd_simulate(const ProblemConfig& cfg, const std::string& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  SimulateOutcome outcome{prepare_run(cfg), {}, {}, {}, {}, {}, 0.0};
  RunContext& ctx = outcome.ctx;

  const EquationSetup eq = equation_setup(cfg, ctx.domain);
  SimulationResult sim = simulate(eq, cfg.integrator, cfg.detector, ctx.u0, ctx.u1);
  outcome.record = std::move(sim.record);
  outcome.bounds = audit_run(make_audit_inputs(ctx), outcome.record);

  const std::filesystem::path dir(out_dir);
  outcome.analysis_path = (dir / "analysis.txt").string();
  outcome.csv_path = (dir / "trajectory.csv").string();
  outcome.summary_path = (dir / "summary.txt").string();

  write_text_file(outcome.analysis_path, analysis_report(ctx).str());
  write_text_file(outcome.csv_path,
                  trajectory_csv(outcome.record, ctx.exponents.p, ctx.domain->lambda1(),
                                 cfg.output.sample_stride));
  const std::vector<std::string> files = {"analysis.txt", "trajectory.csv", "summary.txt"};
  write_text_file(outcome.summary_path,
                  summary_report(ctx, outcome.record, outcome.bounds, files).str());

  outcome.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return outcome;
}

SweepAxis parse_sweep_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("sweep axis '" + text + "': expected key=values");
  SweepAxis axis;
  axis.key = text.substr(0, eq);
  const std::string spec = text.substr(eq + 1);
  const auto colons = std::count(spec.begin(), spec.end(), ':');
  if (colons == 2) {
    // start:stop:count inclusive linear grid
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 + 1);
    const double start = std::stod(spec.substr(0, c1));
    const double stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const int count = std::stoi(spec.substr(c2 + 1));
    if (count < 1) throw std::invalid_argument("sweep axis '" + text + "': count must be >= 1");
    for (int i = 0; i < count; ++i) {
      const double v = count == 1 ? start : start + (stop - start) * i / (count - 1);
      axis.values.push_back(format_double(v));
    }
  } else {
    std::istringstream iss(spec);
    std::string tok;
    while (std::getline(iss, tok, ',')) {
      if (!tok.empty()) axis.values.push_back(tok);
    }
    if (axis.values.empty())
      throw std::invalid_argument("sweep axis '" + text + "': no values given");
  }
  return axis;
}

SweepOutcome cmd_sweep(const ProblemConfig& base, const std::vector<SweepAxis>& axes,
                       const std::string& out_dir, int workers) {
  if (axes.empty()) throw std::invalid_argument("cmd_sweep: need at least one axis");
  std::size_t total = 1;
  for (const auto& axis : axes) total *= axis.values.size();
  if (total == 0) throw std::invalid_argument("cmd_sweep: empty grid");

  SweepOutcome outcome;
  outcome.points.resize(total);

  auto point_values = [&](std::size_t index) {
    std::vector<std::string> vals(axes.size());
    std::size_t rem = index;
    for (std::size_t a = axes.size(); a-- > 0;) {
      vals[a] = axes[a].values[rem % axes[a].values.size()];
      rem /= axes[a].values.size();
    }
    return vals;
  };

  auto run_point = [&](std::size_t index) {
    SweepPoint& pt = outcome.points[index];
    pt.values = point_values(index);
    try {
      std::vector<std::pair<std::string, std::string>> overrides;
      for (std::size_t a = 0; a < axes.size(); ++a)
        overrides.emplace_back(axes[a].key, pt.values[a]);
      const ProblemConfig cfg = apply_overrides(base, overrides);
      RunContext ctx = prepare_run(cfg);
      const EquationSetup eq = equation_setup(cfg, ctx.domain);
      SimulationResult sim = simulate(eq, cfg.integrator, cfg.detector, ctx.u0, ctx.u1);
      const BoundReport bounds = audit_run(make_audit_inputs(ctx), sim.record);

      std::string line;
      line += to_string(sim.record.cause);
      line += ',' + format_double(ctx.regime.e0);
      line += ',' + format_double(ctx.regime.i0);
      line += ',' + (bounds.lower.applicable ? format_double(bounds.lower.t_lower)
                                             : std::string("na"));
      line += ',' + (sim.record.blowup ? format_double(sim.record.blowup->t_resolved)
                                       : std::string("na"));
      line += ',' + (sim.record.blowup ? format_double(sim.record.blowup->t_attempted)
                                       : std::string("na"));
      line += ',' + (bounds.subcritical_rigorous.applicable
                         ? format_double(bounds.subcritical_rigorous.t_upper)
                         : std::string("na"));
      line += ',' + (bounds.high_energy.applicable ? format_double(bounds.high_energy.t_upper)
                                                   : std::string("na"));
      pt.summary_line = line;
      pt.ok = true;
    } catch (const std::exception& ex) {
      pt.ok = false;
      pt.error = ex.what();
      // Error text may span lines; keep the table single-line per point.
      for (auto& ch : pt.error)
        if (ch == '\n') ch = ' ';
    }
  };

  const int n_workers = std::max(1, workers);
  if (n_workers == 1 || total == 1) {
    for (std::size_t i = 0; i < total; ++i) run_point(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int spawn = std::min<std::size_t>(n_workers, total);
    pool.reserve(spawn);
    for (int w = 0; w < spawn; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) run_point(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  // Deterministic ordered merge, independent of completion order.
  std::string table;
  table += "# sweep aggregate\n";
  std::string header = "index";
  for (const auto& axis : axes) header += ',' + axis.key;
  header += ",cause,E0,I0,t_lower,t_num_lo,t_num_hi,t_upper_rigorous,t_upper_high,status";
  table += header + "\n";
  for (std::size_t i = 0; i < total; ++i) {
    const SweepPoint& pt = outcome.points[i];
    table += std::to_string(i);
    for (const auto& v : pt.values) table += ',' + v;
    if (pt.ok) {
      table += ',' + pt.summary_line + ",ok";
    } else {
      table += ",na,na,na,na,na,na,na,na,failed: " + pt.error;
      ++outcome.failures;
    }
    table += '\n';
  }
  outcome.table_path = (std::filesystem::path(out_dir) / "sweep.csv").string();
  write_text_file(outcome.table_path, table);
  return outcome;
}

}  // namespace logwave
