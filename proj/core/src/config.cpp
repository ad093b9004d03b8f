#include "logwave/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace logwave {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

const std::vector<std::string> kPresetNames = {
    "negative_energy", "subcritical_unstable", "small_data_global", "high_energy_growth"};

struct Parser {
  std::map<std::string, std::string> kv;
  std::vector<std::string> issues;
  std::vector<std::string> seen;

  void note(const std::string& msg) { issues.push_back(msg); }

  bool has(const std::string& key) const { return kv.count(key) != 0; }

  std::optional<std::string> take(const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    seen.push_back(key);
    return it->second;
  }

  void get_double(const std::string& key, double& out) {
    auto v = take(key);
    if (!v) return;
    const std::string s = *v;
    const char* b = s.data();
    const char* e = b + s.size();
    double parsed = 0.0;
    auto [ptr, ec] = std::from_chars(b, e, parsed);
    if (ec != std::errc() || ptr != e) {
      note(key + ": not a number: '" + s + "'");
      return;
    }
    out = parsed;
  }

  void get_opt_double(const std::string& key, std::optional<double>& out) {
    auto v = take(key);
    if (!v) return;
    if (*v == "auto") {
      out.reset();
      return;
    }
    double value = 0.0;
    const char* b = v->data();
    const char* e = b + v->size();
    auto [ptr, ec] = std::from_chars(b, e, value);
    if (ec != std::errc() || ptr != e) {
      note(key + ": expected a number or 'auto', got '" + *v + "'");
      return;
    }
    out = value;
  }

  void get_int(const std::string& key, int& out) {
    auto v = take(key);
    if (!v) return;
    int parsed = 0;
    const char* b = v->data();
    const char* e = b + v->size();
    auto [ptr, ec] = std::from_chars(b, e, parsed);
    if (ec != std::errc() || ptr != e) {
      note(key + ": not an integer: '" + *v + "'");
      return;
    }
    out = parsed;
  }

  void get_u64(const std::string& key, std::uint64_t& out) {
    auto v = take(key);
    if (!v) return;
    std::uint64_t parsed = 0;
    const char* b = v->data();
    const char* e = b + v->size();
    auto [ptr, ec] = std::from_chars(b, e, parsed);
    if (ec != std::errc() || ptr != e) {
      note(key + ": not an unsigned integer: '" + *v + "'");
      return;
    }
    out = parsed;
  }

  void get_bool(const std::string& key, bool& out) {
    auto v = take(key);
    if (!v) return;
    if (*v == "true")
      out = true;
    else if (*v == "false")
      out = false;
    else
      note(key + ": expected true or false, got '" + *v + "'");
  }

  void get_string(const std::string& key, std::string& out) {
    auto v = take(key);
    if (v) out = *v;
  }
};

// "1:0.5 3:-0.25" in 1D, "1,1:0.5 2,1:-0.25" in 2D.
std::vector<ModeAmplitude> parse_mode_list(Parser& p, const std::string& key,
                                           const std::string& text, int dim) {
  std::vector<ModeAmplitude> out;
  std::istringstream iss(text);
  std::string tok;
  while (iss >> tok) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos) {
      p.note(key + ": entry '" + tok + "' is missing ':'");
      continue;
    }
    ModeAmplitude ma;
    const std::string idx = tok.substr(0, colon);
    const std::string amp = tok.substr(colon + 1);
    try {
      if (dim == 2) {
        const auto comma = idx.find(',');
        if (comma == std::string::npos) {
          p.note(key + ": 2-d entry '" + tok + "' needs 'k1,k2:amp'");
          continue;
        }
        ma.index[0] = std::stoi(idx.substr(0, comma));
        ma.index[1] = std::stoi(idx.substr(comma + 1));
      } else {
        ma.index[0] = std::stoi(idx);
      }
      ma.amplitude = std::stod(amp);
    } catch (const std::exception&) {
      p.note(key + ": cannot parse entry '" + tok + "'");
      continue;
    }
    out.push_back(ma);
  }
  return out;
}

void validate(const ProblemConfig& cfg, Parser& p) {
  const auto& d = cfg.domain;
  if (d.dim != 1 && d.dim != 2) p.note("domain.dim: must be 1 or 2");
  for (int a = 0; a < std::min(d.dim, 2); ++a) {
    const std::string axis = a == 0 ? "" : "_y";
    if (!(d.extent[a] > 0.0)) p.note("domain.extent" + axis + ": must be positive");
    if (d.modes[a] < 1) p.note("domain.modes" + axis + ": must be at least 1");
    if (d.grid[a] != 0 && d.grid[a] < 2 * d.modes[a])
      p.note("domain.grid_points" + axis + ": must be at least 2*modes (aliasing risk)");
  }

  const int n = d.dim;
  const double two_star = critical_exponent(n);
  if (!(cfg.p > 2.0) || !(cfg.p < two_star))
    p.note("exponents.p: assumption 2 < p < critical exponent fails (p = " +
           format_double(cfg.p) + ")");
  if (cfg.sigma && !(*cfg.sigma > 0.0)) p.note("exponents.sigma: must be positive");
  if (cfg.sigma && !(cfg.p + *cfg.sigma < two_star))
    p.note("exponents.sigma: p + sigma must stay below the critical exponent");
  if (cfg.mu && !(*cfg.mu > 0.0)) p.note("exponents.mu: must be positive");

  if (!(cfg.omega >= 0.0)) p.note("equation.omega: must be nonnegative");
  if (!(cfg.damping.alpha0 >= 0.0)) p.note("damping.alpha0: must be nonnegative");
  if (cfg.damping.rate < 0.0)
    p.note("damping.decay_rate: negative rate makes alpha(t) increasing; the schedule must be "
           "nonincreasing");

  if (cfg.initial.kind == InitialDataConfig::Kind::preset) {
    bool known = false;
    for (const auto& name : kPresetNames) known = known || name == cfg.initial.preset;
    if (!known) p.note("initial.preset: unknown preset '" + cfg.initial.preset + "'");
  }
  for (const auto* list : {&cfg.initial.u0, &cfg.initial.u1}) {
    for (const auto& ma : *list) {
      for (int a = 0; a < d.dim; ++a) {
        if (ma.index[a] < 1 || ma.index[a] > d.modes[a])
          p.note(std::string(list == &cfg.initial.u0 ? "initial.u0" : "initial.u1") +
                 ": mode index out of range on axis " + std::to_string(a));
      }
    }
  }

  if (!(cfg.integrator.tolerance > 0.0 && cfg.integrator.tolerance < 1.0))
    p.note("integrator.tolerance: must lie in (0, 1)");
  if (!(cfg.integrator.dt_min > 0.0)) p.note("integrator.dt_min: must be positive");
  if (!(cfg.integrator.dt_max > cfg.integrator.dt_min))
    p.note("integrator.dt_max: must exceed dt_min");
  if (!(cfg.integrator.t_max > 0.0)) p.note("integrator.t_max: must be positive");
  if (cfg.integrator.dt_init < 0.0) p.note("integrator.dt_init: must be nonnegative (0 = auto)");

  if (!(cfg.detector.divergence_threshold > 0.0))
    p.note("detector.divergence_threshold: must be positive");

  if (cfg.well.restarts < 1) p.note("well.restarts: must be at least 1");
  if (cfg.well.mode_budget < 1) p.note("well.mode_budget: must be at least 1");

  if (cfg.output.sample_stride < 1) p.note("output.sample_stride: must be at least 1");
  if (cfg.output.dir.empty()) p.note("output.dir: must not be empty");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error([&violations] {
        std::string msg = "configuration invalid:";
        for (const auto& v : violations) msg += "\n  - " + v;
        return msg;
      }()),
      violations_(std::move(violations)) {}

ProblemConfig parse_config_text(const std::string& text) {
  Parser p;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      p.note("line " + std::to_string(lineno) + ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      p.note("line " + std::to_string(lineno) + ": empty key");
      continue;
    }
    if (p.kv.count(key)) p.note(key + ": duplicated");
    p.kv[key] = value;
  }

  ProblemConfig cfg;
  p.get_int("domain.dim", cfg.domain.dim);
  p.get_double("domain.extent", cfg.domain.extent[0]);
  p.get_double("domain.extent_y", cfg.domain.extent[1]);
  p.get_int("domain.modes", cfg.domain.modes[0]);
  p.get_int("domain.modes_y", cfg.domain.modes[1]);
  p.get_int("domain.grid_points", cfg.domain.grid[0]);
  p.get_int("domain.grid_points_y", cfg.domain.grid[1]);

  p.get_double("exponents.p", cfg.p);
  p.get_opt_double("exponents.sigma", cfg.sigma);
  p.get_opt_double("exponents.mu", cfg.mu);

  p.get_double("equation.omega", cfg.omega);
  p.get_bool("equation.nonlinear", cfg.nonlinear);

  std::string damping_kind = "constant";
  p.get_string("damping.kind", damping_kind);
  if (damping_kind == "constant") {
    cfg.damping.kind = DampingSchedule::Kind::constant;
  } else if (damping_kind == "exponential_decay") {
    cfg.damping.kind = DampingSchedule::Kind::exponential_decay;
  } else {
    p.note("damping.kind: expected constant or exponential_decay, got '" + damping_kind + "'");
  }
  p.get_double("damping.alpha0", cfg.damping.alpha0);
  p.get_double("damping.decay_rate", cfg.damping.rate);

  std::string initial_kind = "preset";
  p.get_string("initial.kind", initial_kind);
  if (initial_kind == "preset") {
    cfg.initial.kind = InitialDataConfig::Kind::preset;
  } else if (initial_kind == "modes") {
    cfg.initial.kind = InitialDataConfig::Kind::modes;
  } else if (initial_kind == "eigenmode") {
    cfg.initial.kind = InitialDataConfig::Kind::eigenmode;
  } else {
    p.note("initial.kind: expected preset, modes or eigenmode, got '" + initial_kind + "'");
  }
  p.get_string("initial.preset", cfg.initial.preset);
  if (auto v = p.take("initial.u0")) cfg.initial.u0 = parse_mode_list(p, "initial.u0", *v, cfg.domain.dim);
  if (auto v = p.take("initial.u1")) cfg.initial.u1 = parse_mode_list(p, "initial.u1", *v, cfg.domain.dim);
  p.get_double("initial.amplitude", cfg.initial.amplitude);
  p.get_double("initial.velocity_scale", cfg.initial.velocity_scale);

  p.get_double("integrator.tolerance", cfg.integrator.tolerance);
  p.get_double("integrator.dt_init", cfg.integrator.dt_init);
  p.get_double("integrator.dt_min", cfg.integrator.dt_min);
  p.get_double("integrator.dt_max", cfg.integrator.dt_max);
  p.get_double("integrator.t_max", cfg.integrator.t_max);

  p.get_double("detector.divergence_threshold", cfg.detector.divergence_threshold);

  p.get_int("well.restarts", cfg.well.restarts);
  p.get_int("well.mode_budget", cfg.well.mode_budget);
  p.get_u64("well.seed", cfg.well.seed);

  p.get_string("output.dir", cfg.output.dir);
  p.get_int("output.sample_stride", cfg.output.sample_stride);

  for (const auto& [key, value] : p.kv) {
    (void)value;
    bool used = false;
    for (const auto& s : p.seen) used = used || s == key;
    if (!used) p.note(key + ": unknown key");
  }

  validate(cfg, p);
  if (!p.issues.empty()) throw ConfigError(std::move(p.issues));
  return cfg;
}

ProblemConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

std::string serialize_config(const ProblemConfig& cfg) {
  std::ostringstream out;
  auto kv = [&out](const std::string& key, const std::string& value) {
    out << key << " = " << value << "\n";
  };
  kv("domain.dim", std::to_string(cfg.domain.dim));
  kv("domain.extent", format_double(cfg.domain.extent[0]));
  if (cfg.domain.dim == 2) kv("domain.extent_y", format_double(cfg.domain.extent[1]));
  kv("domain.modes", std::to_string(cfg.domain.modes[0]));
  if (cfg.domain.dim == 2) kv("domain.modes_y", std::to_string(cfg.domain.modes[1]));
  kv("domain.grid_points", std::to_string(cfg.domain.grid[0]));
  if (cfg.domain.dim == 2) kv("domain.grid_points_y", std::to_string(cfg.domain.grid[1]));
  kv("exponents.p", format_double(cfg.p));
  kv("exponents.sigma", cfg.sigma ? format_double(*cfg.sigma) : "auto");
  kv("exponents.mu", cfg.mu ? format_double(*cfg.mu) : "auto");
  kv("equation.omega", format_double(cfg.omega));
  kv("equation.nonlinear", cfg.nonlinear ? "true" : "false");
  kv("damping.kind", cfg.damping.kind == DampingSchedule::Kind::constant ? "constant"
                                                                         : "exponential_decay");
  kv("damping.alpha0", format_double(cfg.damping.alpha0));
  kv("damping.decay_rate", format_double(cfg.damping.rate));
  switch (cfg.initial.kind) {
    case InitialDataConfig::Kind::preset: kv("initial.kind", "preset"); break;
    case InitialDataConfig::Kind::modes: kv("initial.kind", "modes"); break;
    case InitialDataConfig::Kind::eigenmode: kv("initial.kind", "eigenmode"); break;
  }
  kv("initial.preset", cfg.initial.preset);
  auto mode_list = [&](const std::vector<ModeAmplitude>& list) {
    std::string s;
    for (const auto& ma : list) {
      if (!s.empty()) s += " ";
      s += std::to_string(ma.index[0]);
      if (cfg.domain.dim == 2) s += "," + std::to_string(ma.index[1]);
      s += ":" + format_double(ma.amplitude);
    }
    return s;
  };
  if (!cfg.initial.u0.empty()) kv("initial.u0", mode_list(cfg.initial.u0));
  if (!cfg.initial.u1.empty()) kv("initial.u1", mode_list(cfg.initial.u1));
  kv("initial.amplitude", format_double(cfg.initial.amplitude));
  kv("initial.velocity_scale", format_double(cfg.initial.velocity_scale));
  kv("integrator.tolerance", format_double(cfg.integrator.tolerance));
  kv("integrator.dt_init", format_double(cfg.integrator.dt_init));
  kv("integrator.dt_min", format_double(cfg.integrator.dt_min));
  kv("integrator.dt_max", format_double(cfg.integrator.dt_max));
  kv("integrator.t_max", format_double(cfg.integrator.t_max));
  kv("detector.divergence_threshold", format_double(cfg.detector.divergence_threshold));
  kv("well.restarts", std::to_string(cfg.well.restarts));
  kv("well.mode_budget", std::to_string(cfg.well.mode_budget));
  kv("well.seed", std::to_string(cfg.well.seed));
  kv("output.dir", cfg.output.dir);
  kv("output.sample_stride", std::to_string(cfg.output.sample_stride));
  return out.str();
}

std::string config_digest(const ProblemConfig& cfg) {
  const std::string canon = serialize_config(cfg);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  static const char* hex = "0123456789abcdef";
  for (int i = 0; i < 16; ++i) buf[15 - i] = hex[(hash >> (4 * i)) & 0xf];
  buf[16] = '\0';
  return std::string(buf);
}

ProblemConfig apply_overrides(const ProblemConfig& base,
                              const std::vector<std::pair<std::string, std::string>>& overrides) {
  // Round-trip through the text form so overrides see exactly the same
  // parser and validation as files do.
  std::string text = serialize_config(base);
  for (const auto& [key, value] : overrides) text += key + " = " + value + "\n";
  // Later lines win: rebuild the map by reparsing with duplicates resolved.
  std::istringstream in(text);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    const auto strip = [](std::string& s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t\r");
      s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
    };
    strip(key);
    strip(value);
    kv[key] = value;
  }
  std::string merged;
  for (const auto& [key, value] : kv) merged += key + " = " + value + "\n";
  return parse_config_text(merged);
}

Exponents resolved_exponents(const ProblemConfig& cfg) {
  return resolve_exponents(cfg.p, cfg.domain.dim, cfg.sigma.value_or(0.0), cfg.mu.value_or(0.0));
}

DomainSpec resolved_domain_spec(const ProblemConfig& cfg) {
  DomainSpec spec = cfg.domain;
  for (int a = 0; a < spec.dim; ++a)
    if (spec.grid[a] == 0) spec.grid[a] = 2 * spec.modes[a];
  return spec;
}

DampingInfo damping_info(const ProblemConfig& cfg) {
  return DampingInfo{cfg.omega, cfg.damping.floor()};
}

}  // namespace logwave
