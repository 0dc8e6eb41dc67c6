#include "slowlight/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "slowlight/errors.hpp"
#include "slowlight/format.hpp"

namespace slowlight {

std::string to_string(ScenarioName name) {
  switch (name) {
    case ScenarioName::none: return "none";
    case ScenarioName::figure1: return "figure1";
    case ScenarioName::figure2a: return "figure2a";
    case ScenarioName::figure2b: return "figure2b";
    case ScenarioName::figure3: return "figure3";
    case ScenarioName::sonar: return "sonar";
  }
  return "none";
}

ScenarioName scenario_from_string(const std::string& name) {
  if (name == "none") return ScenarioName::none;
  if (name == "figure1") return ScenarioName::figure1;
  if (name == "figure2a") return ScenarioName::figure2a;
  if (name == "figure2b") return ScenarioName::figure2b;
  if (name == "figure3") return ScenarioName::figure3;
  if (name == "sonar") return ScenarioName::sonar;
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

std::string to_string(DetuningMode mode) {
  return mode == DetuningMode::resonant ? "resonant" : "explicit";
}

DetuningMode detuning_mode_from_string(const std::string& name) {
  if (name == "resonant") return DetuningMode::resonant;
  if (name == "explicit") return DetuningMode::explicit_value;
  throw std::invalid_argument("unknown detuning mode '" + name + "'");
}

std::string to_string(SweepAxis axis) {
  return axis == SweepAxis::flow_drop ? "flow_drop" : "group_velocity";
}

SweepAxis sweep_axis_from_string(const std::string& name) {
  if (name == "flow_drop") return SweepAxis::flow_drop;
  if (name == "group_velocity") return SweepAxis::group_velocity;
  throw std::invalid_argument("unknown sweep axis '" + name + "'");
}

IntegratorConfig RayConfig::integrator() const {
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.rel_tol = rel_tol;
  cfg.adaptive = adaptive;
  cfg.max_steps = max_steps;
  cfg.event_refine_tol = event_refine_tol;
  cfg.max_turning_events = max_turning_events;
  cfg.t_end = t_end;
  cfg.max_dt = max_dt;
  return cfg;
}

RunConfig default_run_config(ScenarioName scenario) {
  RunConfig cfg;
  cfg.scenario = scenario;

  // Generic working point: resonant slow light, v_g = 300 m/s, counter-
  // propagating pulse in a uniform flow at 0.995 v_g.
  cfg.flow = Profile::uniform(298.5).spec();
  cfg.group_velocity = Profile::uniform(300.0).spec();

  switch (scenario) {
    case ScenarioName::none:
      break;
    case ScenarioName::figure1:
      // Velocity-vs-flow curve family: delta = 0, -v_g/(2c), -v_g/c over a
      // flow range covering both diagonals and all turning points.
      cfg.dispersion.u_min = -600.0;
      cfg.dispersion.u_max = 600.0;
      cfg.dispersion.u_count = 401;
      cfg.dispersion.deltas = {0.0, -5.0e-7, -1.0e-6};
      cfg.dispersion.branches = {Branch::plus, Branch::minus};
      break;
    case ScenarioName::figure2a:
      // Flow step +1.15 cm/s on the small-z side, crossed by the pulse.
      cfg.flow = Profile::step(298.5115, 298.5, 2.0e-3, 5.0e-5).spec();
      cfg.wave.t_end = 1.0e-3;
      cfg.wave.sample_every = 2.0e-6;
      break;
    case ScenarioName::figure2b:
      // Flow ramp dropping by 2 cm/s toward small z; the resonant pulse
      // turns where the local drop reaches u0 - v_g sqrt(2 u0/v_g - 1).
      // 1.5 ms covers launch, bounce (~0.77 ms) and return past the launch
      // point while the reflected packet still clears the periodic boundary.
      cfg.flow = Profile::tanh_ramp(298.48, 298.5, 2.0e-3, 1.0e-4).spec();
      cfg.wave.t_end = 1.5e-3;
      cfg.wave.sample_every = 2.0e-6;
      break;
    case ScenarioName::figure3:
      // Group-velocity ramp dropping by 2 m/s toward small z; freeze
      // sub-run at exact resonance, bounce sub-run slightly detuned. 3 ms
      // covers the slow bounce (~2.6 ms round trip at |v| ~ 0.68 m/s) before
      // the reflected packet's fast edge reaches the periodic boundary.
      cfg.group_velocity = Profile::tanh_ramp(298.0, 300.0, 2.0e-3, 2.0e-4).spec();
      cfg.ray.t_end = 2.0e-2;
      cfg.wave.t_end = 3.0e-3;
      cfg.wave.sample_every = 5.0e-6;
      cfg.extras.bounce_scale = 1.00001;
      break;
    case ScenarioName::sonar:
      // Reflection-ranging sweep over the flow-ramp depth.
      cfg.flow = Profile::tanh_ramp(298.48, 298.5, 2.0e-3, 1.0e-4).spec();
      cfg.sweep.axis = SweepAxis::flow_drop;
      cfg.sweep.from = 0.0;
      cfg.sweep.to = 2.0e-2;
      cfg.sweep.count = 21;
      break;
  }
  return cfg;
}

MediumProfiles build_profiles(const RunConfig& config) {
  ProfileSpec flow = config.flow;
  ProfileSpec vg = config.group_velocity;
  flow.domain_min = std::max(flow.domain_min, config.grid.z_min);
  flow.domain_max = std::min(flow.domain_max, config.grid.z_max);
  vg.domain_min = std::max(vg.domain_min, config.grid.z_min);
  vg.domain_max = std::min(vg.domain_max, config.grid.z_max);
  return {Profile(flow), Profile(vg)};
}

double resolve_detuning(const RunConfig& config) {
  if (config.packet.mode == DetuningMode::explicit_value)
    return config.packet.detuning;
  const MediumProfiles profiles = build_profiles(config);
  const double u0 = profiles.flow(config.packet.center);
  return config.packet.detuning_scale *
         resonant_detuning(u0, config.medium, config.packet.branch);
}

void apply_resolution_scale(RunConfig& config, double factor) {
  if (!(factor > 0.0))
    throw ConfigError("resolution scale must be > 0");
  if (config.wave.dt <= 0.0) {
    // Resolve the stability default on the base grid first so that scaling
    // divides a concrete number.
    const MediumProfiles profiles = build_profiles(config);
    const EffectiveOperator op = build_operator(
        profiles, config.medium, config.grid.grid(), config.packet.center);
    config.wave.dt = default_wave_dt(op);
  }
  const double target = config.grid.n * factor;
  int n = 8;
  while (n < target && n < (1 << 24)) n <<= 1;
  if (n > 8 && (n - target) > (target - n / 2)) n >>= 1;
  config.grid.n = std::max(n, 8);
  config.wave.dt /= factor;
  config.ray.dt /= factor;
}

void validate_config(const RunConfig& config) {
  try {
    config.medium.validate();
    config.grid.grid().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const auto check_profile = [](const ProfileSpec& p, const char* section) {
    switch (p.kind) {
      case ProfileKind::uniform:
        break;
      case ProfileKind::step:
      case ProfileKind::tanh_ramp:
      case ProfileKind::linear_ramp:
        if (!(p.width > 0.0))
          throw ConfigError(std::string("[") + section +
                            "]: transition width must be > 0");
        break;
      case ProfileKind::table:
        if (p.table_z.size() < 2 || p.table_z.size() != p.table_value.size())
          throw ConfigError(std::string("[") + section +
                            "]: table_z and table_value need >= 2 matching entries");
        break;
    }
  };
  check_profile(config.flow, "flow");
  check_profile(config.group_velocity, "group_velocity");

  const Grid1D grid = config.grid.grid();

  // The group velocity must be strictly positive everywhere the solvers will
  // sample it; catch that here rather than deep inside an operator build.
  try {
    const MediumProfiles profiles = build_profiles(config);
    if (!(profiles.group_velocity(grid.points()).minCoeff() > 0.0))
      throw ConfigError("[group_velocity]: profile must be > 0 on the grid");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  if (config.packet.center < grid.z_min || config.packet.center > grid.z_max)
    throw ConfigError("[packet]: center lies outside the grid");
  if (!(config.packet.sigma >= 4.0 * grid.dz()))
    throw ConfigError("[packet]: sigma must be >= 4 grid spacings");
  if (!(config.packet.detuning_scale > 0.0))
    throw ConfigError("[packet]: detuning_scale must be > 0");

  if (!(config.ray.dt > 0.0)) throw ConfigError("[ray]: dt must be > 0");
  if (!(config.ray.rel_tol > 0.0)) throw ConfigError("[ray]: rel_tol must be > 0");
  if (config.ray.max_steps < 1) throw ConfigError("[ray]: max_steps must be >= 1");
  if (!(config.ray.event_refine_tol > 0.0))
    throw ConfigError("[ray]: event_refine_tol must be > 0");
  if (config.ray.max_turning_events < 1)
    throw ConfigError("[ray]: max_turning_events must be >= 1");
  if (config.ray.max_dt < 0.0) throw ConfigError("[ray]: max_dt must be >= 0");

  if (config.wave.dt < 0.0) throw ConfigError("[wave]: dt must be >= 0");
  if (!(config.wave.t_end > 0.0)) throw ConfigError("[wave]: t_end must be > 0");
  if (!(config.wave.sample_every > 0.0))
    throw ConfigError("[wave]: sample_every must be > 0");
  if (config.wave.mask_width < 0.0)
    throw ConfigError("[wave]: mask_width must be >= 0");
  if (config.wave.mask_rate < 0.0)
    throw ConfigError("[wave]: mask_rate must be >= 0");
  if (config.wave.snapshot_every < 0.0)
    throw ConfigError("[wave]: snapshot_every must be >= 0");

  if (config.dispersion.u_count < 2)
    throw ConfigError("[dispersion]: u_count must be >= 2");
  if (!(config.dispersion.u_max > config.dispersion.u_min))
    throw ConfigError("[dispersion]: u_max must exceed u_min");
  if (config.dispersion.deltas.empty())
    throw ConfigError("[dispersion]: deltas must not be empty");
  if (config.dispersion.branches.empty())
    throw ConfigError("[dispersion]: branches must not be empty");

  if (config.sweep.count < 1) throw ConfigError("[sweep]: count must be >= 1");
  if (config.sweep.to < config.sweep.from)
    throw ConfigError("[sweep]: to must be >= from");
  if (config.sweep.from < 0.0)
    throw ConfigError("[sweep]: amplitudes must be >= 0");
  if (!(config.extras.bounce_scale > 0.0))
    throw ConfigError("[scenario]: bounce_scale must be > 0");
}

namespace {

struct RawEntry {
  int line;
  std::string section;
  std::string key;
  std::string value;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& message) {
  std::ostringstream msg;
  msg << "config line " << line << ": " << message;
  throw ConfigError(msg.str());
}

std::vector<RawEntry> tokenize(const std::string& text) {
  std::vector<RawEntry> entries;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (content.empty()) continue;
    if (content.front() == '[') {
      if (content.back() != ']')
        fail(line, "malformed section header '" + content + "'");
      section = trim(content.substr(1, content.size() - 2));
      if (section.empty()) fail(line, "empty section name");
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos)
      fail(line, "expected 'key = value', got '" + content + "'");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (value.empty()) fail(line, "empty value for key '" + key + "'");
    if (section.empty()) fail(line, "key '" + key + "' appears before any [section]");
    entries.push_back({line, section, key, value});
  }
  return entries;
}

double parse_bare_number(const std::string& token, int line) {
  const std::string t = trim(token);
  double out = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last)
    fail(line, "could not parse number '" + t + "'");
  return out;
}

/// Parse "number [unit]" enforcing the expected unit ("" = dimensionless, no
/// unit token allowed).
double parse_scalar(const std::string& value, const std::string& unit, int line) {
  const std::string v = trim(value);
  const auto space = v.find_first_of(" \t");
  const std::string num = (space == std::string::npos) ? v : v.substr(0, space);
  const std::string rest = (space == std::string::npos) ? "" : trim(v.substr(space + 1));
  if (unit.empty()) {
    if (!rest.empty())
      fail(line, "dimensionless key must not carry a unit (got '" + rest + "')");
  } else {
    if (rest.empty())
      fail(line, "missing unit: expected '" + unit + "'");
    if (rest != unit)
      fail(line, "wrong unit '" + rest + "': expected '" + unit + "'");
  }
  return parse_bare_number(num, line);
}

long parse_integer(const std::string& value, int line) {
  const std::string t = trim(value);
  long out = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    fail(line, "could not parse integer '" + t + "'");
  return out;
}

bool parse_bool(const std::string& value, int line) {
  const std::string t = trim(value);
  if (t == "true") return true;
  if (t == "false") return false;
  fail(line, "expected 'true' or 'false', got '" + t + "'");
}

/// Comma-separated list of numbers. For dimensional lists the unit token is
/// required on the last entry and optional (but checked) on the others.
std::vector<double> parse_list(const std::string& value, const std::string& unit,
                               int line) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : value) {
    if (ch == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);

  std::vector<double> out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string p = trim(parts[i]);
    if (p.empty()) fail(line, "empty list entry");
    const auto space = p.find_first_of(" \t");
    const std::string num = (space == std::string::npos) ? p : p.substr(0, space);
    const std::string rest =
        (space == std::string::npos) ? "" : trim(p.substr(space + 1));
    if (!rest.empty() && rest != unit)
      fail(line, "wrong unit '" + rest + "': expected '" + unit + "'");
    if (unit.empty() && !rest.empty())
      fail(line, "dimensionless list must not carry units");
    if (!unit.empty() && i + 1 == parts.size() && rest.empty())
      fail(line, "missing unit on the last list entry: expected '" + unit + "'");
    out.push_back(parse_bare_number(num, line));
  }
  return out;
}

void apply_profile_key(ProfileSpec& p, const RawEntry& e) {
  if (e.key == "kind") {
    try {
      // Selecting a kind resets the section: stale fields from a scenario
      // default of a different kind must not leak into the new profile.
      p = ProfileSpec{};
      p.kind = profile_kind_from_string(e.value);
    } catch (const std::invalid_argument& err) {
      fail(e.line, err.what());
    }
  } else if (e.key == "value") {
    p.value = parse_scalar(e.value, "m/s", e.line);
  } else if (e.key == "left") {
    p.left = parse_scalar(e.value, "m/s", e.line);
  } else if (e.key == "right") {
    p.right = parse_scalar(e.value, "m/s", e.line);
  } else if (e.key == "center") {
    p.center = parse_scalar(e.value, "m", e.line);
  } else if (e.key == "width") {
    p.width = parse_scalar(e.value, "m", e.line);
  } else if (e.key == "table_z") {
    p.table_z = parse_list(e.value, "m", e.line);
  } else if (e.key == "table_value") {
    p.table_value = parse_list(e.value, "m/s", e.line);
  } else {
    fail(e.line, "unknown key '" + e.key + "' in section [" + e.section + "]");
  }
}

void apply_entry(RunConfig& cfg, const RawEntry& e) {
  const auto wrap = [&](auto&& fn) {
    try {
      fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& err) {
      fail(e.line, err.what());
    }
  };

  if (e.section == "run") {
    if (e.key == "scenario") wrap([&] { cfg.scenario = scenario_from_string(e.value); });
    else if (e.key == "out") cfg.out_dir = e.value;
    else if (e.key == "check") cfg.check = parse_bool(e.value, e.line);
    else fail(e.line, "unknown key '" + e.key + "' in section [run]");
  } else if (e.section == "medium") {
    if (e.key == "omega0") cfg.medium.omega0 = parse_scalar(e.value, "rad/s", e.line);
    else if (e.key == "epsilon") cfg.medium.epsilon = parse_scalar(e.value, "", e.line);
    else if (e.key == "c") cfg.medium.constants.c = parse_scalar(e.value, "m/s", e.line);
    else if (e.key == "hbar") cfg.medium.constants.hbar = parse_scalar(e.value, "J*s", e.line);
    else fail(e.line, "unknown key '" + e.key + "' in section [medium]");
  } else if (e.section == "flow") {
    apply_profile_key(cfg.flow, e);
  } else if (e.section == "group_velocity") {
    apply_profile_key(cfg.group_velocity, e);
  } else if (e.section == "grid") {
    if (e.key == "z_min") cfg.grid.z_min = parse_scalar(e.value, "m", e.line);
    else if (e.key == "z_max") cfg.grid.z_max = parse_scalar(e.value, "m", e.line);
    else if (e.key == "n") cfg.grid.n = static_cast<int>(parse_integer(e.value, e.line));
    else fail(e.line, "unknown key '" + e.key + "' in section [grid]");
  } else if (e.section == "packet") {
    if (e.key == "center") cfg.packet.center = parse_scalar(e.value, "m", e.line);
    else if (e.key == "sigma") cfg.packet.sigma = parse_scalar(e.value, "m", e.line);
    else if (e.key == "branch") wrap([&] { cfg.packet.branch = branch_from_string(e.value); });
    else if (e.key == "detuning_mode")
      wrap([&] { cfg.packet.mode = detuning_mode_from_string(e.value); });
    else if (e.key == "detuning") cfg.packet.detuning = parse_scalar(e.value, "", e.line);
    else if (e.key == "detuning_scale")
      cfg.packet.detuning_scale = parse_scalar(e.value, "", e.line);
    else fail(e.line, "unknown key '" + e.key + "' in section [packet]");
  } else if (e.section == "ray") {
    if (e.key == "dt") cfg.ray.dt = parse_scalar(e.value, "s", e.line);
    else if (e.key == "rel_tol") cfg.ray.rel_tol = parse_scalar(e.value, "", e.line);
    else if (e.key == "adaptive") cfg.ray.adaptive = parse_bool(e.value, e.line);
    else if (e.key == "max_steps") cfg.ray.max_steps = parse_integer(e.value, e.line);
    else if (e.key == "event_refine_tol")
      cfg.ray.event_refine_tol = parse_scalar(e.value, "m", e.line);
    else if (e.key == "max_turning_events")
      cfg.ray.max_turning_events = static_cast<int>(parse_integer(e.value, e.line));
    else if (e.key == "t_end")
      cfg.ray.t_end = (trim(e.value) == "none")
                          ? std::numeric_limits<double>::infinity()
                          : parse_scalar(e.value, "s", e.line);
    else if (e.key == "max_dt") cfg.ray.max_dt = parse_scalar(e.value, "s", e.line);
    else fail(e.line, "unknown key '" + e.key + "' in section [ray]");
  } else if (e.section == "wave") {
    if (e.key == "dt") cfg.wave.dt = parse_scalar(e.value, "s", e.line);
    else if (e.key == "t_end") cfg.wave.t_end = parse_scalar(e.value, "s", e.line);
    else if (e.key == "sample_every")
      cfg.wave.sample_every = parse_scalar(e.value, "s", e.line);
    else if (e.key == "stepper")
      wrap([&] { cfg.wave.stepper = stepper_from_string(e.value); });
    else if (e.key == "boundary")
      wrap([&] { cfg.wave.boundary = boundary_from_string(e.value); });
    else if (e.key == "mask_width")
      cfg.wave.mask_width = parse_scalar(e.value, "m", e.line);
    else if (e.key == "mask_rate")
      cfg.wave.mask_rate = parse_scalar(e.value, "1/s", e.line);
    else if (e.key == "snapshot_every")
      cfg.wave.snapshot_every = parse_scalar(e.value, "s", e.line);
    else fail(e.line, "unknown key '" + e.key + "' in section [wave]");
  } else if (e.section == "dispersion") {
    if (e.key == "u_min") cfg.dispersion.u_min = parse_scalar(e.value, "m/s", e.line);
    else if (e.key == "u_max") cfg.dispersion.u_max = parse_scalar(e.value, "m/s", e.line);
    else if (e.key == "u_count")
      cfg.dispersion.u_count = static_cast<int>(parse_integer(e.value, e.line));
    else if (e.key == "deltas") cfg.dispersion.deltas = parse_list(e.value, "", e.line);
    else if (e.key == "branches") {
      wrap([&] {
        cfg.dispersion.branches.clear();
        std::string cur;
        for (char ch : e.value + std::string(",")) {
          if (ch == ',') {
            const std::string name = trim(cur);
            if (name.empty()) fail(e.line, "empty branch entry");
            cfg.dispersion.branches.push_back(branch_from_string(name));
            cur.clear();
          } else {
            cur += ch;
          }
        }
      });
    } else fail(e.line, "unknown key '" + e.key + "' in section [dispersion]");
  } else if (e.section == "sweep") {
    if (e.key == "axis") wrap([&] { cfg.sweep.axis = sweep_axis_from_string(e.value); });
    else if (e.key == "from") cfg.sweep.from = parse_scalar(e.value, "m/s", e.line);
    else if (e.key == "to") cfg.sweep.to = parse_scalar(e.value, "m/s", e.line);
    else if (e.key == "count")
      cfg.sweep.count = static_cast<int>(parse_integer(e.value, e.line));
    else fail(e.line, "unknown key '" + e.key + "' in section [sweep]");
  } else if (e.section == "scenario") {
    if (e.key == "bounce_scale")
      cfg.extras.bounce_scale = parse_scalar(e.value, "", e.line);
    else fail(e.line, "unknown key '" + e.key + "' in section [scenario]");
  } else {
    fail(e.line, "unknown section [" + e.section + "]");
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  const std::vector<RawEntry> entries = tokenize(text);

  std::set<std::pair<std::string, std::string>> seen;
  for (const RawEntry& e : entries) {
    if (!seen.insert({e.section, e.key}).second)
      fail(e.line, "duplicate key '" + e.key + "' in section [" + e.section + "]");
  }

  ScenarioName scenario = ScenarioName::none;
  for (const RawEntry& e : entries) {
    if (e.section == "run" && e.key == "scenario") {
      try {
        scenario = scenario_from_string(e.value);
      } catch (const std::invalid_argument& err) {
        fail(e.line, err.what());
      }
    }
  }

  RunConfig cfg = default_run_config(scenario);
  for (const RawEntry& e : entries) apply_entry(cfg, e);
  validate_config(cfg);
  return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("could not open config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

namespace {

void serialize_profile(std::ostream& out, const char* section,
                       const ProfileSpec& p) {
  out << "[" << section << "]\n";
  out << "kind = " << to_string(p.kind) << "\n";
  switch (p.kind) {
    case ProfileKind::uniform:
      out << "value = " << format_double(p.value) << " m/s\n";
      break;
    case ProfileKind::step:
    case ProfileKind::tanh_ramp:
    case ProfileKind::linear_ramp:
      out << "left = " << format_double(p.left) << " m/s\n";
      out << "right = " << format_double(p.right) << " m/s\n";
      out << "center = " << format_double(p.center) << " m\n";
      out << "width = " << format_double(p.width) << " m\n";
      break;
    case ProfileKind::table: {
      const auto emit_list = [&out](const std::vector<double>& values,
                                    const char* unit) {
        for (std::size_t i = 0; i < values.size(); ++i) {
          if (i) out << ", ";
          out << format_double(values[i]);
          if (i + 1 == values.size()) out << " " << unit;
        }
        out << "\n";
      };
      out << "table_z = ";
      emit_list(p.table_z, "m");
      out << "table_value = ";
      emit_list(p.table_value, "m/s");
      break;
    }
  }
  out << "\n";
}

}  // namespace

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "[run]\n";
  out << "scenario = " << to_string(cfg.scenario) << "\n";
  if (!cfg.out_dir.empty()) out << "out = " << cfg.out_dir << "\n";
  out << "check = " << (cfg.check ? "true" : "false") << "\n\n";

  out << "[medium]\n";
  out << "omega0 = " << format_double(cfg.medium.omega0) << " rad/s\n";
  out << "epsilon = " << format_double(cfg.medium.epsilon) << "\n";
  out << "c = " << format_double(cfg.medium.constants.c) << " m/s\n";
  out << "hbar = " << format_double(cfg.medium.constants.hbar) << " J*s\n\n";

  serialize_profile(out, "flow", cfg.flow);
  serialize_profile(out, "group_velocity", cfg.group_velocity);

  out << "[grid]\n";
  out << "z_min = " << format_double(cfg.grid.z_min) << " m\n";
  out << "z_max = " << format_double(cfg.grid.z_max) << " m\n";
  out << "n = " << cfg.grid.n << "\n\n";

  out << "[packet]\n";
  out << "center = " << format_double(cfg.packet.center) << " m\n";
  out << "sigma = " << format_double(cfg.packet.sigma) << " m\n";
  out << "branch = " << to_string(cfg.packet.branch) << "\n";
  out << "detuning_mode = " << to_string(cfg.packet.mode) << "\n";
  out << "detuning = " << format_double(cfg.packet.detuning) << "\n";
  out << "detuning_scale = " << format_double(cfg.packet.detuning_scale) << "\n\n";

  out << "[ray]\n";
  out << "dt = " << format_double(cfg.ray.dt) << " s\n";
  out << "rel_tol = " << format_double(cfg.ray.rel_tol) << "\n";
  out << "adaptive = " << (cfg.ray.adaptive ? "true" : "false") << "\n";
  out << "max_steps = " << cfg.ray.max_steps << "\n";
  out << "event_refine_tol = " << format_double(cfg.ray.event_refine_tol) << " m\n";
  out << "max_turning_events = " << cfg.ray.max_turning_events << "\n";
  if (!std::isfinite(cfg.ray.t_end)) out << "t_end = none\n";
  else out << "t_end = " << format_double(cfg.ray.t_end) << " s\n";
  out << "max_dt = " << format_double(cfg.ray.max_dt) << " s\n\n";

  out << "[wave]\n";
  out << "dt = " << format_double(cfg.wave.dt) << " s\n";
  out << "t_end = " << format_double(cfg.wave.t_end) << " s\n";
  out << "sample_every = " << format_double(cfg.wave.sample_every) << " s\n";
  out << "stepper = " << to_string(cfg.wave.stepper) << "\n";
  out << "boundary = " << to_string(cfg.wave.boundary) << "\n";
  out << "mask_width = " << format_double(cfg.wave.mask_width) << " m\n";
  out << "mask_rate = " << format_double(cfg.wave.mask_rate) << " 1/s\n";
  out << "snapshot_every = " << format_double(cfg.wave.snapshot_every) << " s\n\n";

  out << "[dispersion]\n";
  out << "u_min = " << format_double(cfg.dispersion.u_min) << " m/s\n";
  out << "u_max = " << format_double(cfg.dispersion.u_max) << " m/s\n";
  out << "u_count = " << cfg.dispersion.u_count << "\n";
  out << "deltas = ";
  for (std::size_t i = 0; i < cfg.dispersion.deltas.size(); ++i) {
    if (i) out << ", ";
    out << format_double(cfg.dispersion.deltas[i]);
  }
  out << "\n";
  out << "branches = ";
  for (std::size_t i = 0; i < cfg.dispersion.branches.size(); ++i) {
    if (i) out << ", ";
    out << to_string(cfg.dispersion.branches[i]);
  }
  out << "\n\n";

  out << "[sweep]\n";
  out << "axis = " << to_string(cfg.sweep.axis) << "\n";
  out << "from = " << format_double(cfg.sweep.from) << " m/s\n";
  out << "to = " << format_double(cfg.sweep.to) << " m/s\n";
  out << "count = " << cfg.sweep.count << "\n\n";

  out << "[scenario]\n";
  out << "bounce_scale = " << format_double(cfg.extras.bounce_scale) << "\n";
  return out.str();
}

}  // namespace slowlight
