// Command-line front end: dispersion tables, single ray traces, wave runs,
// the canned scenarios and the sonar sweep, all driven by the same sectioned
// config format.
//
// Exit codes: 0 success, 2 config/usage error, 3 numerical failure,
// 4 check failure.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "slowlight/config.hpp"
#include "slowlight/dispersion.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/io.hpp"
#include "slowlight/ray.hpp"
#include "slowlight/scenario.hpp"
#include "slowlight/version.hpp"
#include "slowlight/wave.hpp"

namespace fs = std::filesystem;
using namespace slowlight;

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  double resolution_scale = 1.0;
  bool check = false;
};

RunConfig load_config(const CliOptions& cli, ScenarioName fallback) {
  RunConfig cfg = cli.config_path.empty()
                      ? default_run_config(fallback)
                      : parse_config_file(cli.config_path);
  if (cli.check) cfg.check = true;
  if (cli.resolution_scale != 1.0)
    apply_resolution_scale(cfg, cli.resolution_scale);
  return cfg;
}

fs::path resolve_out_dir(const CliOptions& cli, const RunConfig& cfg,
                         const std::string& fallback_name) {
  if (!cli.out_dir.empty()) return cli.out_dir;
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  return fs::path("out") / fallback_name;
}

double transition_center(const RunConfig& cfg) {
  const ProfileSpec* spec = &cfg.flow;
  if (spec->kind == ProfileKind::uniform) spec = &cfg.group_velocity;
  if (spec->kind == ProfileKind::uniform)
    return 0.5 * (cfg.grid.z_min + cfg.grid.z_max);
  if (spec->kind == ProfileKind::table && !spec->table_z.empty())
    return 0.5 * (spec->table_z.front() + spec->table_z.back());
  return spec->center;
}

int print_check_summary(const ScenarioReport& report) {
  for (const CheckResult& c : report.checks)
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " — "
              << c.detail << "\n";
  if (!report.checks.empty())
    std::cout << (report.all_checks_passed() ? "all checks passed"
                                             : "CHECKS FAILED")
              << "\n";
  return report.all_checks_passed() ? 0 : 4;
}

int cmd_dispersion(const CliOptions& cli) {
  RunConfig cfg = load_config(cli, ScenarioName::none);
  validate_config(cfg);
  const fs::path out = resolve_out_dir(cli, cfg, "dispersion");
  fs::create_directories(out);
  write_manifest(out / "manifest.json", cfg, compute_derived(cfg));

  const MediumProfiles profiles = build_profiles(cfg);
  const double vg =
      profiles.group_velocity(0.5 * (cfg.grid.z_min + cfg.grid.z_max));
  const DispersionQuery& q = cfg.dispersion;
  CsvWriter csv(out / "dispersion.csv",
                {"delta", "u", "v_g", "branch", "k", "v", "regime", "in_window"});
  for (double delta : q.deltas) {
    for (Branch branch : q.branches) {
      for (int i = 0; i < q.u_count; ++i) {
        const double u =
            q.u_count == 1
                ? q.u_min
                : q.u_min + (q.u_max - q.u_min) * i / double(q.u_count - 1);
        const DispersionResult r =
            solve_dispersion(delta, u, vg, cfg.medium, branch);
        csv.row_mixed({format_double(delta), format_double(u),
                       format_double(vg), to_string(branch),
                       r.k ? format_double(*r.k) : "",
                       r.v ? format_double(*r.v) : "", to_string(r.regime),
                       r.in_local_window ? "1" : "0"});
      }
    }
  }
  std::cout << "wrote " << (out / "dispersion.csv").string() << "\n";
  return 0;
}

int cmd_ray(const CliOptions& cli) {
  RunConfig cfg = load_config(cli, ScenarioName::none);
  validate_config(cfg);
  const fs::path out = resolve_out_dir(cli, cfg, "ray");
  fs::create_directories(out);
  write_manifest(out / "manifest.json", cfg, compute_derived(cfg));

  const MediumProfiles profiles = build_profiles(cfg);
  const double delta = resolve_detuning(cfg);
  const double u0 = profiles.flow(cfg.packet.center);
  const double vg0 = profiles.group_velocity(cfg.packet.center);
  const double omega = cfg.medium.omega0 * (1.0 + delta);
  const double k =
      solve_wavevector(delta, u0, vg0, cfg.medium, cfg.packet.branch);
  const RayTrajectory traj =
      trace(RayState{cfg.packet.center, k, 0.0}, omega, profiles, cfg.medium,
            cfg.ray.integrator());
  write_ray_csv(out / "ray.csv", traj);
  write_ray_events_json(out / "ray_events.json", traj);
  std::cout << "wrote " << (out / "ray.csv").string() << " ("
            << traj.samples.size() << " samples, " << traj.events.size()
            << " events)\n";
  return 0;
}

int cmd_wave(const CliOptions& cli) {
  RunConfig cfg = load_config(cli, ScenarioName::none);
  validate_config(cfg);
  const fs::path out = resolve_out_dir(cli, cfg, "wave");
  fs::create_directories(out);
  write_manifest(out / "manifest.json", cfg, compute_derived(cfg));

  const MediumProfiles profiles = build_profiles(cfg);
  const double delta = resolve_detuning(cfg);
  const double u0 = profiles.flow(cfg.packet.center);
  const double vg0 = profiles.group_velocity(cfg.packet.center);
  const double d = discriminant(delta, u0, vg0, cfg.medium);
  if (d < 0.0)
    throw EvanescentLaunch("launch point is evanescent (discriminant < 0)");
  const double k_red =
      branch_sign(cfg.packet.branch) * cfg.medium.k0() * std::sqrt(d);
  const double v0 =
      group_velocity_1d(delta, u0, vg0, cfg.medium, cfg.packet.branch);

  const EffectiveOperator op =
      build_operator(profiles, cfg.medium, cfg.grid.grid(), cfg.packet.center);
  FieldState state = init_packet(
      PacketSpec{cfg.packet.center, cfg.packet.sigma, k_red}, cfg.grid.grid());

  EvolveOptions options;
  options.dt = cfg.wave.dt > 0.0 ? cfg.wave.dt : default_wave_dt(op);
  options.t_end = cfg.wave.t_end;
  options.sample_every = cfg.wave.sample_every;
  options.stepper = cfg.wave.stepper;
  options.boundary = cfg.wave.boundary;
  options.mask_width = cfg.wave.mask_width;
  options.mask_rate = cfg.wave.mask_rate;
  options.z_ref = transition_center(cfg);
  options.incident_sign = v0 < 0.0 ? -1 : 1;
  std::optional<SnapshotWriter> snapshots;
  if (cfg.wave.snapshot_every > 0.0) {
    snapshots.emplace(out / "snapshots.json", cfg.grid.grid());
    options.snapshot_every = cfg.wave.snapshot_every;
    options.snapshot_sink = [&](const FieldState& s) { snapshots->add(s); };
  }
  const ObservableSeries series = evolve(state, op, options);
  write_observables_csv(out / "wave.csv", series);
  std::cout << "wrote " << (out / "wave.csv").string() << " ("
            << series.rows.size() << " samples)\n";
  return 0;
}

int cmd_scenario(const CliOptions& cli, const std::string& name_arg) {
  ScenarioName requested = ScenarioName::none;
  if (!name_arg.empty()) requested = scenario_from_string(name_arg);

  RunConfig cfg = load_config(cli, requested);
  if (!cli.config_path.empty() && requested != ScenarioName::none &&
      cfg.scenario != requested) {
    if (cfg.scenario == ScenarioName::none)
      throw ConfigError("config file does not select a scenario; add "
                        "[run] scenario = " +
                        std::string(name_arg));
    throw ConfigError("config file selects scenario '" +
                      to_string(cfg.scenario) + "' but '" + name_arg +
                      "' was requested");
  }
  if (cli.config_path.empty()) cfg.scenario = requested;
  if (cfg.scenario == ScenarioName::none)
    throw ConfigError("no scenario selected: pass a name or set [run] scenario");

  const fs::path out = resolve_out_dir(cli, cfg, to_string(cfg.scenario));
  const ScenarioReport report = run_scenario(cfg, out);
  std::cout << "wrote " << report.files.size() << " files to " << out.string()
            << "\n";
  return print_check_summary(report);
}

int cmd_sweep(const CliOptions& cli) {
  RunConfig cfg = load_config(cli, ScenarioName::sonar);
  validate_config(cfg);
  const fs::path out = resolve_out_dir(cli, cfg, "sweep");
  fs::create_directories(out);
  write_manifest(out / "manifest.json", cfg, compute_derived(cfg));
  ScenarioReport report = run_sonar(cfg, out);
  report.files.insert(report.files.begin(), "manifest.json");
  report.files.push_back("report.json");
  write_report_json(out / "report.json", report);
  std::cout << "wrote " << report.files.size() << " files to " << out.string()
            << "\n";
  return print_check_summary(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slow-light pulses in non-uniformly moving media"};
  app.set_version_flag("--version",
                       std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();

  CliOptions cli;
  app.add_option("--config", cli.config_path, "config file (sectioned key = value)");
  app.add_option("--out", cli.out_dir, "output directory");
  app.add_flag("--check", cli.check, "run the scenario's built-in checks");
  app.add_option("--resolution-scale", cli.resolution_scale,
                 "scale grid resolution and time steps together");

  CLI::App* dispersion_cmd =
      app.add_subcommand("dispersion", "tabulate the local dispersion relation");
  CLI::App* ray_cmd = app.add_subcommand("ray", "trace a single ray");
  CLI::App* wave_cmd = app.add_subcommand("wave", "evolve a wave packet");
  CLI::App* scenario_cmd =
      app.add_subcommand("scenario", "run a canned scenario");
  std::string scenario_name;
  scenario_cmd->add_option("name", scenario_name,
                           "figure1 | figure2a | figure2b | figure3 | sonar");
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "sweep perturbation amplitudes (sonar)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (dispersion_cmd->parsed()) return cmd_dispersion(cli);
    if (ray_cmd->parsed()) return cmd_ray(cli);
    if (wave_cmd->parsed()) return cmd_wave(cli);
    if (scenario_cmd->parsed()) return cmd_scenario(cli, scenario_name);
    if (sweep_cmd->parsed()) return cmd_sweep(cli);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
