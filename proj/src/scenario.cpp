#include "slowlight/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "slowlight/dispersion.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/io.hpp"
#include "slowlight/medium.hpp"
#include "slowlight/numerics.hpp"

namespace slowlight {

using nlohmann::json;
namespace fs = std::filesystem;

bool ScenarioReport::all_checks_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

void write_report_json(const fs::path& path, const ScenarioReport& report) {
  json q = json::array();
  for (const ReportQuantity& r : report.quantities)
    q.push_back({{"name", r.name},
                 {"value", r.value},
                 {"unit", r.unit},
                 {"provenance", r.provenance}});
  json c = json::array();
  for (const CheckResult& r : report.checks)
    c.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  json j;
  j["scenario"] = to_string(report.scenario);
  j["quantities"] = q;
  j["checks"] = c;
  j["files"] = report.files;
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("could not open '" + path.string() + "' for writing");
  out << j.dump(2) << "\n";
}

std::optional<double> fit_centroid_velocity(const ObservableSeries& series,
                                            double z_lo, double z_hi) {
  double st = 0, sz = 0, stt = 0, stz = 0;
  long n = 0;
  for (const ObservableRow& r : series.rows) {
    if (r.centroid < z_lo || r.centroid > z_hi) continue;
    st += r.t;
    sz += r.centroid;
    stt += r.t * r.t;
    stz += r.t * r.centroid;
    ++n;
  }
  if (n < 2) return std::nullopt;
  const double denom = n * stt - st * st;
  if (denom == 0.0) return std::nullopt;
  return (n * stz - st * sz) / denom;
}

std::optional<double> profile_crossing(const Profile& profile, double target,
                                       double z_lo, double z_hi) {
  constexpr int kScan = 4096;
  const double h = (z_hi - z_lo) / kScan;
  double z_prev = z_hi;
  double g_prev = profile(z_prev) - target;
  if (g_prev == 0.0) return z_prev;
  // Scan from z_hi toward z_lo so the first crossing along the pulse path
  // (which travels toward smaller z) is returned.
  for (int i = 1; i <= kScan; ++i) {
    const double z = z_hi - i * h;
    const double g = profile(z) - target;
    if (g == 0.0) return z;
    if (std::signbit(g) != std::signbit(g_prev)) {
      return brent_root([&](double x) { return profile(x) - target; }, z,
                        z_prev, 1e-15 * (z_hi - z_lo));
    }
    z_prev = z;
    g_prev = g;
  }
  return std::nullopt;
}

namespace {

struct Launch {
  double delta = 0.0;
  double omega = 0.0;
  double u0 = 0.0;
  double vg0 = 0.0;
  double k_opt = 0.0;  ///< optical-gauge wavevector at launch
  double k_red = 0.0;  ///< reduced-gauge carrier
  double v0 = 0.0;     ///< lab group velocity at launch
};

Launch make_launch(const RunConfig& cfg, const MediumProfiles& profiles,
                   double delta) {
  Launch l;
  l.delta = delta;
  l.omega = cfg.medium.omega0 * (1.0 + delta);
  l.u0 = profiles.flow(cfg.packet.center);
  l.vg0 = profiles.group_velocity(cfg.packet.center);
  l.k_opt = solve_wavevector(delta, l.u0, l.vg0, cfg.medium, cfg.packet.branch);
  const double d = discriminant(delta, l.u0, l.vg0, cfg.medium);
  l.k_red = branch_sign(cfg.packet.branch) * cfg.medium.k0() * std::sqrt(d);
  l.v0 = group_velocity_1d(delta, l.u0, l.vg0, cfg.medium, cfg.packet.branch);
  return l;
}

RayTrajectory trace_launch(const RunConfig& cfg, const MediumProfiles& profiles,
                           const Launch& l) {
  return trace(RayState{cfg.packet.center, l.k_opt, 0.0}, l.omega, profiles,
               cfg.medium, cfg.ray.integrator());
}

struct WaveRun {
  EffectiveOperator op;
  ObservableSeries series;
  FieldState state;  ///< final state
  double dt = 0.0;
};

WaveRun run_wave(const RunConfig& cfg, const MediumProfiles& profiles,
                 const Launch& l, double z_ref, SnapshotWriter* snapshots) {
  WaveRun run;
  run.op = build_operator(profiles, cfg.medium, cfg.grid.grid(),
                          cfg.packet.center);
  run.dt = cfg.wave.dt > 0.0 ? cfg.wave.dt : default_wave_dt(run.op);
  run.state =
      init_packet(PacketSpec{cfg.packet.center, cfg.packet.sigma, l.k_red},
                  cfg.grid.grid());
  EvolveOptions options;
  options.dt = run.dt;
  options.t_end = cfg.wave.t_end;
  options.sample_every = cfg.wave.sample_every;
  options.stepper = cfg.wave.stepper;
  options.boundary = cfg.wave.boundary;
  options.mask_width = cfg.wave.mask_width;
  options.mask_rate = cfg.wave.mask_rate;
  options.z_ref = z_ref;
  options.incident_sign = l.v0 < 0.0 ? -1 : 1;
  if (snapshots && cfg.wave.snapshot_every > 0.0) {
    options.snapshot_every = cfg.wave.snapshot_every;
    options.snapshot_sink = [snapshots](const FieldState& s) { snapshots->add(s); };
  }
  run.series = evolve(run.state, run.op, options);
  return run;
}

double transition_center(const ProfileSpec& spec, const GridConfig& grid) {
  if (spec.kind == ProfileKind::uniform)
    return 0.5 * (grid.z_min + grid.z_max);
  if (spec.kind == ProfileKind::table && !spec.table_z.empty())
    return 0.5 * (spec.table_z.front() + spec.table_z.back());
  return spec.center;
}

/// Flow speed at which the discriminant vanishes for a given detuning:
/// u_turn = v_g sqrt(-(1 + 2 c delta / v_g)). Matches turning_flow_speed for
/// the resonant detuning delta = -u0/c.
std::optional<double> turning_flow_target(double delta, double vg, double c) {
  const double arg = -(1.0 + 2.0 * c * delta / vg);
  if (arg < 0.0) return std::nullopt;
  return vg * std::sqrt(arg);
}

void add_quantity(ScenarioReport& report, const std::string& name, double value,
                  const std::string& unit, const std::string& provenance) {
  report.quantities.push_back({name, value, unit, provenance});
}

void add_check(ScenarioReport& report, const std::string& name, bool pass,
               const std::string& detail) {
  report.checks.push_back({name, pass, detail});
}

std::string describe(double measured, double expected, double tolerance) {
  std::ostringstream out;
  out << "measured " << format_double(measured) << ", expected "
      << format_double(expected) << ", tolerance " << format_double(tolerance);
  return out.str();
}

const RayEvent* first_event(const RayTrajectory& traj, RayEventKind kind) {
  for (const RayEvent& e : traj.events)
    if (e.kind == kind) return &e;
  return nullptr;
}

ManifestDerived make_derived(const RunConfig& cfg,
                             const MediumProfiles& profiles) {
  ManifestDerived d;
  d.k0 = cfg.medium.k0();
  const double delta = resolve_detuning(cfg);
  d.detuning = delta;
  const Launch l = make_launch(cfg, profiles, delta);
  d.kappa = l.vg0 * cfg.medium.constants.c / (2.0 * cfg.medium.omega0);
  d.mass_report = cfg.medium.constants.hbar * cfg.medium.omega0 /
                  (l.vg0 * cfg.medium.constants.c);
  d.packet_k_carrier = l.k_red;
  // Realized temporal bandwidth of the launched packet: the intensity
  // envelope has rms duration sigma/|v|, giving sigma_f = |v|/(4 pi sigma).
  d.realized_bandwidth_hz =
      std::abs(l.v0) / (4.0 * std::numbers::pi * cfg.packet.sigma);
  const EffectiveOperator op =
      build_operator(profiles, cfg.medium, cfg.grid.grid(), cfg.packet.center);
  d.wave_dt = cfg.wave.dt > 0.0 ? cfg.wave.dt : default_wave_dt(op);
  return d;
}

}  // namespace

ManifestDerived compute_derived(const RunConfig& cfg) {
  return make_derived(cfg, build_profiles(cfg));
}

ScenarioReport run_figure1(const RunConfig& cfg, const fs::path& out_dir) {
  ScenarioReport report;
  report.scenario = ScenarioName::figure1;
  const MediumProfiles profiles = build_profiles(cfg);
  const double z_mid = 0.5 * (cfg.grid.z_min + cfg.grid.z_max);
  const double vg = profiles.group_velocity(z_mid);
  const DispersionQuery& q = cfg.dispersion;

  CsvWriter csv(out_dir / "figure1.csv",
                {"series", "delta", "branch", "u", "v", "regime", "in_window"});
  const auto u_at = [&](int i) {
    if (q.u_count == 1) return q.u_min;
    return q.u_min + (q.u_max - q.u_min) * i / double(q.u_count - 1);
  };

  double min_abs_v_delta0 = std::numeric_limits<double>::infinity();
  bool turning_seen_at_vg = false;
  const double delta_critical = -vg / cfg.medium.constants.c;

  for (double delta : q.deltas) {
    for (Branch branch : q.branches) {
      const std::string series =
          "curve_delta=" + format_double(delta) + "_branch=" + to_string(branch);
      for (int i = 0; i < q.u_count; ++i) {
        const double u = u_at(i);
        const DispersionResult r =
            solve_dispersion(delta, u, vg, cfg.medium, branch);
        std::vector<std::string> cells{
            series,
            format_double(delta),
            to_string(branch),
            format_double(u),
            r.v ? format_double(*r.v) : "",
            to_string(r.regime),
            r.in_local_window ? "1" : "0"};
        csv.row_mixed(cells);
        if (delta == 0.0 && r.v)
          min_abs_v_delta0 = std::min(min_abs_v_delta0, std::abs(*r.v));
        if (delta == delta_critical &&
            r.regime == Regime::at_turning_point &&
            std::abs(std::abs(u) - vg) < 1e-9 * vg)
          turning_seen_at_vg = true;
      }
    }
  }

  // Galilean diagonals v = u +- v_g.
  for (Branch branch : q.branches) {
    const std::string series = std::string("diagonal_") + to_string(branch);
    for (int i = 0; i < q.u_count; ++i) {
      const double u = u_at(i);
      csv.row_mixed({series, "", to_string(branch), format_double(u),
                     format_double(galilean_velocity(vg, u, branch)), "", ""});
    }
  }

  // Resonant working points: delta = s u0/c lies on the diagonal.
  double max_wp_error = 0.0;
  for (double delta : q.deltas) {
    for (Branch branch : q.branches) {
      const double u_star = branch_sign(branch) * cfg.medium.constants.c * delta;
      if (u_star < q.u_min || u_star > q.u_max) continue;
      DispersionResult r = solve_dispersion(delta, u_star, vg, cfg.medium, branch);
      if (!r.v) continue;
      csv.row_mixed({"working_point", format_double(delta), to_string(branch),
                     format_double(u_star), format_double(*r.v),
                     to_string(r.regime), r.in_local_window ? "1" : "0"});
      max_wp_error = std::max(
          max_wp_error,
          std::abs(*r.v - galilean_velocity(vg, u_star, branch)));
    }
  }
  report.files.push_back("figure1.csv");

  add_quantity(report, "min_abs_v_at_delta0", min_abs_v_delta0, "m/s", "analytic");
  add_quantity(report, "max_working_point_error", max_wp_error, "m/s", "analytic");

  if (cfg.check) {
    const bool has_delta0 =
        std::find(q.deltas.begin(), q.deltas.end(), 0.0) != q.deltas.end();
    if (has_delta0)
      add_check(report, "delta0_curves_never_freeze",
                min_abs_v_delta0 >= vg * (1.0 - 1e-12),
                describe(min_abs_v_delta0, vg, 1e-12 * vg));
    const bool has_critical =
        std::find(q.deltas.begin(), q.deltas.end(), delta_critical) !=
        q.deltas.end();
    if (has_critical)
      add_check(report, "turning_points_at_u_equal_vg", turning_seen_at_vg,
                turning_seen_at_vg ? "turning regime found at |u| = v_g"
                                   : "no turning regime at |u| = v_g");
    add_check(report, "working_points_on_diagonal", max_wp_error <= 1e-12 * vg,
              describe(max_wp_error, 0.0, 1e-12 * vg));
  }
  return report;
}

ScenarioReport run_figure2a(const RunConfig& cfg, const fs::path& out_dir) {
  ScenarioReport report;
  report.scenario = ScenarioName::figure2a;
  const MediumProfiles profiles = build_profiles(cfg);
  const Launch l = make_launch(cfg, profiles, resolve_detuning(cfg));
  const double step_center = transition_center(cfg.flow, cfg.grid);
  const double sigma = cfg.packet.sigma;

  // Analytic velocities on both sides of the step.
  const double v_before =
      group_velocity_1d(l.delta, l.u0, l.vg0, cfg.medium, cfg.packet.branch);
  const double z_far = std::max(cfg.grid.z_min, step_center - 10.0 * sigma);
  const double u_after = profiles.flow(z_far);
  const double vg_after = profiles.group_velocity(z_far);
  const double v_after =
      group_velocity_1d(l.delta, u_after, vg_after, cfg.medium, cfg.packet.branch);

  // Ray layer.
  const RayTrajectory traj = trace_launch(cfg, profiles, l);
  write_ray_csv(out_dir / "ray.csv", traj);
  write_ray_events_json(out_dir / "ray_events.json", traj);
  report.files.push_back("ray.csv");
  report.files.push_back("ray_events.json");
  const double ray_v_before =
      ray_derivatives(RayState{traj.samples.front().z, traj.samples.front().k,
                               traj.samples.front().t},
                      profiles, cfg.medium)[0];
  const double ray_v_after =
      ray_derivatives(RayState{traj.samples.back().z, traj.samples.back().k,
                               traj.samples.back().t},
                      profiles, cfg.medium)[0];

  // Wave layer.
  SnapshotWriter* snapshot_sink = nullptr;
  std::optional<SnapshotWriter> snapshots;
  if (cfg.wave.snapshot_every > 0.0) {
    snapshots.emplace(out_dir / "snapshots.json", cfg.grid.grid());
    snapshot_sink = &*snapshots;
    report.files.push_back("snapshots.json");
  }
  const WaveRun wave = run_wave(cfg, profiles, l, step_center, snapshot_sink);
  write_observables_csv(out_dir / "wave.csv", wave.series);
  report.files.push_back("wave.csv");

  const auto wave_v_before = fit_centroid_velocity(
      wave.series, step_center + 6.0 * sigma, cfg.packet.center - sigma);
  // Crossing the step stretches the packet kinematically (the leading edge
  // moves at the post-step speed while the trailing edge still moves at the
  // launch speed), so the centroid slope converges to the post-step velocity
  // only once the whole stretched envelope is past the step. Fit as deep as
  // the domain allows while the leading tail still clears the boundary.
  const auto wave_v_after = fit_centroid_velocity(
      wave.series, step_center - 9.5 * sigma, step_center - 7.0 * sigma);

  add_quantity(report, "flow_step", u_after - l.u0, "m/s", "analytic");
  add_quantity(report, "v_before", v_before, "m/s", "analytic");
  add_quantity(report, "v_after", v_after, "m/s", "analytic");
  add_quantity(report, "v_before_ray", ray_v_before, "m/s", "ray");
  add_quantity(report, "v_after_ray", ray_v_after, "m/s", "ray");
  if (wave_v_before)
    add_quantity(report, "v_before_wave", *wave_v_before, "m/s", "wave");
  if (wave_v_after)
    add_quantity(report, "v_after_wave", *wave_v_after, "m/s", "wave");
  const double norm_drift =
      std::abs(wave.series.rows.back().norm +
               wave.series.absorbed_norm - 1.0);
  add_quantity(report, "norm_drift", norm_drift, "", "wave");

  if (cfg.check) {
    add_check(report, "ray_velocity_before",
              std::abs(ray_v_before - v_before) <= 1e-6 * std::abs(v_before),
              describe(ray_v_before, v_before, 1e-6 * std::abs(v_before)));
    add_check(report, "ray_velocity_after",
              std::abs(ray_v_after - v_after) <= 1e-6 * std::abs(v_after),
              describe(ray_v_after, v_after, 1e-6 * std::abs(v_after)));
    add_check(report, "wave_velocity_before",
              wave_v_before &&
                  std::abs(*wave_v_before - v_before) <= 0.05 * std::abs(v_before),
              wave_v_before ? describe(*wave_v_before, v_before,
                                       0.05 * std::abs(v_before))
                            : "fit window contained fewer than two samples");
    add_check(report, "wave_velocity_after",
              wave_v_after &&
                  std::abs(*wave_v_after - v_after) <= 0.05 * std::abs(v_after),
              wave_v_after ? describe(*wave_v_after, v_after,
                                      0.05 * std::abs(v_after))
                           : "fit window contained fewer than two samples");
    add_check(report, "norm_conserved", norm_drift <= 1e-6,
              describe(norm_drift, 0.0, 1e-6));
  }
  return report;
}

ScenarioReport run_figure2b(const RunConfig& cfg, const fs::path& out_dir) {
  ScenarioReport report;
  report.scenario = ScenarioName::figure2b;
  const MediumProfiles profiles = build_profiles(cfg);
  const Launch l = make_launch(cfg, profiles, resolve_detuning(cfg));
  const double ramp_center = transition_center(cfg.flow, cfg.grid);
  const double sigma = cfg.packet.sigma;

  // Analytic turning point: flow value where the discriminant vanishes, and
  // the profile position where the flow first reaches it along the path.
  const auto u_target =
      turning_flow_target(l.delta, l.vg0, cfg.medium.constants.c);
  std::optional<double> z_turn_analytic;
  if (u_target)
    z_turn_analytic = profile_crossing(profiles.flow, *u_target,
                                       cfg.grid.z_min, cfg.packet.center);

  // Ray layer.
  const RayTrajectory traj = trace_launch(cfg, profiles, l);
  write_ray_csv(out_dir / "ray.csv", traj);
  write_ray_events_json(out_dir / "ray_events.json", traj);
  report.files.push_back("ray.csv");
  report.files.push_back("ray_events.json");
  const RayEvent* turning = first_event(traj, RayEventKind::turning_point);
  double phase = 0.0;
  bool phase_ok = false;
  if (turning) {
    try {
      phase = semiclassical_phase(traj);
      phase_ok = true;
    } catch (const PhasePrecondition&) {
    }
  }

  // Wave layer.
  SnapshotWriter* snapshot_sink = nullptr;
  std::optional<SnapshotWriter> snapshots;
  if (cfg.wave.snapshot_every > 0.0) {
    snapshots.emplace(out_dir / "snapshots.json", cfg.grid.grid());
    snapshot_sink = &*snapshots;
    report.files.push_back("snapshots.json");
  }
  const WaveRun wave = run_wave(cfg, profiles, l, ramp_center, snapshot_sink);
  write_observables_csv(out_dir / "wave.csv", wave.series);
  report.files.push_back("wave.csv");

  const ObservableRow* min_row = &wave.series.rows.front();
  for (const ObservableRow& r : wave.series.rows)
    if (r.centroid < min_row->centroid) min_row = &r;
  const ObservableRow& final_row = wave.series.rows.back();
  const double norm_drift =
      std::abs(final_row.norm + wave.series.absorbed_norm - 1.0);

  if (u_target) {
    add_quantity(report, "u_turning", *u_target, "m/s", "analytic");
    add_quantity(report, "flow_drop_at_turning", l.u0 - *u_target, "m/s",
                 "analytic");
  }
  if (z_turn_analytic)
    add_quantity(report, "z_turning", *z_turn_analytic, "m", "analytic");
  if (turning) {
    add_quantity(report, "z_turning_ray", turning->z, "m", "ray");
    add_quantity(report, "t_turning_ray", turning->t, "s", "ray");
  }
  if (phase_ok) add_quantity(report, "loop_phase", phase, "rad", "ray");
  add_quantity(report, "z_centroid_min", min_row->centroid, "m", "wave");
  add_quantity(report, "reflected_fraction", final_row.reflected_fraction, "",
               "wave");
  add_quantity(report, "transmitted_fraction", final_row.transmitted_fraction,
               "", "wave");
  add_quantity(report, "norm_drift", norm_drift, "", "wave");

  if (cfg.check) {
    add_check(report, "ray_turning_exists", turning != nullptr,
              turning ? "turning event recorded" : "no turning event");
    if (turning && z_turn_analytic) {
      add_check(report, "turning_position_matches_profile",
                std::abs(turning->z - *z_turn_analytic) <= 1e-6,
                describe(turning->z, *z_turn_analytic, 1e-6));
      const double u_at_ray = profiles.flow(turning->z);
      add_check(report, "turning_flow_matches_closed_form",
                std::abs(u_at_ray - *u_target) <= 1e-6 * l.vg0,
                describe(u_at_ray, *u_target, 1e-6 * l.vg0));
    }
    if (z_turn_analytic)
      add_check(report, "wave_reverses_near_turning",
                std::abs(min_row->centroid - *z_turn_analytic) <= 2.0 * sigma,
                describe(min_row->centroid, *z_turn_analytic, 2.0 * sigma));
    add_check(report, "wave_mostly_reflected",
              final_row.reflected_fraction >= 0.95,
              describe(final_row.reflected_fraction, 1.0, 0.05));
    add_check(report, "norm_conserved", norm_drift <= 1e-6,
              describe(norm_drift, 0.0, 1e-6));
    add_check(report, "loop_phase_computed", phase_ok,
              phase_ok ? "loop phase accumulated over the bounce"
                       : "trajectory did not return to the launch position");
  }
  return report;
}

ScenarioReport run_figure3(const RunConfig& cfg, const fs::path& out_dir) {
  ScenarioReport report;
  report.scenario = ScenarioName::figure3;
  const MediumProfiles profiles = build_profiles(cfg);
  const double ramp_center = transition_center(cfg.group_velocity, cfg.grid);
  const double sigma = cfg.packet.sigma;

  // Freeze sub-run: exact resonance, the pulse asymptotically stops where
  // v_g(z) falls to the flow speed.
  RunConfig freeze_cfg = cfg;
  freeze_cfg.packet.detuning_scale = 1.0;
  freeze_cfg.packet.mode = DetuningMode::resonant;
  const Launch freeze_launch =
      make_launch(freeze_cfg, profiles, resolve_detuning(freeze_cfg));
  const RayTrajectory freeze_traj =
      trace_launch(freeze_cfg, profiles, freeze_launch);
  write_ray_csv(out_dir / "ray_freeze.csv", freeze_traj);
  write_ray_events_json(out_dir / "ray_freeze_events.json", freeze_traj);
  report.files.push_back("ray_freeze.csv");
  report.files.push_back("ray_freeze_events.json");

  double freeze_min_speed = std::numeric_limits<double>::infinity();
  bool freeze_reversed = false;
  const double v_sign =
      ray_derivatives(RayState{freeze_traj.samples.front().z,
                               freeze_traj.samples.front().k, 0.0},
                      profiles, cfg.medium)[0] < 0.0
          ? -1.0
          : 1.0;
  for (const RaySample& s : freeze_traj.samples) {
    const double v =
        ray_derivatives(RayState{s.z, s.k, s.t}, profiles, cfg.medium)[0];
    freeze_min_speed = std::min(freeze_min_speed, std::abs(v));
    if (v * v_sign < 0.0) freeze_reversed = true;
  }
  const auto z_freeze_analytic = profile_crossing(
      profiles.group_velocity, freeze_launch.u0, cfg.grid.z_min,
      cfg.packet.center);

  // Bounce sub-run: slightly deeper detuning turns the pulse where v_g
  // reaches the larger root of the turning quadratic.
  RunConfig bounce_cfg = cfg;
  bounce_cfg.packet.mode = DetuningMode::resonant;
  bounce_cfg.packet.detuning_scale = cfg.extras.bounce_scale;
  const double bounce_delta = resolve_detuning(bounce_cfg);
  const Launch bounce_launch = make_launch(bounce_cfg, profiles, bounce_delta);
  const double vg_turn =
      turning_group_velocity(bounce_delta, bounce_launch.u0, cfg.medium);
  const auto z_bounce_analytic = profile_crossing(
      profiles.group_velocity, vg_turn, cfg.grid.z_min, cfg.packet.center);

  const RayTrajectory bounce_traj =
      trace_launch(bounce_cfg, profiles, bounce_launch);
  write_ray_csv(out_dir / "ray_bounce.csv", bounce_traj);
  write_ray_events_json(out_dir / "ray_bounce_events.json", bounce_traj);
  report.files.push_back("ray_bounce.csv");
  report.files.push_back("ray_bounce_events.json");
  const RayEvent* bounce_turning =
      first_event(bounce_traj, RayEventKind::turning_point);

  // Wave layer for the bounce sub-run.
  const WaveRun wave =
      run_wave(bounce_cfg, profiles, bounce_launch, ramp_center, nullptr);
  write_observables_csv(out_dir / "wave_bounce.csv", wave.series);
  report.files.push_back("wave_bounce.csv");
  const ObservableRow* min_row = &wave.series.rows.front();
  for (const ObservableRow& r : wave.series.rows)
    if (r.centroid < min_row->centroid) min_row = &r;
  const double norm_drift = std::abs(wave.series.rows.back().norm +
                                     wave.series.absorbed_norm - 1.0);

  add_quantity(report, "freeze_min_speed", freeze_min_speed, "m/s", "ray");
  if (z_freeze_analytic)
    add_quantity(report, "z_freeze", *z_freeze_analytic, "m", "analytic");
  add_quantity(report, "freeze_final_z", freeze_traj.samples.back().z, "m",
               "ray");
  add_quantity(report, "bounce_detuning", bounce_delta, "", "analytic");
  add_quantity(report, "vg_turning", vg_turn, "m/s", "analytic");
  add_quantity(report, "vg_drop_at_turning",
               profiles.group_velocity(cfg.packet.center) - vg_turn, "m/s",
               "analytic");
  if (z_bounce_analytic)
    add_quantity(report, "z_turning", *z_bounce_analytic, "m", "analytic");
  if (bounce_turning) {
    add_quantity(report, "z_turning_ray", bounce_turning->z, "m", "ray");
    add_quantity(report, "vg_at_ray_turning",
                 profiles.group_velocity(bounce_turning->z), "m/s", "ray");
  }
  add_quantity(report, "z_centroid_min", min_row->centroid, "m", "wave");
  add_quantity(report, "reflected_fraction",
               wave.series.rows.back().reflected_fraction, "", "wave");
  add_quantity(report, "norm_drift", norm_drift, "", "wave");

  if (cfg.check) {
    const double vg_launch = profiles.group_velocity(cfg.packet.center);
    add_check(report, "freeze_speed_decays",
              freeze_min_speed <= 1e-3 * vg_launch,
              describe(freeze_min_speed, 0.0, 1e-3 * vg_launch));
    add_check(report, "freeze_no_reversal",
              !freeze_reversed && freeze_traj.events.empty(),
              freeze_reversed ? "velocity changed sign" : "monotone approach");
    add_check(report, "bounce_turning_exists", bounce_turning != nullptr,
              bounce_turning ? "turning event recorded" : "no turning event");
    if (bounce_turning) {
      const double vg_at_ray = profiles.group_velocity(bounce_turning->z);
      add_check(report, "bounce_vg_matches_closed_form",
                std::abs(vg_at_ray - vg_turn) <= 1e-6 * vg_turn,
                describe(vg_at_ray, vg_turn, 1e-6 * vg_turn));
    }
    if (z_bounce_analytic)
      add_check(report, "wave_reverses_near_turning",
                std::abs(min_row->centroid - *z_bounce_analytic) <= 2.0 * sigma,
                describe(min_row->centroid, *z_bounce_analytic, 2.0 * sigma));
    add_check(report, "norm_conserved", norm_drift <= 1e-6,
              describe(norm_drift, 0.0, 1e-6));
  }
  return report;
}

ScenarioReport run_sonar(const RunConfig& cfg, const fs::path& out_dir) {
  ScenarioReport report;
  report.scenario = ScenarioName::sonar;
  const SweepConfig& sweep = cfg.sweep;

  CsvWriter csv(out_dir / "sweep.csv",
                {"amplitude", "has_reflection", "z_turning_analytic",
                 "z_turning_ray", "loop_phase", "drop_at_turning"});
  report.files.push_back("sweep.csv");

  struct Row {
    double amplitude = 0.0;
    bool reflected = false;
    std::optional<double> z_analytic, z_ray, phase;
  };
  std::vector<Row> rows;

  // Geometry of the swept ramp: taken from the configured flow ramp.
  const double ramp_center = transition_center(cfg.flow, cfg.grid);
  const double ramp_width =
      cfg.flow.kind == ProfileKind::uniform ? 1e-4 : cfg.flow.width;

  for (int i = 0; i < sweep.count; ++i) {
    const double a =
        sweep.count == 1
            ? sweep.from
            : sweep.from + (sweep.to - sweep.from) * i / double(sweep.count - 1);

    RunConfig row_cfg = cfg;
    if (sweep.axis == SweepAxis::flow_drop) {
      const double base = cfg.flow.kind == ProfileKind::uniform
                              ? cfg.flow.value
                              : cfg.flow.right;
      row_cfg.flow =
          Profile::tanh_ramp(base - a, base, ramp_center, ramp_width).spec();
    } else {
      const double base = cfg.group_velocity.kind == ProfileKind::uniform
                              ? cfg.group_velocity.value
                              : cfg.group_velocity.right;
      row_cfg.group_velocity =
          Profile::tanh_ramp(base - a, base, ramp_center, ramp_width).spec();
      const double flow_base = cfg.flow.kind == ProfileKind::uniform
                                   ? cfg.flow.value
                                   : cfg.flow.right;
      row_cfg.flow = Profile::uniform(flow_base).spec();
    }

    const MediumProfiles profiles = build_profiles(row_cfg);
    const double delta = resolve_detuning(row_cfg);
    const Launch l = make_launch(row_cfg, profiles, delta);

    Row row;
    row.amplitude = a;
    if (sweep.axis == SweepAxis::flow_drop) {
      const auto u_target =
          turning_flow_target(delta, l.vg0, cfg.medium.constants.c);
      if (u_target)
        row.z_analytic = profile_crossing(profiles.flow, *u_target,
                                          row_cfg.grid.z_min,
                                          row_cfg.packet.center);
    } else {
      try {
        const double vg_turn = turning_group_velocity(delta, l.u0, cfg.medium);
        row.z_analytic = profile_crossing(profiles.group_velocity, vg_turn,
                                          row_cfg.grid.z_min,
                                          row_cfg.packet.center);
      } catch (const NoTurningPoint&) {
      }
    }

    const RayTrajectory traj = trace_launch(row_cfg, profiles, l);
    if (const RayEvent* e = first_event(traj, RayEventKind::turning_point)) {
      row.reflected = true;
      row.z_ray = e->z;
      try {
        row.phase = semiclassical_phase(traj);
      } catch (const PhasePrecondition&) {
      }
    }

    double drop = std::numeric_limits<double>::quiet_NaN();
    if (row.z_ray) {
      drop = sweep.axis == SweepAxis::flow_drop
                 ? l.u0 - profiles.flow(*row.z_ray)
                 : profiles.group_velocity(row_cfg.packet.center) -
                       profiles.group_velocity(*row.z_ray);
    }
    csv.row_mixed({format_double(a), row.reflected ? "1" : "0",
                   row.z_analytic ? format_double(*row.z_analytic) : "",
                   row.z_ray ? format_double(*row.z_ray) : "",
                   row.phase ? format_double(*row.phase) : "",
                   row.z_ray ? format_double(drop) : ""});
    rows.push_back(row);
  }

  int reflective = 0;
  for (const Row& r : rows)
    if (r.reflected) ++reflective;
  add_quantity(report, "rows", double(rows.size()), "", "ray");
  add_quantity(report, "reflective_rows", double(reflective), "", "ray");

  if (cfg.check) {
    // Reflection appears exactly where the analytic turning point exists.
    bool consistent = true;
    for (const Row& r : rows)
      if (r.z_analytic.has_value() != r.reflected) consistent = false;
    add_check(report, "reflection_matches_analytic_threshold", consistent,
              consistent ? "ray turning occurs iff the profile crosses the "
                           "turning value"
                         : "ray and analytic threshold disagree");

    // Deeper perturbations are reached earlier along the path: with the ramp
    // descending toward small z and the pulse arriving from large z, the
    // turning z grows with the drop amplitude.
    bool monotone = true;
    const Row* prev = nullptr;
    for (const Row& r : rows) {
      if (!r.reflected || !r.z_ray) continue;
      if (prev && !(r.z_ray > prev->z_ray)) monotone = false;
      prev = &r;
    }
    add_check(report, "turning_moves_earlier_with_depth", monotone,
              monotone ? "turning z strictly increases with amplitude"
                       : "turning z not monotone in amplitude");

    bool phases_distinct = true;
    const Row* prev_phase = nullptr;
    for (const Row& r : rows) {
      if (!r.phase) continue;
      if (prev_phase &&
          std::abs(*r.phase - *prev_phase->phase) <= 1e-9 * std::abs(*r.phase))
        phases_distinct = false;
      prev_phase = &r;
    }
    add_check(report, "phases_distinguish_amplitudes", phases_distinct,
              phases_distinct ? "loop phases differ between adjacent rows"
                              : "adjacent rows share a loop phase");
  }
  return report;
}

ScenarioReport run_scenario(const RunConfig& cfg, const fs::path& out_dir) {
  validate_config(cfg);
  if (cfg.scenario == ScenarioName::none)
    throw ConfigError("no scenario selected: set [run] scenario");
  fs::create_directories(out_dir);

  // Manifest first: a crashed run still identifies itself.
  write_manifest(out_dir / "manifest.json", cfg, compute_derived(cfg));

  ScenarioReport report;
  switch (cfg.scenario) {
    case ScenarioName::figure1: report = run_figure1(cfg, out_dir); break;
    case ScenarioName::figure2a: report = run_figure2a(cfg, out_dir); break;
    case ScenarioName::figure2b: report = run_figure2b(cfg, out_dir); break;
    case ScenarioName::figure3: report = run_figure3(cfg, out_dir); break;
    case ScenarioName::sonar: report = run_sonar(cfg, out_dir); break;
    case ScenarioName::none: break;
  }
  report.files.insert(report.files.begin(), "manifest.json");
  report.files.push_back("report.json");
  write_report_json(out_dir / "report.json", report);
  return report;
}

}  // namespace slowlight
