// Acceptance suite: one check per shipped guarantee, each printed as a single
// [PASS]/[FAIL] line with the measured quantity and runtime. Exit status is
// nonzero when any criterion fails. Each criterion also carries a runtime
// budget that is part of the pass condition.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "slowlight/config.hpp"
#include "slowlight/dispersion.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/numerics.hpp"
#include "slowlight/profile.hpp"
#include "slowlight/ray.hpp"
#include "slowlight/scenario.hpp"
#include "slowlight/wave.hpp"
#include "test_util.hpp"

using namespace slowlight;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double x) {
  std::ostringstream s;
  s << std::setprecision(4) << x;
  return s.str();
}

/// Launch working point shared by the ray and wave checks: detuning resolved
/// against the configured profiles, carrier root and conserved frequency at
/// the packet center, and the gauge-reduced carrier for the envelope solver.
struct LaunchPoint {
  MediumProfiles profiles;
  double delta = 0.0;
  double u0 = 0.0;
  double vg0 = 0.0;
  double k = 0.0;
  double omega = 0.0;
  double k_reduced = 0.0;
};

LaunchPoint make_launch(const RunConfig& cfg) {
  LaunchPoint l{build_profiles(cfg)};
  const double zc = cfg.packet.center;
  l.delta = resolve_detuning(cfg);
  l.u0 = l.profiles.flow(zc);
  l.vg0 = l.profiles.group_velocity(zc);
  l.k = solve_wavevector(l.delta, l.u0, l.vg0, cfg.medium, cfg.packet.branch);
  l.omega = hamiltonian_frequency(l.k, zc, l.profiles, cfg.medium);
  l.k_reduced = l.k + cfg.medium.k0() * l.u0 / l.vg0;
  return l;
}

RayTrajectory run_ray(const RunConfig& cfg, const LaunchPoint& l) {
  return trace(RayState{cfg.packet.center, l.k, 0.0}, l.omega, l.profiles,
               cfg.medium, cfg.ray.integrator());
}

/// Evolve the scenario's packet with periodic boundaries (the conservation
/// criteria require no absorber; nothing reaches the domain edge in these
/// geometries) and return the observable series.
ObservableSeries run_wave(const RunConfig& cfg, double t_end) {
  const LaunchPoint l = make_launch(cfg);
  const Grid1D grid = cfg.grid.grid();
  const EffectiveOperator op =
      build_operator(l.profiles, cfg.medium, grid, cfg.packet.center);
  FieldState state =
      init_packet({cfg.packet.center, cfg.packet.sigma, l.k_reduced}, grid);
  EvolveOptions opt;
  opt.dt = cfg.wave.dt;
  opt.t_end = t_end;
  opt.sample_every = cfg.wave.sample_every;
  opt.stepper = cfg.wave.stepper;
  opt.boundary = BoundaryKind::periodic;
  opt.z_ref = 2.0e-3;
  opt.incident_sign = l.k_reduced < 0.0 ? -1 : 1;
  return evolve(state, op, opt);
}

const RayEvent* find_event(const RayTrajectory& traj, RayEventKind kind) {
  for (const RayEvent& e : traj.events)
    if (e.kind == kind) return &e;
  return nullptr;
}

/// Mean velocity between the first and last trajectory samples whose z lies
/// in [z_lo, z_hi]. Exact where the medium is uniform across the band.
std::optional<double> sample_slope(const RayTrajectory& traj, double z_lo,
                                   double z_hi) {
  const RaySample* a = nullptr;
  const RaySample* b = nullptr;
  for (const RaySample& s : traj.samples)
    if (s.z >= z_lo && s.z <= z_hi) {
      if (!a) a = &s;
      b = &s;
    }
  if (!a || !b || !(b->t > a->t)) return std::nullopt;
  return (b->z - a->z) / (b->t - a->t);
}

double max_norm_drift(const ObservableSeries& series) {
  double worst = 0.0;
  for (const ObservableRow& r : series.rows)
    worst = std::max(worst, std::abs(r.norm - 1.0));
  return worst;
}

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;

  // Full-resolution default wave runs, produced by criteria 3 and 4 and
  // reused by criterion 8's norm audit.
  std::optional<ObservableSeries> fig2a_wave, fig2b_wave;

  const auto ensure_fig2a = [&]() -> const ObservableSeries& {
    if (!fig2a_wave) {
      const RunConfig cfg = default_run_config(ScenarioName::figure2a);
      fig2a_wave = run_wave(cfg, cfg.wave.t_end);
    }
    return *fig2a_wave;
  };
  const auto ensure_fig2b = [&]() -> const ObservableSeries& {
    if (!fig2b_wave) {
      const RunConfig cfg = default_run_config(ScenarioName::figure2b);
      fig2b_wave = run_wave(cfg, cfg.wave.t_end);
    }
    return *fig2b_wave;
  };

  // ---- criterion 1: velocity addition in uniform flow ----------------------
  const auto c1 = [] {
    const MediumSpec spec;
    const double c = spec.constants.c, vg = 300.0;
    double worst = 0.0;
    int pairs = 0;
    for (int i = 0; i < 50; ++i) {
      const double target = 12.0 * i + 6.0;  // u0 samples spanning (0, 2 vg)
      // Round u0/c to a dyadic rational so delta = u0/c holds exactly in
      // binary (c = 2^8 * 1171875 makes c * delta exactly representable).
      const double mag =
          std::ldexp(std::round(std::ldexp(target / c, 48)), -48);
      const double u0 = c * mag;
      for (const double sign : {+1.0, -1.0}) {
        // The resonant carrier k = sign*k0 sits on the minus branch only
        // while u0 < vg; past the degeneracy it continues on the plus branch.
        const Branch branch = sign > 0.0 ? Branch::plus
                              : (u0 > vg ? Branch::plus : Branch::minus);
        const double v = group_velocity_1d(sign * mag, u0, vg, spec, branch);
        const double expect = sign * vg + u0;
        worst = std::max(worst, std::abs(v - expect) / std::abs(expect));
        ++pairs;
      }
    }
    return Outcome{worst <= 1e-12, std::to_string(pairs) +
                                       " (u0, branch) pairs, max rel err " +
                                       num(worst)};
  };

  // ---- criterion 2: baseline launch velocity -1.5 m/s ----------------------
  const auto c2 = [] {
    double worst_launch = 0.0, worst_fit = 0.0;
    for (const ScenarioName name :
         {ScenarioName::figure2a, ScenarioName::figure2b}) {
      const RunConfig cfg = default_run_config(name);
      const LaunchPoint l = make_launch(cfg);
      const double v =
          group_velocity_1d(l.delta, l.u0, l.vg0, cfg.medium, cfg.packet.branch);
      worst_launch = std::max(worst_launch, std::abs(v + 1.5) / 1.5);
      // First 0.2 mm of travel: 0.3 mm of evolution keeps every fitted row
      // inside the window while staying far from the flow transition.
      const ObservableSeries series = run_wave(cfg, 2.0e-4);
      const auto fit = fit_centroid_velocity(series, 2.8e-3, 3.0e-3);
      if (!fit) return Outcome{false, "no centroid rows in the fit window"};
      worst_fit = std::max(worst_fit, std::abs(*fit + 1.5) / 1.5);
    }
    return Outcome{worst_launch <= 1e-9 && worst_fit <= 0.02,
                   "launch rel err " + num(worst_launch) +
                       ", wave centroid rel err " + num(worst_fit)};
  };

  // ---- criterion 3: speed-up across the flow step ---------------------------
  const auto c3 = [&] {
    const RunConfig cfg = default_run_config(ScenarioName::figure2a);
    const LaunchPoint l = make_launch(cfg);
    // Past-step flow: the step is fully settled below 1.6 mm.
    const double u_post = l.profiles.flow(1.0e-3);
    const double v_analytic = group_velocity_1d(l.delta, u_post, l.vg0,
                                                cfg.medium, cfg.packet.branch);
    const bool ok_value = std::abs(std::abs(v_analytic) - 3.019) <= 5.0e-4;

    const RayTrajectory traj = run_ray(cfg, l);
    const auto v_ray = sample_slope(traj, 1.0e-3, 1.6e-3);
    const double ray_err =
        v_ray ? std::abs(*v_ray - v_analytic) / std::abs(v_analytic) : 1.0;

    fig2a_wave = run_wave(cfg, cfg.wave.t_end);
    const auto fit = fit_centroid_velocity(*fig2a_wave, 1.1e-3, 1.45e-3);
    const double wave_err =
        fit ? std::abs(*fit - v_analytic) / std::abs(v_analytic) : 1.0;

    return Outcome{ok_value && v_ray && ray_err <= 1e-6 && fit &&
                       wave_err <= 0.05,
                   "analytic " + num(std::abs(v_analytic)) +
                       " m/s, ray rel err " + num(ray_err) +
                       ", wave rel err " + num(wave_err)};
  };

  // ---- criterion 4: flow-drop reflection threshold --------------------------
  const auto c4 = [&] {
    const RunConfig cfg = default_run_config(ScenarioName::figure2b);
    const LaunchPoint l = make_launch(cfg);
    const double u_turn = turning_flow_speed(l.u0, l.vg0);
    const double drop = l.u0 - u_turn;
    const double drop_closed =
        l.u0 - l.vg0 * std::sqrt(2.0 * l.u0 / l.vg0 - 1.0);
    const bool ok_drop = std::abs(drop - 3.77e-3) <= 5.0e-5 &&
                         std::abs(drop - drop_closed) <= 5.0e-5;

    const RayTrajectory traj = run_ray(cfg, l);
    const RayEvent* turn = find_event(traj, RayEventKind::turning_point);
    const auto z_cross = profile_crossing(l.profiles.flow, u_turn,
                                          cfg.grid.z_min, cfg.packet.center);
    const double z_gap =
        (turn && z_cross) ? std::abs(turn->z - *z_cross) : 1.0;

    fig2b_wave = run_wave(cfg, cfg.wave.t_end);
    const double reflected = fig2b_wave->rows.back().reflected_fraction;

    return Outcome{ok_drop && z_gap <= 1e-6 && reflected >= 0.95,
                   "drop " + num(drop * 1e3) + " mm/s, |ray - profile| " +
                       num(z_gap) + " m, reflected " + num(reflected)};
  };

  // ---- criterion 5: group-velocity reflection and the freeze ----------------
  const auto c5 = [] {
    const RunConfig cfg = default_run_config(ScenarioName::figure3);
    const LaunchPoint l = make_launch(cfg);

    const double delta_b =
        1.00001 * resonant_detuning(l.u0, cfg.medium, Branch::minus);
    const double vg_turn = turning_group_velocity(delta_b, l.u0, cfg.medium);
    const double drop = 300.0 - vg_turn;
    // Larger root of vg^2 + 2 c delta vg + u0^2 = 0.
    const double cd = cfg.medium.constants.c * delta_b;
    const double drop_closed = 300.0 - (-cd + std::sqrt(cd * cd - l.u0 * l.u0));
    const bool ok_drop = std::abs(drop - drop_closed) <= 5.0e-3 &&
                         std::abs(drop - 0.162) <= 5.0e-3;

    // Freeze sub-run: exactly resonant launch into the falling v_g ramp.
    const RayTrajectory traj = run_ray(cfg, l);
    bool monotone = true;
    for (size_t i = 1; i < traj.samples.size(); ++i)
      monotone &= traj.samples[i].z <= traj.samples[i - 1].z + 1e-12;
    const RaySample& last = traj.samples.back();
    const double v_final = std::abs(
        ray_derivatives({last.z, last.k, last.t}, l.profiles, cfg.medium)[0]);
    const bool frozen = v_final < 1e-3 * l.vg0 && monotone &&
                        !find_event(traj, RayEventKind::turning_point) &&
                        traj.stop == StopReason::time_end;

    return Outcome{ok_drop && frozen,
                   "vg drop " + num(drop) + " m/s, freeze final speed " +
                       num(v_final) + " m/s, no reversal"};
  };

  // ---- criterion 6: full vs approximate dispersion roots ---------------------
  const auto c6 = [] {
    const MediumSpec spec;
    const double vg = 300.0, k0 = spec.k0();
    const double half_window = spec.epsilon * (vg / spec.constants.c) *
                               spec.omega0;  // comoving half-width
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double u = -2.0 * vg + 4.0 * vg * i / 19.0;
      for (int j = 0; j < 20; ++j) {
        // Working point built from its comoving offset w so the grid spans
        // 90% of the transparency window at every flow value.
        const double w = 0.9 * half_window * (2.0 * j / 19.0 - 1.0);
        const double k_shell = -k0 * std::sqrt(1.0 + 2.0 * w / (vg * k0));
        const double omega = spec.omega0 + w + u * k_shell;
        const double delta = omega / spec.omega0 - 1.0;
        const Branch branch =
            (k_shell / k0 + u / vg) >= 0.0 ? Branch::plus : Branch::minus;
        const double k_approx = solve_wavevector(delta, u, vg, spec, branch);
        const double k_full = bracketed_root(
            [&](double k) { return residual_full(k, omega, u, spec, vg); },
            k_approx, 1e-4 * k0);
        worst = std::max(worst, std::abs(k_full - k_approx));
      }
    }
    return Outcome{worst <= 1e-5 * k0,
                   "20x20 grid, max |dk|/k0 = " + num(worst / k0)};
  };

  // ---- criterion 7: frequency derivative vs velocity addition ----------------
  const auto c7 = [] {
    const MediumSpec spec;
    const MediumProfiles profiles{
        Profile::tanh_ramp(298.48, 298.5, 2.0e-3, 1.0e-4),
        Profile::tanh_ramp(298.0, 300.0, 2.6e-3, 2.0e-4)};
    std::mt19937 rng(20260819u);
    std::uniform_real_distribution<double> zd(2.0e-4, 3.8e-3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double c = spec.constants.c, k0 = spec.k0();
    const double h = 2.0e6;  // omega(k) is quadratic: central FD is exact
    double worst = 0.0;
    int accepted = 0;
    bool use_minus = true;
    while (accepted < 100) {
      const double z = zd(rng);
      const double u = profiles.flow(z), vgz = profiles.group_velocity(z);
      const Branch branch = use_minus ? Branch::minus : Branch::plus;
      const double delta = use_minus
                               ? -(u / c) * (0.9975 + 0.003 * unit(rng))
                               : (u / c) * (0.9 + 0.2 * unit(rng));
      if (discriminant(delta, u, vgz, spec) < 1e-4) continue;
      const double k = solve_wavevector(delta, u, vgz, spec, branch);
      const double fd = (hamiltonian_frequency(k + h, z, profiles, spec) -
                         hamiltonian_frequency(k - h, z, profiles, spec)) /
                        (2.0 * h);
      const double addition = u + vgz * k / k0;
      worst = std::max(worst, std::abs(fd - addition) / std::abs(addition));
      ++accepted;
      use_minus = !use_minus;
    }
    return Outcome{worst <= 1e-6,
                   "100 on-shell points, max rel err " + num(worst)};
  };

  // ---- criterion 8: wave-solver conservation and accuracy --------------------
  const auto c8 = [&] {
    const double d2a = max_norm_drift(ensure_fig2a());
    const double d2b = max_norm_drift(ensure_fig2b());
    // figure3 evolves the detuned bounce packet; norm conservation is
    // resolution-independent, so audit it at half resolution.
    RunConfig cfg3 = default_run_config(ScenarioName::figure3);
    cfg3.grid.n = 2048;
    cfg3.packet.detuning_scale = cfg3.extras.bounce_scale;
    const double d3 = max_norm_drift(run_wave(cfg3, cfg3.wave.t_end));
    const double drift = std::max({d2a, d2b, d3});

    // Split-step vs Crank-Nicolson at matched resolution and time step.
    const RunConfig cfgb = default_run_config(ScenarioName::figure2b);
    const LaunchPoint l = make_launch(cfgb);
    const Grid1D grid = cfgb.grid.grid();
    const EffectiveOperator op =
        build_operator(l.profiles, cfgb.medium, grid, cfgb.packet.center);
    FieldState ss =
        init_packet({cfgb.packet.center, cfgb.packet.sigma, l.k_reduced}, grid);
    FieldState cn = ss;
    const double dt = default_wave_dt(op);
    SplitStepStepper ss_stepper(op, dt);
    CrankNicolsonStepper cn_stepper(op, dt);
    for (int i = 0; i < 2000; ++i) {
      ss_stepper.step(ss);
      cn_stepper.step(cn);
    }
    const double l2 = std::sqrt((ss.psi - cn.psi).abs2().sum()) /
                      std::sqrt(ss.psi.abs2().sum());

    // Free-Gaussian spreading law rms(t) = hypot(sigma, kappa t / sigma).
    const MediumSpec spec;
    const Grid1D fgrid{0.0, 4.0e-3, 2048};
    const MediumProfiles still{Profile::uniform(0.0), Profile::uniform(300.0)};
    const EffectiveOperator fop = build_operator(still, spec, fgrid, 2.0e-3);
    const double sigma = 2.0e-5;
    FieldState f = init_packet({2.0e-3, sigma, 0.0}, fgrid);
    EvolveOptions fe;
    fe.t_end = 4.5e-5;
    fe.sample_every = 4.5e-5;
    const ObservableSeries fs = evolve(f, fop, fe);
    const ObservableRow& fr = fs.rows.back();
    const double rms_expect = std::hypot(sigma, fop.kappa * fr.t / sigma);
    const double rms_err = std::abs(fr.rms_width - rms_expect) / rms_expect;

    return Outcome{drift <= 1e-6 && l2 <= 1e-3 && rms_err <= 1e-3,
                   "norm drift " + num(drift) + ", stepper L2 diff " +
                       num(l2) + ", spreading rel err " + num(rms_err)};
  };

  // ---- criterion 9: ray frequency conservation, reversibility, convergence --
  const auto c9 = [] {
    // Frequency conservation along every scenario trajectory.
    std::vector<std::pair<std::string, RunConfig>> runs;
    runs.emplace_back("figure2a", default_run_config(ScenarioName::figure2a));
    runs.emplace_back("figure2b", default_run_config(ScenarioName::figure2b));
    runs.emplace_back("figure3-freeze",
                      default_run_config(ScenarioName::figure3));
    RunConfig bounce = default_run_config(ScenarioName::figure3);
    bounce.packet.detuning_scale = bounce.extras.bounce_scale;
    runs.emplace_back("figure3-bounce", bounce);
    for (const double amp : {1.0e-2, 2.0e-2}) {
      RunConfig sc = default_run_config(ScenarioName::sonar);
      sc.flow = Profile::tanh_ramp(298.5 - amp, 298.5, 2.0e-3, 1.0e-4).spec();
      runs.emplace_back("sonar@" + num(amp), sc);
    }
    double worst_drift = 0.0;
    for (const auto& [name, cfg] : runs) {
      const LaunchPoint l = make_launch(cfg);
      worst_drift = std::max(worst_drift, run_ray(cfg, l).max_omega_drift);
    }

    // Time reversal: integrate the bounce forward, then back to t = 0.
    RunConfig cfg = default_run_config(ScenarioName::figure2b);
    cfg.ray.t_end = 1.9e-3;  // reflected ray still inside the domain
    const LaunchPoint l = make_launch(cfg);
    const RayTrajectory fwd = run_ray(cfg, l);
    const RaySample& end = fwd.samples.back();
    IntegratorConfig back = cfg.ray.integrator();
    back.t_end = 0.0;
    const RayTrajectory bwd = trace(RayState{end.z, end.k, end.t}, l.omega,
                                    l.profiles, cfg.medium, back);
    const RaySample& home = bwd.samples.back();
    const double closure =
        std::max(std::abs(home.z - cfg.packet.center) / cfg.packet.center,
                 std::abs(home.k - l.k) / std::abs(l.k));

    // Step-halving convergence of the fixed-step integrator on the ramp
    // approach: errors shrink by ~2^5 per halving for the 5(4) pair, and the
    // [16, 80] window verifies at least 4th order.
    const double z0 = 2.6e-3;
    const double u_loc = l.profiles.flow(z0);
    const double delta = resonant_detuning(u_loc, cfg.medium, Branch::minus);
    const double k = solve_wavevector(
        delta, u_loc, l.profiles.group_velocity(z0), cfg.medium, Branch::minus);
    const double omega = hamiltonian_frequency(k, z0, l.profiles, cfg.medium);
    double z_end[3];
    const double steps[3] = {1.5e-5, 7.5e-6, 3.75e-6};
    for (int i = 0; i < 3; ++i) {
      IntegratorConfig ic;
      ic.adaptive = false;
      ic.dt = steps[i];
      ic.t_end = 3.0e-4;
      const RayTrajectory t =
          trace(RayState{z0, k, 0.0}, omega, l.profiles, cfg.medium, ic);
      z_end[i] = t.samples.back().z;
    }
    const double e1 = std::abs(z_end[0] - z_end[1]);
    const double e2 = std::abs(z_end[1] - z_end[2]);
    const double ratio = e1 / e2;

    return Outcome{worst_drift <= 1e-9 && closure <= 1e-6 && ratio >= 16.0 &&
                       ratio <= 80.0,
                   "max freq drift " + num(worst_drift) + ", reversal closure " +
                       num(closure) + ", halving ratio " + num(ratio)};
  };

  // ---- criterion 10: byte-identical repeated runs ----------------------------
  const auto c10 = [] {
    const struct {
      ScenarioName name;
      double rs;
    } runs[] = {{ScenarioName::figure2b, 0.125},
                {ScenarioName::sonar, 1.0},
                {ScenarioName::figure1, 1.0}};
    int compared = 0;
    bool identical = true;
    for (const auto& r : runs) {
      RunConfig cfg = default_run_config(r.name);
      if (r.rs != 1.0) apply_resolution_scale(cfg, r.rs);
      testutil::TempDir a("acc-det-a"), b("acc-det-b");
      run_scenario(cfg, a.path());
      run_scenario(cfg, b.path());
      for (const auto& entry : std::filesystem::directory_iterator(a.path())) {
        if (entry.path().extension() != ".csv") continue;
        ++compared;
        identical &= read_bytes(entry.path()) ==
                     read_bytes(b.path() / entry.path().filename());
      }
    }
    return Outcome{identical && compared >= 4,
                   std::to_string(compared) + " data files byte-compared"};
  };

  struct Entry {
    int id;
    const char* label;
    double budget_s;
    std::function<Outcome()> body;
  };
  const std::vector<Entry> entries = {
      {1, "uniform-flow velocity addition", 1.0, c1},
      {2, "baseline launch velocity -1.5 m/s", 60.0, c2},
      {3, "speed-up across the flow step", 120.0, c3},
      {4, "flow-drop reflection threshold", 300.0, c4},
      {5, "group-velocity reflection and freeze", 300.0, c5},
      {6, "full vs approximate dispersion roots", 10.0, c6},
      {7, "frequency derivative vs velocity addition", 1.0, c7},
      {8, "wave-solver conservation and accuracy", 300.0, c8},
      {9, "ray conservation, reversibility, convergence", 30.0, c9},
      {10, "byte-identical repeated runs", 60.0, c10},
  };

  int failures = 0;
  for (const Entry& e : entries) {
    const auto t0 = clock::now();
    Outcome out;
    try {
      out = e.body();
    } catch (const std::exception& ex) {
      out = {false, std::string("exception: ") + ex.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(clock::now() - t0).count();
    const bool pass = out.pass && elapsed <= e.budget_s;
    std::printf("[%s] criterion %2d: %s (%s; %.2f s / budget %.0f s)\n",
                pass ? "PASS" : "FAIL", e.id, e.label, out.detail.c_str(),
                elapsed, e.budget_s);
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  if (failures == 0)
    std::printf("all %zu criteria passed\n", entries.size());
  else
    std::printf("%d of %zu criteria FAILED\n", failures, entries.size());
  return failures == 0 ? 0 : 1;
}
