#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "slowlight/dispersion.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/profile.hpp"
#include "slowlight/ray.hpp"
#include "test_util.hpp"

using namespace slowlight;
using testutil::close_abs;
using testutil::close_rel;

namespace {

const MediumSpec spec;
const double k0 = spec.k0();

// The counterpropagating-bounce medium: flow relaxing from 298.48 to 298.5
// across a tanh ramp at z = 2 mm, uniform group velocity 300 m/s.
MediumProfiles bounce_medium() {
  return {Profile::tanh_ramp(298.48, 298.5, 2.0e-3, 1.0e-4),
          Profile::uniform(300.0)};
}

struct ResonantLaunch {
  RayState state;
  double omega;
};

ResonantLaunch resonant_minus(const MediumProfiles& medium, double u0,
                              double z0) {
  const double delta = resonant_detuning(u0, spec, Branch::minus);
  const double u_local = medium.flow(z0);
  const double vg_local = medium.group_velocity(z0);
  const double k = solve_wavevector(delta, u_local, vg_local, spec, Branch::minus);
  return {{z0, k, 0.0}, spec.omega0 * (1.0 + delta)};
}

}  // namespace

TEST_CASE("hamiltonian frequency and canonical derivatives at the carrier") {
  const MediumProfiles medium{Profile::uniform(298.5), Profile::uniform(300.0)};
  // At k = -k0 the quadratic term vanishes: omega = omega0 - u k0.
  const double w = hamiltonian_frequency(-k0, 1.0e-3, medium, spec);
  CHECK(close_rel(w, spec.omega0 - 298.5 * k0, 1e-14));

  const Eigen::Vector2d f = ray_derivatives({1.0e-3, -k0, 0.0}, medium, spec);
  CHECK(close_rel(f[0], -1.5, 1e-12));  // u - v_g
  CHECK(f[1] == 0.0);                   // uniform medium: k frozen
}

TEST_CASE("ray turns where the flow crosses the turning speed") {
  const MediumProfiles medium = bounce_medium();
  const auto launch = resonant_minus(medium, 298.5, 3.0e-3);

  IntegratorConfig cfg;
  cfg.t_end = 2.0e-3;
  const RayTrajectory traj =
      trace(launch.state, launch.omega, medium, spec, cfg);

  CHECK(traj.stop == StopReason::time_end);
  CHECK(traj.max_omega_drift <= 1e-9);

  const RayEvent* turn = nullptr;
  const RayEvent* exit = nullptr;
  for (const RayEvent& e : traj.events) {
    if (e.kind == RayEventKind::turning_point && !turn) turn = &e;
    if (e.kind == RayEventKind::window_exit && !exit) exit = &e;
  }
  REQUIRE(turn != nullptr);
  const RayEvent& ev = *turn;
  // The turning point sits where u(z) = u_turn, frozen at z = 2.0730 mm.
  const double u_turn = turning_flow_speed(298.5, 300.0);
  CHECK(close_abs(medium.flow(ev.z), u_turn, 1e-6));
  CHECK(close_abs(ev.z, 0.0020730078208619196, 1e-6));
  // dz/dt vanishes at the event; v ~ sqrt(z - z*) near the turning, so the
  // 1e-9 m event refinement leaves up to ~1e-2 m/s of residual speed.
  const double v_ev = ray_derivatives({ev.z, ev.k, ev.t}, medium, spec)[0];
  CHECK(std::abs(v_ev) <= 2e-2);

  // On the approach |k| slides from k0 toward k0 u/v_g, so the comoving
  // offset v_g (k^2 - k0^2) / (2 k0) reaches ~-1.5e7 rad/s: the pulse leaves
  // the 3e6 rad/s transparency window well before it turns.
  REQUIRE(exit != nullptr);
  CHECK(exit->t < ev.t);
  const double offset =
      traj.omega - medium.flow(exit->z) * exit->k - spec.omega0;
  CHECK(close_rel(std::abs(offset), 3.0e6, 1e-3));

  // The ray comes back out: final sample moves in +z and lies right of the
  // turning point.
  const RaySample& last = traj.samples.back();
  CHECK(last.z > ev.z);
  CHECK(ray_derivatives({last.z, last.k, last.t}, medium, spec)[0] > 0.0);
}

TEST_CASE("time reversal closes the bounce trajectory") {
  const MediumProfiles medium = bounce_medium();
  const auto launch = resonant_minus(medium, 298.5, 3.0e-3);

  IntegratorConfig cfg;
  cfg.t_end = 2.0e-3;
  const RayTrajectory fwd = trace(launch.state, launch.omega, medium, spec, cfg);
  const RaySample end = fwd.samples.back();

  IntegratorConfig back = cfg;
  back.t_end = 0.0;
  const RayTrajectory rev =
      trace({end.z, end.k, end.t}, fwd.omega, medium, spec, back);
  const RaySample home = rev.samples.back();
  CHECK(close_rel(home.t, 0.0, 1e-12));
  CHECK(std::abs(home.z - launch.state.z) <= 1e-6 * launch.state.z);
  CHECK(std::abs(home.k - launch.state.k) <= 1e-6 * std::abs(launch.state.k));
}

TEST_CASE("fixed-step integration converges at fifth order") {
  const MediumProfiles medium = bounce_medium();
  const auto launch = resonant_minus(medium, medium.flow(2.6e-3), 2.6e-3);

  auto final_z = [&](double dt) {
    IntegratorConfig cfg;
    cfg.adaptive = false;
    cfg.dt = dt;
    cfg.t_end = 3.0e-4;
    const RayTrajectory traj =
        trace(launch.state, launch.omega, medium, spec, cfg);
    return traj.samples.back().z;
  };

  const double z1 = final_z(1.5e-5);
  const double z2 = final_z(7.5e-6);
  const double z3 = final_z(3.75e-6);
  const double e1 = std::abs(z1 - z2);
  const double e2 = std::abs(z2 - z3);
  REQUIRE(e2 > 0.0);
  // Dormand-Prince 5(4): halving the step should cut the error by ~2^5.
  CHECK(e1 / e2 >= 16.0);
  CHECK(e1 / e2 <= 80.0);
}

TEST_CASE("loop phase of a constant-|k| out-and-back path is 2 k L") {
  const double K = 1.0e5;
  const double L = 1.0e-3;
  const int n = 100;

  RayTrajectory traj;
  for (int i = 0; i <= n; ++i)
    traj.samples.push_back({1.0e-6 * i, L * i / n, K, 0.0});
  traj.events.push_back({RayEventKind::turning_point, 1.0e-6 * n, L, 0.0});
  for (int i = 0; i <= n; ++i)
    traj.samples.push_back({1.0e-6 * (n + 1 + i), L * (n - i) / n, -K, 0.0});

  CHECK(close_rel(semiclassical_phase(traj), 2.0 * K * L, 1e-12));

  // Without a turning event the phase is undefined.
  traj.events.clear();
  CHECK_THROWS_AS((void)semiclassical_phase(traj), PhasePrecondition);
}

TEST_CASE("loop phase is integrator-converged on the bounce") {
  const MediumProfiles medium = bounce_medium();
  const auto launch = resonant_minus(medium, 298.5, 3.0e-3);

  // The loop phase is a trapezoid sum over the samples, so its accuracy is
  // set by the sampling density; compare two fixed-step runs.
  auto phase_at = [&](double dt) {
    IntegratorConfig cfg;
    cfg.adaptive = false;
    cfg.dt = dt;
    cfg.t_end = 1.6e-3;
    return semiclassical_phase(
        trace(launch.state, launch.omega, medium, spec, cfg));
  };
  const double coarse = phase_at(1.0e-7);
  const double fine = phase_at(5.0e-8);
  CHECK(close_rel(coarse, fine, 1e-6));
}

TEST_CASE("launch validation rejects off-shell and evanescent states") {
  const MediumProfiles medium{Profile::uniform(298.5), Profile::uniform(300.0)};
  const double delta = resonant_detuning(298.5, spec, Branch::minus);
  const double omega = spec.omega0 * (1.0 + delta);
  CHECK_THROWS_AS(
      (void)trace({1.0e-3, -0.9 * k0, 0.0}, omega, medium, spec, {}),
      OffShellLaunch);

  // Just below the turning point the residual minimum -k0^2 D is tiny (so the
  // state passes the on-shell gate) but D < 0: evanescent.
  const MediumProfiles still{Profile::uniform(0.0), Profile::uniform(300.0)};
  const double delta_ev = -(1.0 + 1.0e-9) * 0.5e-6;
  CHECK_THROWS_AS((void)trace({1.0e-3, 0.0, 0.0},
                              spec.omega0 * (1.0 + delta_ev), still, spec, {}),
                  EvanescentLaunch);
}

TEST_CASE("domain exit stops the trace and the exit sample stays in-domain") {
  ProfileSpec fs;
  fs.kind = ProfileKind::uniform;
  fs.value = 298.5;
  fs.domain_min = 0.0;
  fs.domain_max = 4.0e-3;
  ProfileSpec gs = fs;
  gs.value = 300.0;
  const MediumProfiles medium{Profile(fs), Profile(gs)};

  const double delta = resonant_detuning(298.5, spec, Branch::plus);
  const double k = solve_wavevector(delta, 298.5, 300.0, spec, Branch::plus);
  const RayTrajectory traj = trace({2.0e-3, k, 0.0},
                                   spec.omega0 * (1.0 + delta), medium, spec, {});

  CHECK(traj.stop == StopReason::domain_exit);
  REQUIRE(!traj.events.empty());
  const RayEvent& ev = traj.events.back();
  CHECK(ev.kind == RayEventKind::domain_exit);
  CHECK(ev.z <= 4.0e-3);
  CHECK(ev.z >= 4.0e-3 - 1.0e-6);
  const RaySample& last = traj.samples.back();
  CHECK(last.z <= 4.0e-3);
  CHECK(last.z >= 4.0e-3 - 1.0e-6);
}
