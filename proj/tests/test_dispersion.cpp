#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "slowlight/dispersion.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/numerics.hpp"
#include "test_util.hpp"

using namespace slowlight;
using testutil::close_rel;

namespace {
const MediumSpec spec;
const double c = spec.constants.c;
const double k0 = spec.k0();
}  // namespace

TEST_CASE("discriminant reference values") {
  CHECK(discriminant(0.0, 0.0, 300.0, spec) == 1.0);
  // Resonant minus-branch launch in uniform flow: D = (1 - u0/v_g)^2 exactly.
  const double u0 = 298.5;
  const double d_res = discriminant(-u0 / c, u0, 300.0, spec);
  CHECK(close_rel(d_res, 2.5e-5, 1e-10));
  // Slightly deepened detuning (the bounce launch): frozen reference.
  const double d_bounce = discriminant(1.00001 * (-u0 / c), u0, 300.0, spec);
  CHECK(close_rel(d_bounce, 5.099999999758076e-6, 1e-9));
}

TEST_CASE("wavevector root satisfies the approximate dispersion relation") {
  for (double delta : {0.0, -5.0e-7, -1.0e-6}) {
    const double omega = spec.omega0 * (1.0 + delta);
    for (int i = 0; i <= 32; ++i) {
      const double u = -600.0 + 1200.0 * i / 32.0;
      for (Branch b : {Branch::plus, Branch::minus}) {
        const double d = discriminant(delta, u, 300.0, spec);
        if (d < 0.0) continue;
        const double k = solve_wavevector(delta, u, 300.0, spec, b);
        // The residual subtracts terms of order omega0 * 2k0/vg ~ 2e20, so
        // its evaluation noise floor is ~1e5; 1e-8 k0^2 = 1e6 sits safely
        // above that while still pinning the root to ~1e-9 k0.
        CHECK(std::abs(residual_slowlight(k, omega, u, spec, 300.0)) <=
              1e-8 * k0 * k0);
      }
    }
  }
}

TEST_CASE("group velocity equals the velocity-addition form u + v_g k/k0") {
  for (double delta : {0.0, -5.0e-7, -1.0e-6, 2.0e-7}) {
    for (int i = 0; i <= 32; ++i) {
      const double u = -600.0 + 1200.0 * i / 32.0;
      for (Branch b : {Branch::plus, Branch::minus}) {
        const double d = discriminant(delta, u, 300.0, spec);
        if (d < 1e-3) continue;  // keep the comparison well conditioned
        const double k = solve_wavevector(delta, u, 300.0, spec, b);
        const double v = group_velocity_1d(delta, u, 300.0, spec, b);
        CHECK(close_rel(v, u + 300.0 * k / k0, 1e-12));
      }
    }
  }
}

TEST_CASE("resonant launch velocities: the figure-2 working points") {
  const double u0 = 298.5;
  const double delta = resonant_detuning(u0, spec, Branch::minus);
  CHECK(close_rel(delta, -9.95e-7, 1e-12));
  CHECK(resonant_detuning(u0, spec, Branch::plus) == -delta);

  // Launch velocity -1.5 m/s, and the post-step speedup to 3.0192 m/s.
  const double v_launch = group_velocity_1d(delta, u0, 300.0, spec, Branch::minus);
  CHECK(close_rel(v_launch, -1.5, 1e-9));
  const double v_post =
      group_velocity_1d(delta, 298.5115, 300.0, spec, Branch::minus);
  CHECK(close_rel(v_post, -3.0192105342291056, 1e-12));

  // The resonant carrier sits exactly at -k0.
  const double k = solve_wavevector(delta, u0, 300.0, spec, Branch::minus);
  CHECK(close_rel(k, -k0, 1e-12));
}

TEST_CASE("galilean limit at both resonances") {
  for (double u0 : {0.0, 50.0, 150.0, 298.5}) {
    const double dm = resonant_detuning(u0, spec, Branch::minus);
    const double vm = group_velocity_1d(dm, u0, 300.0, spec, Branch::minus);
    CHECK(std::abs(vm - (u0 - 300.0)) <= 1e-12 * 300.0);
    const double dp = resonant_detuning(u0, spec, Branch::plus);
    const double vp = group_velocity_1d(dp, u0, 300.0, spec, Branch::plus);
    CHECK(std::abs(vp - (u0 + 300.0)) <= 1e-12 * 300.0);
  }
}

TEST_CASE("turning flow speed: closed form, monotonicity, domain") {
  const double u_turn = turning_flow_speed(298.5, 300.0);
  CHECK(close_rel(u_turn, 298.496231131986, 1e-12));
  CHECK(close_rel(298.5 - u_turn, 0.0037688680139922326, 1e-9));
  CHECK(u_turn < 298.5);
  CHECK(close_rel(turning_flow_speed(300.0, 300.0), 300.0, 1e-12));
  CHECK_THROWS_AS((void)turning_flow_speed(149.0, 300.0), NoTurningPoint);

  // The discriminant really vanishes there for the resonant detuning.
  const double d = discriminant(-298.5 / c, u_turn, 300.0, spec);
  CHECK(std::abs(d) <= 1e-10);
}

TEST_CASE("turning group velocity: roots of vg^2 + 2 c delta vg + u0^2") {
  const double u0 = 298.5;
  const double delta = 1.00001 * (-u0 / c);
  const double vg_turn = turning_group_velocity(delta, u0, spec);
  CHECK(close_rel(vg_turn, 299.83792091990557, 1e-12));
  CHECK(close_rel(300.0 - vg_turn, 0.16207908009442917, 1e-9));

  const auto [small, large] = turning_group_velocity_roots(delta, u0, spec);
  CHECK(large == vg_turn);
  CHECK(small < large);
  CHECK(close_rel(small * large, u0 * u0, 1e-12));       // Vieta product
  CHECK(close_rel(small + large, -2.0 * c * delta, 1e-12));  // Vieta sum
  // The quadratic indeed vanishes at the root via the discriminant.
  CHECK(std::abs(discriminant(delta, u0, vg_turn, spec)) <= 1e-10);

  // Deeper detuning reference point.
  const double vg2 = turning_group_velocity(-2.0 * u0 / c, u0, spec);
  CHECK(close_rel(vg2, 1114.0171660593098, 1e-12));

  CHECK_THROWS_AS((void)turning_group_velocity(1.0e-6, u0, spec), NoTurningPoint);
  CHECK_THROWS_AS((void)turning_group_velocity(-0.5 * u0 / c, u0, spec),
                  NoTurningPoint);
}

TEST_CASE("regime classification is tolerance-first") {
  // Exact turning: D = 0.
  const double u_turn = turning_flow_speed(298.5, 300.0);
  CHECK(classify_regime(-298.5 / c, u_turn, 300.0, spec, Branch::minus) ==
        Regime::at_turning_point);
  // Tiny negative D from roundoff still classifies as turning, not evanescent.
  CHECK(classify_regime(-300.0 / c, 300.0, 300.0, spec, Branch::minus) ==
        Regime::at_turning_point);
  // Deeply negative D is evanescent.
  CHECK(classify_regime(-1.0e-5, 0.0, 300.0, spec, Branch::minus) ==
        Regime::evanescent);
  // Propagating but detuned out of the transparency window.
  CHECK(classify_regime(1.0e-6, 0.0, 300.0, spec, Branch::plus) ==
        Regime::out_of_window);
  // On resonance in still medium: propagating, in window.
  CHECK(classify_regime(0.0, 0.0, 300.0, spec, Branch::plus) ==
        Regime::propagating);

  const DispersionResult r =
      solve_dispersion(-1.0e-5, 0.0, 300.0, spec, Branch::minus);
  CHECK(r.regime == Regime::evanescent);
  CHECK_FALSE(r.k.has_value());
  CHECK_FALSE(r.v.has_value());
  const DispersionResult turning =
      solve_dispersion(-300.0 / c, 300.0, 300.0, spec, Branch::minus);
  CHECK(turning.regime == Regime::at_turning_point);
  CHECK(turning.v.has_value());
  CHECK(*turning.v == 0.0);
}

TEST_CASE("evanescent region throws from the root solvers") {
  CHECK_THROWS_AS((void)solve_wavevector(-1.0e-5, 0.0, 300.0, spec, Branch::minus),
                  EvanescentRegion);
  CHECK_THROWS_AS(
      (void)group_velocity_1d(-1.0e-5, 0.0, 300.0, spec, Branch::minus),
      EvanescentRegion);
}

TEST_CASE("approximate root stays close to the full dispersion relation") {
  // The linear-susceptibility relation k^2 = (w'^2/c^2)(1 + chi(w')) and the
  // slow-light approximation share roots to ~1e-9 k0 near resonance; the
  // frozen residual of the approximate root in the full relation is
  // -2.004e-9 k0^2 at the figure-2 launch point.
  const double u0 = 298.5;
  const double delta = resonant_detuning(u0, spec, Branch::minus);
  const double omega = spec.omega0 * (1.0 + delta);
  const double k_approx = solve_wavevector(delta, u0, 300.0, spec, Branch::minus);
  CHECK(std::abs(residual_slowlight(k_approx, omega, u0, spec, 300.0)) <=
        1e-12 * k0 * k0);
  const double res_full = residual_full(k_approx, omega, u0, spec, 300.0);
  CHECK(res_full / (k0 * k0) == doctest::Approx(-2.004e-9).epsilon(1e-3));

  // Polishing the full relation moves the root by far less than 1e-5 k0.
  const double k_full = bracketed_root(
      [&](double k) { return residual_full(k, omega, u0, spec, 300.0); },
      k_approx, 1e-4 * std::abs(k_approx));
  CHECK(std::abs(k_full - k_approx) <= 1e-5 * k0);
}
