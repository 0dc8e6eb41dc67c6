#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>

#include "slowlight/constants.hpp"
#include "slowlight/errors.hpp"

namespace slowlight {

/// Root branch of the quadratic dispersion relation: plus propagates along
/// +z against the natural flow-free carrier, minus along -z.
enum class Branch { plus, minus };

inline double branch_sign(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }
std::string to_string(Branch b);
Branch branch_from_string(const std::string& name);

/// Local propagation regime at a (delta, u, v_g) working point.
enum class Regime { propagating, at_turning_point, evanescent, out_of_window };
std::string to_string(Regime r);

/// Discriminant D = 1 + 2(c/v_g)delta + u^2/v_g^2 of the quadratic in k.
/// Computed in the grouping (1 - u/v_g)^2 + 2(c*delta + u)/v_g, which is
/// algebraically identical but avoids the catastrophic cancellation near
/// turning points where D -> 0 (there c*delta + u -> small directly instead
/// of as a difference of O(1) terms).
double discriminant(double delta, double u, double vg, const MediumSpec& spec);

/// Exact local dispersion residual k^2 - (omega'^2/c^2)(1 + chi(omega')),
/// omega' = omega - u*k. Zero on the full dispersion shell.
double residual_full(double k, double omega, double u, const MediumSpec& spec,
                     double vg);

/// Slow-light approximate residual k^2 - k0^2 - (2 k0/v_g)(omega - u k - omega0).
/// Zero on the approximate shell used by the ray and wave layers.
double residual_slowlight(double k, double omega, double u,
                          const MediumSpec& spec, double vg);

/// Root of the approximate dispersion relation at lab detuning delta:
/// k = k0 (s*sqrt(D) - u/v_g), s = branch sign. Throws EvanescentRegion when
/// D < 0.
double solve_wavevector(double delta, double u, double vg,
                        const MediumSpec& spec, Branch branch);

/// Group velocity v = s * v_g * sqrt(D) for the chosen branch. Throws
/// EvanescentRegion when D < 0; returns 0 at D = 0.
double group_velocity_1d(double delta, double u, double vg,
                         const MediumSpec& spec, Branch branch);

/// 3-D velocity addition theorem v = v_g * k/k0 + u (valid on-shell).
Eigen::Vector3d group_velocity_3d(const Eigen::Vector3d& k,
                                  const Eigen::Vector3d& u, double vg,
                                  const MediumSpec& spec);

/// Detuning that puts the comoving frequency exactly on resonance in flow u0:
/// delta = s * u0/c (branch sign s). At this detuning the lab-frame group
/// velocity is exactly s*v_g + u0.
double resonant_detuning(double u0, const MediumSpec& spec, Branch branch);

/// Galilean limit velocity s*v_g + u0 for a resonant pulse in uniform flow.
double galilean_velocity(double vg, double u0, Branch branch);

/// Local transparency-window check expressed in velocity variables:
/// |delta - (u/v_g)(v - u)/c| < epsilon v_g / c with v the lab group velocity.
/// Equivalent to in_window(omega - u k) on-shell.
bool local_window_check(double delta, double u, double v, double vg,
                        const MediumSpec& spec);

/// Flow speed at which a resonant pulse (delta = -u0/c, minus branch) turns:
/// u_turn = v_g sqrt(2 u0/v_g - 1). Requires u0 >= v_g/2 (throws
/// NoTurningPoint otherwise); u_turn <= u0 with equality iff u0 = v_g.
double turning_flow_speed(double u0, double vg);

/// Both roots of v_g^2 + 2 c delta v_g + u0^2 = 0: the group-velocity values
/// at which a pulse launched with detuning delta turns in uniform flow u0.
/// Returned as (smaller, larger); throws NoTurningPoint when c^2 delta^2 <
/// u0^2 (no real root) or delta >= 0 (roots not positive).
std::pair<double, double> turning_group_velocity_roots(double delta, double u0,
                                                       const MediumSpec& spec);

/// The physically selected (larger) turning group-velocity root, i.e. the
/// first one reached when v_g decreases from its launch value.
double turning_group_velocity(double delta, double u0, const MediumSpec& spec);

/// Classify the propagation regime at a working point. Tolerance-first:
/// |D| <= d_tol is at-turning-point (so D = 0 and tiny negative roundoff both
/// classify as turning), then D < 0 is evanescent, then a failed window check
/// is out-of-window, else propagating.
Regime classify_regime(double delta, double u, double vg,
                       const MediumSpec& spec, Branch branch,
                       double d_tol = 1e-12);

/// Regime plus the root data that exists in that regime. k and v are present
/// for propagating, at-turning-point and out-of-window states (v = 0 at a
/// turning point), absent for evanescent ones.
struct DispersionResult {
  Regime regime = Regime::propagating;
  std::optional<double> k;
  std::optional<double> v;
  bool in_local_window = false;
};

DispersionResult solve_dispersion(double delta, double u, double vg,
                                  const MediumSpec& spec, Branch branch,
                                  double d_tol = 1e-12);

}  // namespace slowlight
