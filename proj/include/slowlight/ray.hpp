#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

#include "slowlight/constants.hpp"
#include "slowlight/profile.hpp"

namespace slowlight {

/// Phase-space state of a ray (z, k) at time t.
struct RayState {
  double z = 0.0;
  double k = 0.0;
  double t = 0.0;
};

enum class RayEventKind { turning_point, window_exit, domain_exit };
std::string to_string(RayEventKind kind);

struct RayEvent {
  RayEventKind kind;
  double t;
  double z;
  double k;
};

enum class StopReason { domain_exit, max_steps, turning_budget, time_end };
std::string to_string(StopReason reason);

/// Settings for the Dormand-Prince 5(4) ray integrator. In adaptive mode dt
/// is the initial trial step and rel_tol drives the error controller; in
/// fixed mode every step is exactly dt. t_end (if finite) stops integration
/// at that time; t_end < launch time integrates backward; infinity (the
/// default) runs until another stop condition fires.
struct IntegratorConfig {
  double dt = 1.0e-6;          ///< initial / fixed step [s]
  double rel_tol = 1.0e-10;    ///< relative error tolerance (adaptive)
  bool adaptive = true;
  long max_steps = 2'000'000;
  double event_refine_tol = 1.0e-9;  ///< turning-event z refinement [m]
  int max_turning_events = 4;        ///< stop after this many turnings
  double t_end = std::numeric_limits<double>::infinity();
  double max_dt = 0.0;         ///< optional step ceiling [s]; 0 = none
};

struct RaySample {
  double t;
  double z;
  double k;
  double omega_drift;  ///< |omega(z,k) - omega_launch| / omega_launch
};

struct RayTrajectory {
  std::vector<RaySample> samples;
  std::vector<RayEvent> events;
  double omega = 0.0;            ///< conserved launch frequency [rad/s]
  double max_omega_drift = 0.0;  ///< worst relative drift over the run
  StopReason stop = StopReason::time_end;
};

/// Hamiltonian frequency omega(k, z) = omega0 + u(z) k
///   + (v_g(z) / (2 k0)) (k^2 - k0^2).
double hamiltonian_frequency(double k, double z, const MediumProfiles& medium,
                             const MediumSpec& spec);

/// Canonical equations: (dz/dt, dk/dt) =
///   (u + v_g k/k0,  -u' k - v_g' (k^2 - k0^2) / (2 k0)).
Eigen::Vector2d ray_derivatives(const RayState& state,
                                const MediumProfiles& medium,
                                const MediumSpec& spec);

/// Integrate a ray from `initial` carrying conserved frequency `omega`.
/// Launch must be on-shell (|residual| small) and propagating, else
/// OffShellLaunch / EvanescentLaunch. Turning events (dz/dt sign changes) are
/// refined by bisection on the dense-output interpolant to event_refine_tol
/// and recorded, as are transparency-window exits; integration stops at
/// domain exit, max_steps, the turning budget, or t_end.
RayTrajectory trace(const RayState& initial, double omega,
                    const MediumProfiles& medium, const MediumSpec& spec,
                    const IntegratorConfig& config);

/// Loop phase integral of k dz accumulated by the trapezoid rule along a
/// trajectory containing exactly one turning event, from launch back to the
/// launch position. For a constant-|k| out-and-back path of one-way length L
/// this is 2|k|L. No Maslov phase offset is added; consumers comparing
/// configurations need only phase differences, which are offset-free.
double semiclassical_phase(const RayTrajectory& trajectory);

}  // namespace slowlight
