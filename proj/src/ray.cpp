#include "slowlight/ray.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slowlight/dispersion.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/medium.hpp"

namespace slowlight {

std::string to_string(RayEventKind kind) {
  switch (kind) {
    case RayEventKind::turning_point: return "turning_point";
    case RayEventKind::window_exit: return "window_exit";
    case RayEventKind::domain_exit: return "domain_exit";
  }
  return "turning_point";
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::domain_exit: return "domain_exit";
    case StopReason::max_steps: return "max_steps";
    case StopReason::turning_budget: return "turning_budget";
    case StopReason::time_end: return "time_end";
  }
  return "time_end";
}

double hamiltonian_frequency(double k, double z, const MediumProfiles& medium,
                             const MediumSpec& spec) {
  const double k0 = spec.k0();
  return spec.omega0 + medium.flow(z) * k +
         medium.group_velocity(z) / (2.0 * k0) * (k * k - k0 * k0);
}

Eigen::Vector2d ray_derivatives(const RayState& state,
                                const MediumProfiles& medium,
                                const MediumSpec& spec) {
  const double k0 = spec.k0();
  const double u = medium.flow(state.z);
  const double vg = medium.group_velocity(state.z);
  const double du = medium.flow.derivative(state.z);
  const double dvg = medium.group_velocity.derivative(state.z);
  return {u + vg * state.k / k0,
          -du * state.k - dvg * (state.k * state.k - k0 * k0) / (2.0 * k0)};
}

namespace {

// Phase-space vector (z, k) used internally by the integrator.
using Vec2 = Eigen::Vector2d;

// Medium evaluation clamped to the integration domain: RK stages may probe
// slightly past the boundary before the crossing is refined and the
// trajectory truncated there.
struct ClampedMedium {
  const MediumProfiles& medium;
  const MediumSpec& spec;
  double z_lo, z_hi;

  double clamp(double z) const { return std::clamp(z, z_lo, z_hi); }
  double u(double z) const { return medium.flow(clamp(z)); }
  double vg(double z) const { return medium.group_velocity(clamp(z)); }
  double du(double z) const { return medium.flow.derivative(clamp(z)); }
  double dvg(double z) const {
    return medium.group_velocity.derivative(clamp(z));
  }

  Vec2 rhs(const Vec2& y) const {
    const double k0 = spec.k0();
    const double z = y[0], k = y[1];
    return {u(z) + vg(z) * k / k0,
            -du(z) * k - dvg(z) * (k * k - k0 * k0) / (2.0 * k0)};
  }

  double frequency(const Vec2& y) const {
    const double k0 = spec.k0();
    return spec.omega0 + u(y[0]) * y[1] +
           vg(y[0]) / (2.0 * k0) * (y[1] * y[1] - k0 * k0);
  }

  double group_speed(const Vec2& y) const {
    return u(y[0]) + vg(y[0]) * y[1] / spec.k0();
  }

  // Signed distance to the window edge at comoving frequency omega - u k:
  // positive inside the transparency window.
  double window_margin(const Vec2& y, double omega) const {
    const double vgz = vg(y[0]);
    return window_half_width(spec, vgz) -
           std::abs(omega - u(y[0]) * y[1] - spec.omega0);
  }
};

// Cubic Hermite interpolation of one accepted step.
struct DenseStep {
  Vec2 y0, f0, y1, f1;
  double t0, h;

  Vec2 eval(double theta) const {
    const double t2 = theta * theta, t3 = t2 * theta;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + theta;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y0 + (h10 * h) * f0 + h01 * y1 + (h11 * h) * f1;
  }

  double time(double theta) const { return t0 + theta * h; }
};

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640,
                 e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

struct StepResult {
  Vec2 y1, f1;   // new state and its derivative (FSAL stage)
  double error;  // scaled error norm
};

StepResult dp54_step(const ClampedMedium& m, const Vec2& y, const Vec2& f0,
                     double h, const Vec2& scale) {
  const Vec2 k1 = f0;
  const Vec2 k2 = m.rhs(y + h * (a21 * k1));
  const Vec2 k3 = m.rhs(y + h * (a31 * k1 + a32 * k2));
  const Vec2 k4 = m.rhs(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const Vec2 k5 = m.rhs(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const Vec2 k6 =
      m.rhs(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  const Vec2 y1 =
      y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const Vec2 k7 = m.rhs(y1);
  const Vec2 err =
      h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  const double ez = err[0] / scale[0], ek = err[1] / scale[1];
  return {y1, k7, std::sqrt(0.5 * (ez * ez + ek * ek))};
}

double refine_theta(const DenseStep& step,
                    const std::function<double(const Vec2&)>& g,
                    double refine_tol_z) {
  double lo = 0.0, hi = 1.0;
  double glo = g(step.eval(lo));
  for (int i = 0; i < 128; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(step.eval(mid));
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
    if (std::abs(step.eval(hi)[0] - step.eval(lo)[0]) <= refine_tol_z &&
        (hi - lo) < 1e-12)
      break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

RayTrajectory trace(const RayState& initial, double omega,
                    const MediumProfiles& medium, const MediumSpec& spec,
                    const IntegratorConfig& config) {
  const double z_lo = std::max(medium.flow.domain_min(),
                               medium.group_velocity.domain_min());
  const double z_hi = std::min(medium.flow.domain_max(),
                               medium.group_velocity.domain_max());
  if (!(z_lo < z_hi))
    throw std::invalid_argument("trace: profiles have no common z domain");
  if (initial.z < z_lo || initial.z > z_hi)
    throw ProfileDomainError("trace: launch z outside the medium domain");
  const double span = z_hi - z_lo;
  const ClampedMedium m{medium, spec, z_lo, z_hi};
  const double k0 = spec.k0();

  // Launch validation: on-shell and non-evanescent.
  {
    const double u0 = m.u(initial.z), vg0 = m.vg(initial.z);
    const double res = residual_slowlight(initial.k, omega, u0, spec, vg0);
    if (std::abs(res) > 1e-8 * k0 * k0) {
      std::ostringstream msg;
      msg << "trace: launch state off the dispersion shell (|residual| = "
          << std::abs(res) << " > 1e-8 k0^2)";
      throw OffShellLaunch(msg.str());
    }
    const double delta = omega / spec.omega0 - 1.0;
    if (discriminant(delta, u0, vg0, spec) < -1e-12)
      throw EvanescentLaunch(
          "trace: launch point is evanescent for this frequency");
  }

  RayTrajectory traj;
  traj.omega = omega;

  Vec2 y{initial.z, initial.k};
  double t = initial.t;
  Vec2 f = m.rhs(y);
  bool window_inside = m.window_margin(y, omega) > 0.0;

  traj.samples.push_back({t, y[0], y[1], 0.0});

  const bool backward =
      std::isfinite(config.t_end) && config.t_end < initial.t;
  const double dir = backward ? -1.0 : 1.0;
  const Vec2 scale{config.rel_tol * span +
                       config.rel_tol * std::abs(initial.z),
                   config.rel_tol * k0 + config.rel_tol * std::abs(initial.k)};

  double h = dir * std::abs(config.dt);
  int turnings = 0;
  traj.stop = StopReason::max_steps;

  for (long step = 0; step < config.max_steps; ++step) {
    if (std::isfinite(config.t_end)) {
      const double remaining = (config.t_end - t) * dir;
      if (remaining <= 1e-15 * std::max(1.0, std::abs(t))) {
        traj.stop = StopReason::time_end;
        break;
      }
      if (std::abs(h) > remaining) h = dir * remaining;
    }
    if (config.adaptive) {
      // Keep |dz| per step a small fraction of the domain so that events
      // cannot straddle unobserved profile structure.
      const double vmag = std::abs(f[0]);
      if (vmag > 0.0) h = dir * std::min(std::abs(h), 0.004 * span / vmag);
      if (config.max_dt > 0.0) h = dir * std::min(std::abs(h), config.max_dt);
    }

    StepResult r = dp54_step(m, y, f, h, scale);
    if (config.adaptive) {
      bool accepted = r.error <= 1.0;
      int rejects = 0;
      while (!accepted) {
        const double shrink =
            std::max(0.2, 0.9 * std::pow(std::max(r.error, 1e-300), -0.2));
        h *= std::min(shrink, 0.9);
        if (std::abs(h) < 1e-16 * std::max(1.0, std::abs(t)) || ++rejects > 64)
          throw IntegrationFailure("trace: step size collapsed");
        r = dp54_step(m, y, f, h, scale);
        accepted = r.error <= 1.0;
      }
    }
    if (!r.y1.allFinite())
      throw IntegrationFailure("trace: non-finite state encountered");

    const DenseStep dense{y, f, r.y1, r.f1, t, h};
    const double t_new = t + h;

    // Collect events inside this step, ordered by their position in time.
    struct Pending {
      double theta;
      RayEventKind kind;
    };
    std::vector<Pending> pending;

    const double v0 = f[0], v1 = r.f1[0];
    if (v0 != 0.0 && std::signbit(v0) != std::signbit(v1)) {
      const double theta = refine_theta(
          dense, [&](const Vec2& p) { return m.group_speed(p); },
          config.event_refine_tol);
      pending.push_back({theta, RayEventKind::turning_point});
    }
    if (window_inside && m.window_margin(r.y1, omega) <= 0.0) {
      const double theta = refine_theta(
          dense, [&](const Vec2& p) { return m.window_margin(p, omega); },
          config.event_refine_tol);
      pending.push_back({theta, RayEventKind::window_exit});
    }
    const bool exited = r.y1[0] < z_lo || r.y1[0] > z_hi;
    if (exited) {
      const double boundary = r.y1[0] < z_lo ? z_lo : z_hi;
      const double theta = refine_theta(
          dense, [&](const Vec2& p) { return p[0] - boundary; },
          config.event_refine_tol);
      pending.push_back({theta, RayEventKind::domain_exit});
    }
    std::sort(pending.begin(), pending.end(),
              [](const Pending& a, const Pending& b) { return a.theta < b.theta; });

    bool terminated = false;
    for (const Pending& p : pending) {
      Vec2 ev = dense.eval(p.theta);
      // Bisection leaves the exit position within event_refine_tol of the
      // boundary but possibly a rounding step outside; keep samples in-domain.
      if (p.kind == RayEventKind::domain_exit)
        ev[0] = std::clamp(ev[0], z_lo, z_hi);
      traj.events.push_back({p.kind, dense.time(p.theta), ev[0], ev[1]});
      if (p.kind == RayEventKind::window_exit) window_inside = false;
      if (p.kind == RayEventKind::domain_exit) {
        const double drift =
            std::abs(m.frequency(ev) - omega) / omega;
        traj.max_omega_drift = std::max(traj.max_omega_drift, drift);
        traj.samples.push_back({dense.time(p.theta), ev[0], ev[1], drift});
        traj.stop = StopReason::domain_exit;
        terminated = true;
        break;
      }
      if (p.kind == RayEventKind::turning_point &&
          ++turnings >= config.max_turning_events) {
        const double drift =
            std::abs(m.frequency(ev) - omega) / omega;
        traj.max_omega_drift = std::max(traj.max_omega_drift, drift);
        traj.samples.push_back({dense.time(p.theta), ev[0], ev[1], drift});
        traj.stop = StopReason::turning_budget;
        terminated = true;
        break;
      }
    }
    if (terminated) break;

    y = r.y1;
    f = r.f1;
    t = t_new;
    const double drift = std::abs(m.frequency(y) - omega) / omega;
    traj.max_omega_drift = std::max(traj.max_omega_drift, drift);
    traj.samples.push_back({t, y[0], y[1], drift});

    if (config.adaptive) {
      const double grow =
          0.9 * std::pow(std::max(r.error, 1e-300), -0.2);
      h *= std::clamp(grow, 0.2, 5.0);
    }
  }

  return traj;
}

double semiclassical_phase(const RayTrajectory& trajectory) {
  int turning_count = 0;
  double t_turn = 0.0;
  for (const RayEvent& e : trajectory.events) {
    if (e.kind == RayEventKind::turning_point) {
      ++turning_count;
      t_turn = e.t;
    }
  }
  if (turning_count != 1)
    throw PhasePrecondition(
        "semiclassical_phase: trajectory must contain exactly one turning event");

  const auto& s = trajectory.samples;
  if (s.size() < 2) return 0.0;
  const double z_launch = s.front().z;

  double phase = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double za = s[i].z, zb = s[i + 1].z;
    const double ka = s[i].k, kb = s[i + 1].k;
    // After the turning, stop at the first return crossing of the launch z.
    const bool past_turn = s[i + 1].t > t_turn;
    if (past_turn && (za - z_launch) * (zb - z_launch) <= 0.0) {
      if (za == zb) return phase;  // degenerate: already at the launch z
      const double theta = (z_launch - za) / (zb - za);
      const double kc = ka + theta * (kb - ka);
      phase += 0.5 * (ka + kc) * (z_launch - za);
      return phase;
    }
    phase += 0.5 * (ka + kb) * (zb - za);
  }
  throw PhasePrecondition(
      "semiclassical_phase: trajectory never returns to the launch position");
}

}  // namespace slowlight
