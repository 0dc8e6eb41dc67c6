#include "slowlight/dispersion.hpp"

#include <cmath>

#include "slowlight/medium.hpp"

namespace slowlight {

std::string to_string(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

Branch branch_from_string(const std::string& name) {
  if (name == "plus" || name == "+") return Branch::plus;
  if (name == "minus" || name == "-") return Branch::minus;
  throw std::invalid_argument("unknown branch '" + name + "'");
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::propagating: return "propagating";
    case Regime::at_turning_point: return "at_turning_point";
    case Regime::evanescent: return "evanescent";
    case Regime::out_of_window: return "out_of_window";
  }
  return "propagating";
}

double discriminant(double delta, double u, double vg, const MediumSpec& spec) {
  const double a = 1.0 - u / vg;
  return a * a + 2.0 * (spec.constants.c * delta + u) / vg;
}

double residual_full(double k, double omega, double u, const MediumSpec& spec,
                     double vg) {
  const double omega_p = doppler_shift(omega, k, u);
  const double n2 = 1.0 + susceptibility(omega_p, spec, vg);
  const double kc = omega_p / spec.constants.c;
  return k * k - kc * kc * n2;
}

double residual_slowlight(double k, double omega, double u,
                          const MediumSpec& spec, double vg) {
  const double k0 = spec.k0();
  return k * k - k0 * k0 -
         (2.0 * k0 / vg) * (omega - u * k - spec.omega0);
}

double solve_wavevector(double delta, double u, double vg,
                        const MediumSpec& spec, Branch branch) {
  const double d = discriminant(delta, u, vg, spec);
  if (d < 0.0)
    throw EvanescentRegion("solve_wavevector: discriminant < 0, no real root");
  return spec.k0() * (branch_sign(branch) * std::sqrt(d) - u / vg);
}

double group_velocity_1d(double delta, double u, double vg,
                         const MediumSpec& spec, Branch branch) {
  const double d = discriminant(delta, u, vg, spec);
  if (d < 0.0)
    throw EvanescentRegion("group_velocity_1d: discriminant < 0");
  return branch_sign(branch) * vg * std::sqrt(d);
}

Eigen::Vector3d group_velocity_3d(const Eigen::Vector3d& k,
                                  const Eigen::Vector3d& u, double vg,
                                  const MediumSpec& spec) {
  return vg * k / spec.k0() + u;
}

double resonant_detuning(double u0, const MediumSpec& spec, Branch branch) {
  return branch_sign(branch) * u0 / spec.constants.c;
}

double galilean_velocity(double vg, double u0, Branch branch) {
  return branch_sign(branch) * vg + u0;
}

bool local_window_check(double delta, double u, double v, double vg,
                        const MediumSpec& spec) {
  const double c = spec.constants.c;
  return std::abs(delta - (u / vg) * (v - u) / c) < spec.epsilon * vg / c;
}

double turning_flow_speed(double u0, double vg) {
  const double arg = 2.0 * u0 / vg - 1.0;
  if (arg < 0.0)
    throw NoTurningPoint(
        "turning_flow_speed: u0 < v_g/2, no flow speed can turn the pulse");
  return vg * std::sqrt(arg);
}

std::pair<double, double> turning_group_velocity_roots(double delta, double u0,
                                                       const MediumSpec& spec) {
  // v_g^2 + 2 c delta v_g + u0^2 = 0 has positive roots only for delta < 0
  // and (c delta)^2 >= u0^2.
  const double cd = spec.constants.c * delta;
  const double disc = cd * cd - u0 * u0;
  if (delta >= 0.0 || disc < 0.0)
    throw NoTurningPoint(
        "turning_group_velocity: detuning too shallow, no real turning v_g");
  const double s = std::sqrt(disc);
  const double larger = -cd + s;
  // Evaluate the smaller root as u0^2 / larger (product of roots) to avoid
  // cancellation when |c delta| >> u0.
  const double smaller = (u0 * u0) / larger;
  return {smaller, larger};
}

double turning_group_velocity(double delta, double u0, const MediumSpec& spec) {
  return turning_group_velocity_roots(delta, u0, spec).second;
}

Regime classify_regime(double delta, double u, double vg,
                       const MediumSpec& spec, Branch branch, double d_tol) {
  const double d = discriminant(delta, u, vg, spec);
  if (std::abs(d) <= d_tol) return Regime::at_turning_point;
  if (d < 0.0) return Regime::evanescent;
  const double v = branch_sign(branch) * vg * std::sqrt(d);
  if (!local_window_check(delta, u, v, vg, spec)) return Regime::out_of_window;
  return Regime::propagating;
}

DispersionResult solve_dispersion(double delta, double u, double vg,
                                  const MediumSpec& spec, Branch branch,
                                  double d_tol) {
  DispersionResult result;
  result.regime = classify_regime(delta, u, vg, spec, branch, d_tol);
  if (result.regime == Regime::evanescent) return result;

  const double d = discriminant(delta, u, vg, spec);
  const double root = (result.regime == Regime::at_turning_point)
                          ? 0.0
                          : std::sqrt(d);
  result.k = spec.k0() * (branch_sign(branch) * root - u / vg);
  result.v = branch_sign(branch) * vg * root;
  result.in_local_window = local_window_check(delta, u, *result.v, vg, spec);
  return result;
}

}  // namespace slowlight
