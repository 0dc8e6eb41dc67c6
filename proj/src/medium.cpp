#include "slowlight/medium.hpp"

#include <cmath>

namespace slowlight {

double susceptibility(double omega_prime, const MediumSpec& spec, double vg) {
  return (2.0 * spec.constants.c / vg) * (omega_prime - spec.omega0) / spec.omega0;
}

double doppler_shift(double omega, double k, double u) { return omega - u * k; }

double doppler_shift(double omega, const Eigen::Vector3d& k,
                     const Eigen::Vector3d& u) {
  return omega - u.dot(k);
}

double window_half_width(const MediumSpec& spec, double vg) {
  return spec.epsilon * (vg / spec.constants.c) * spec.omega0;
}

bool in_window(double omega_prime, const MediumSpec& spec, double vg) {
  return std::abs(omega_prime - spec.omega0) < window_half_width(spec, vg);
}

}  // namespace slowlight
