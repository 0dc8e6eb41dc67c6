#pragma once

#include <Eigen/Dense>

#include "slowlight/constants.hpp"

namespace slowlight {

/// Linearized EIT susceptibility at comoving frequency omega_prime:
/// chi = (2c/v_g) * (omega_prime - omega0) / omega0.
/// Valid inside the transparency window; vanishes exactly on resonance.
double susceptibility(double omega_prime, const MediumSpec& spec, double vg);

/// Doppler shift into the frame moving with the medium: omega' = omega - u*k.
/// The wavevector is frame-invariant at this order.
double doppler_shift(double omega, double k, double u);

/// 3-D form: omega' = omega - dot(u, k).
double doppler_shift(double omega, const Eigen::Vector3d& k,
                     const Eigen::Vector3d& u);

/// True when omega_prime lies strictly inside the transparency window
/// |omega' - omega0| < epsilon * (v_g/c) * omega0.
bool in_window(double omega_prime, const MediumSpec& spec, double vg);

/// Window half-width epsilon * (v_g/c) * omega0 [rad/s].
double window_half_width(const MediumSpec& spec, double vg);

}  // namespace slowlight
