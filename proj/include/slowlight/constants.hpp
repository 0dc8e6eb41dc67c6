#pragma once

#include <stdexcept>

namespace slowlight {

/// Physical constants used throughout. c is exact by convention (3.0e8 m/s)
/// so that derived quantities like k0 = omega0/c are round numbers; hbar only
/// enters diagnostics (effective-mass report).
struct PhysicalConstants {
  double c = 3.0e8;        ///< vacuum light speed [m/s]
  double hbar = 1.0546e-34;  ///< reduced Planck constant [J*s]

  bool operator==(const PhysicalConstants&) const = default;
};

/// Slow-light medium parameters around the EIT resonance omega0.
/// The transparency window has half-width epsilon*(v_g/c)*omega0 in the
/// comoving frame; epsilon is the dimensionless window parameter.
struct MediumSpec {
  double omega0 = 3.0e15;  ///< resonance carrier frequency [rad/s]
  double epsilon = 1.0e-3; ///< window parameter (dimensionless)
  PhysicalConstants constants{};

  /// Resonant vacuum wavenumber omega0/c [1/m].
  double k0() const { return omega0 / constants.c; }

  bool operator==(const MediumSpec&) const = default;

  void validate() const {
    if (!(omega0 > 0.0)) throw std::invalid_argument("MediumSpec: omega0 must be > 0");
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
      throw std::invalid_argument("MediumSpec: epsilon must lie in (0, 1)");
    if (!(constants.c > 0.0)) throw std::invalid_argument("MediumSpec: c must be > 0");
    if (!(constants.hbar > 0.0)) throw std::invalid_argument("MediumSpec: hbar must be > 0");
  }
};

}  // namespace slowlight
