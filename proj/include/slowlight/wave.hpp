#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "slowlight/constants.hpp"
#include "slowlight/profile.hpp"

namespace slowlight {

/// Uniform periodic grid over [z_min, z_max) with n a power of two.
struct Grid1D {
  double z_min = 0.0;
  double z_max = 1.0;
  int n = 8;

  double length() const { return z_max - z_min; }
  double dz() const { return length() / n; }
  Eigen::ArrayXd points() const;       ///< z_j = z_min + j dz
  Eigen::ArrayXd wavenumbers() const;  ///< FFT-ordered k_j = 2 pi m_j / L
  void validate() const;
};

/// Effective Schrodinger operator for the envelope in the co-rotating gauge:
///   i d(psi)/dt = [ -kappa d^2/dz^2 + W(z) - omega_ref ] psi,
/// kappa = v_g c / (2 omega0) evaluated at the launch group velocity and
/// W(z) = (omega0/2) (2 - v_g(z)/c - u(z)^2 / (v_g(z) c)).
/// omega_ref = min W keeps phases slow; mass_report = hbar omega0/(v_g c) is
/// the effective-mass diagnostic.
struct EffectiveOperator {
  Grid1D grid;
  double kappa = 0.0;        ///< [m^2/s]
  Eigen::ArrayXd W;          ///< potential on grid [rad/s]
  double omega_ref = 0.0;    ///< [rad/s]
  double mass_report = 0.0;  ///< [kg]
  double vg_launch = 0.0;    ///< group velocity defining kappa [m/s]
};

/// Build the effective operator on `grid`. kappa is frozen at the profile's
/// group velocity evaluated at vg_reference_z (typically the packet launch
/// position): the turning condition W(z_turn) = E then reproduces the
/// analytic quadratic in v_g exactly.
EffectiveOperator build_operator(const MediumProfiles& medium,
                                 const MediumSpec& spec, const Grid1D& grid,
                                 double vg_reference_z);

/// Envelope field psi on the grid at time t, normalized so that
/// sum |psi|^2 dz = 1 at creation.
struct FieldState {
  Eigen::ArrayXcd psi;
  double t = 0.0;
};

/// Gaussian packet parameters in the reduced gauge. k_carrier is the reduced
/// carrier +-k0 sqrt(D) (the optical carrier minus the gauge shift).
struct PacketSpec {
  double z_center = 0.0;
  double sigma = 1.0;      ///< intensity rms width [m]; must be >= 4 dz
  double k_carrier = 0.0;  ///< [1/m]
};

/// Normalized Gaussian envelope exp(-(z-zc)^2/(4 sigma^2) + i k z).
FieldState init_packet(const PacketSpec& packet, const Grid1D& grid);

/// Undo the gauge transformation: the optical-gauge field is
/// psi * exp(-i k0 integral u/v_g dz), accumulated by trapezoid from z_min.
/// In k-space the transform shifts the reduced carrier k_psi = s k0 sqrt(D)
/// by -k0 u/v_g, recovering the optical branch root k0 (s sqrt(D) - u/v_g).
/// The optical carrier (~1e7 1/m) is generally unresolvable on envelope
/// grids, so this is a diagnostic transform; carrier checks should compare
/// the phase gradient of psi plus the local gauge shift against the branch
/// root instead of differentiating the returned field.
Eigen::ArrayXcd gauge_to_optical(const FieldState& state,
                                 const MediumProfiles& medium,
                                 const MediumSpec& spec, const Grid1D& grid);

enum class StepperKind { split_step, crank_nicolson };
std::string to_string(StepperKind kind);
StepperKind stepper_from_string(const std::string& name);

enum class BoundaryKind { periodic, absorbing };
std::string to_string(BoundaryKind kind);
BoundaryKind boundary_from_string(const std::string& name);

/// Strang split-step Fourier stepper: half potential phase, full kinetic
/// phase in k-space, half potential phase. Unitary to roundoff; phase factors
/// and FFT plans are precomputed per (operator, dt).
class SplitStepStepper {
 public:
  SplitStepStepper(const EffectiveOperator& op, double dt);
  ~SplitStepStepper();
  SplitStepStepper(SplitStepStepper&&) noexcept;
  SplitStepStepper& operator=(SplitStepStepper&&) noexcept;

  void step(FieldState& state);
  double dt() const { return dt_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double dt_;
};

/// Crank-Nicolson stepper with 3-point periodic Laplacian and cyclic Thomas
/// solve. Unconditionally stable, unitary to roundoff.
class CrankNicolsonStepper {
 public:
  CrankNicolsonStepper(const EffectiveOperator& op, double dt);

  void step(FieldState& state);
  double dt() const { return dt_; }

 private:
  double dt_;
  Eigen::VectorXcd lower_, diag_, upper_;  // A = I + i dt/2 H
  std::complex<double> corner_;
  Eigen::VectorXcd b_lower_, b_diag_;      // B = I - i dt/2 H (same off-band)
  std::complex<double> b_off_, b_corner_;
};

/// Single-step convenience wrappers (build a stepper per call; loops should
/// hold a stepper instead).
void step_splitstep(FieldState& state, const EffectiveOperator& op, double dt);
void step_crank_nicolson(FieldState& state, const EffectiveOperator& op,
                         double dt);

/// One observable row: norm, centroid and rms width of |psi|^2, and the spectral
/// reflected / spatial transmitted fractions relative to the incident
/// direction (see observables()).
struct ObservableRow {
  double t = 0.0;
  double norm = 0.0;
  double centroid = 0.0;
  double rms_width = 0.0;
  double reflected_fraction = 0.0;
  double transmitted_fraction = 0.0;
};

struct ObservableSeries {
  std::vector<ObservableRow> rows;
  double absorbed_norm = 0.0;  ///< cumulative norm removed by the mask
};

/// Compute one observable row. incident_sign is the sign of the incident
/// group velocity (equivalently of the launch k_carrier): the reflected
/// fraction is the spectral weight with sign(k) opposite to incident_sign,
/// the transmitted fraction the spatial norm share on the far side of z_ref
/// in the incident direction. Fractions are relative to the current norm.
ObservableRow observables(const FieldState& state, const EffectiveOperator& op,
                          double z_ref, int incident_sign);

/// Time-evolution driver settings. dt <= 0 selects the default stability-
/// motivated step 0.5 / (kappa k_max^2); sample_every is the observable
/// cadence in seconds (clamped to >= dt). With absorbing boundaries a damping
/// layer of width mask_width at each domain edge applies the transmission
/// exp(-mask_rate * shape(z) * dt) per step, where shape rises cos^2-smoothly
/// from 0 at the layer's inner edge to 1 at the boundary; the removed norm is
/// tracked in ObservableSeries::absorbed_norm. Choose mask_rate of order the
/// envelope frequency 2 kappa k^2 of the waves to absorb: much larger is
/// reflective, much smaller leaks.
struct EvolveOptions {
  double dt = 0.0;
  double t_end = 0.0;
  double sample_every = 0.0;
  StepperKind stepper = StepperKind::split_step;
  BoundaryKind boundary = BoundaryKind::periodic;
  double mask_width = 0.0;
  double mask_rate = 5.0e4;  ///< peak boundary damping rate [1/s]
  double z_ref = 0.0;
  int incident_sign = -1;
  std::function<void(const FieldState&)> snapshot_sink;  ///< optional
  double snapshot_every = 0.0;  ///< seconds; 0 disables snapshots
};

/// Evolve `state` in place to t_end, recording observables on the sample
/// cadence (first and final states always included).
ObservableSeries evolve(FieldState& state, const EffectiveOperator& op,
                        const EvolveOptions& options);

/// Default stable step 0.5 / (kappa k_max^2) for the operator's grid.
double default_wave_dt(const EffectiveOperator& op);

}  // namespace slowlight
