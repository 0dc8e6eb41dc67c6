#include "slowlight/wave.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "slowlight/numerics.hpp"

namespace slowlight {

using std::complex;
using namespace std::complex_literals;

Eigen::ArrayXd Grid1D::points() const {
  return z_min + dz() * Eigen::ArrayXd::LinSpaced(n, 0.0, n - 1.0);
}

Eigen::ArrayXd Grid1D::wavenumbers() const {
  const double dk = 2.0 * std::numbers::pi / length();
  Eigen::ArrayXd k(n);
  for (int j = 0; j < n; ++j) k[j] = dk * (j < n / 2 ? j : j - n);
  return k;
}

void Grid1D::validate() const {
  if (!(z_max > z_min)) throw std::invalid_argument("Grid1D: z_max must exceed z_min");
  if (n < 8 || (n & (n - 1)) != 0)
    throw std::invalid_argument("Grid1D: n must be a power of two >= 8");
}

EffectiveOperator build_operator(const MediumProfiles& medium,
                                 const MediumSpec& spec, const Grid1D& grid,
                                 double vg_reference_z) {
  grid.validate();
  const double c = spec.constants.c;
  const double vg_ref = medium.group_velocity(vg_reference_z);
  if (!(vg_ref > 0.0))
    throw std::invalid_argument("build_operator: group velocity must be > 0");

  EffectiveOperator op;
  op.grid = grid;
  op.vg_launch = vg_ref;
  op.kappa = vg_ref * c / (2.0 * spec.omega0);
  op.mass_report = spec.constants.hbar * spec.omega0 / (vg_ref * c);

  const Eigen::ArrayXd z = grid.points();
  op.W.resize(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    const double u = medium.flow(z[j]);
    const double vg = medium.group_velocity(z[j]);
    if (!(vg > 0.0))
      throw std::invalid_argument("build_operator: group velocity must be > 0 on the grid");
    op.W[j] = 0.5 * spec.omega0 * (2.0 - vg / c - u * u / (vg * c));
  }
  op.omega_ref = op.W.minCoeff();
  return op;
}

FieldState init_packet(const PacketSpec& packet, const Grid1D& grid) {
  grid.validate();
  if (!(packet.sigma >= 4.0 * grid.dz()))
    throw std::invalid_argument("init_packet: sigma must be >= 4 grid spacings");

  const Eigen::ArrayXd z = grid.points();
  FieldState state;
  state.t = 0.0;
  state.psi.resize(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    const double arg = (z[j] - packet.z_center) / (2.0 * packet.sigma);
    state.psi[j] = std::polar(std::exp(-arg * arg), packet.k_carrier * z[j]);
  }
  const double norm = std::sqrt(state.psi.abs2().sum() * grid.dz());
  state.psi /= norm;
  return state;
}

Eigen::ArrayXcd gauge_to_optical(const FieldState& state,
                                 const MediumProfiles& medium,
                                 const MediumSpec& spec, const Grid1D& grid) {
  const Eigen::ArrayXd z = grid.points();
  const double dz = grid.dz();
  Eigen::ArrayXd theta(grid.n);
  double acc = 0.0;
  double prev = medium.flow(z[0]) / medium.group_velocity(z[0]);
  theta[0] = 0.0;
  for (int j = 1; j < grid.n; ++j) {
    const double cur = medium.flow(z[j]) / medium.group_velocity(z[j]);
    acc += 0.5 * (prev + cur) * dz;
    theta[j] = acc;
    prev = cur;
  }
  const double k0 = spec.k0();
  Eigen::ArrayXcd out(grid.n);
  for (int j = 0; j < grid.n; ++j)
    out[j] = state.psi[j] * std::polar(1.0, -k0 * theta[j]);
  return out;
}

std::string to_string(StepperKind kind) {
  return kind == StepperKind::split_step ? "split_step" : "crank_nicolson";
}

StepperKind stepper_from_string(const std::string& name) {
  if (name == "split_step") return StepperKind::split_step;
  if (name == "crank_nicolson") return StepperKind::crank_nicolson;
  throw std::invalid_argument("unknown stepper '" + name + "'");
}

std::string to_string(BoundaryKind kind) {
  return kind == BoundaryKind::periodic ? "periodic" : "absorbing";
}

BoundaryKind boundary_from_string(const std::string& name) {
  if (name == "periodic") return BoundaryKind::periodic;
  if (name == "absorbing") return BoundaryKind::absorbing;
  throw std::invalid_argument("unknown boundary '" + name + "'");
}

struct SplitStepStepper::Impl {
  Eigen::FFT<double> fft;
  Eigen::VectorXcd spectrum;
  Eigen::VectorXcd work;
  Eigen::ArrayXcd kinetic_phase;
  Eigen::ArrayXcd half_potential_phase;
};

SplitStepStepper::SplitStepStepper(const EffectiveOperator& op, double dt)
    : impl_(std::make_unique<Impl>()), dt_(dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("SplitStepStepper: dt must be > 0");
  const Eigen::ArrayXd k = op.grid.wavenumbers();
  impl_->kinetic_phase.resize(k.size());
  for (Eigen::Index j = 0; j < k.size(); ++j)
    impl_->kinetic_phase[j] = std::polar(1.0, -op.kappa * k[j] * k[j] * dt);
  impl_->half_potential_phase.resize(op.W.size());
  for (Eigen::Index j = 0; j < op.W.size(); ++j)
    impl_->half_potential_phase[j] =
        std::polar(1.0, -(op.W[j] - op.omega_ref) * 0.5 * dt);
  impl_->spectrum.resize(op.grid.n);
  impl_->work.resize(op.grid.n);
}

SplitStepStepper::~SplitStepStepper() = default;
SplitStepStepper::SplitStepStepper(SplitStepStepper&&) noexcept = default;
SplitStepStepper& SplitStepStepper::operator=(SplitStepStepper&&) noexcept = default;

void SplitStepStepper::step(FieldState& state) {
  state.psi *= impl_->half_potential_phase;
  impl_->work = state.psi.matrix();
  impl_->fft.fwd(impl_->spectrum, impl_->work);
  impl_->spectrum.array() *= impl_->kinetic_phase;
  impl_->fft.inv(impl_->work, impl_->spectrum);
  state.psi = impl_->work.array() * impl_->half_potential_phase;
  state.t += dt_;
}

CrankNicolsonStepper::CrankNicolsonStepper(const EffectiveOperator& op, double dt)
    : dt_(dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("CrankNicolsonStepper: dt must be > 0");
  const int n = op.grid.n;
  const double dz = op.grid.dz();
  const double off = -op.kappa / (dz * dz);  // H off-diagonal
  const complex<double> ih = 0.5i * dt;

  lower_.resize(n);
  diag_.resize(n);
  upper_.resize(n);
  b_diag_.resize(n);
  for (int j = 0; j < n; ++j) {
    const double hd = 2.0 * op.kappa / (dz * dz) + (op.W[j] - op.omega_ref);
    diag_[j] = 1.0 + ih * hd;
    b_diag_[j] = 1.0 - ih * hd;
    lower_[j] = ih * off;
    upper_[j] = ih * off;
  }
  corner_ = ih * off;    // periodic wrap entries of A
  b_off_ = -ih * off;    // off-diagonal of B
  b_corner_ = -ih * off;
}

void CrankNicolsonStepper::step(FieldState& state) {
  const Eigen::Index n = state.psi.size();
  Eigen::VectorXcd rhs(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index jm = (j == 0) ? n - 1 : j - 1;
    const Eigen::Index jp = (j == n - 1) ? 0 : j + 1;
    const complex<double> wrap_l = (j == 0) ? b_corner_ : b_off_;
    const complex<double> wrap_u = (j == n - 1) ? b_corner_ : b_off_;
    rhs[j] = b_diag_[j] * state.psi[j] + wrap_l * state.psi[jm] +
             wrap_u * state.psi[jp];
  }
  const Eigen::VectorXcd next = solve_tridiagonal_cyclic<complex<double>>(
      lower_, diag_, upper_, corner_, corner_, rhs);
  state.psi = next.array();
  state.t += dt_;
}

void step_splitstep(FieldState& state, const EffectiveOperator& op, double dt) {
  SplitStepStepper(op, dt).step(state);
}

void step_crank_nicolson(FieldState& state, const EffectiveOperator& op,
                         double dt) {
  CrankNicolsonStepper(op, dt).step(state);
}

double default_wave_dt(const EffectiveOperator& op) {
  const double k_max = std::numbers::pi / op.grid.dz();
  return 0.5 / (op.kappa * k_max * k_max);
}

ObservableRow observables(const FieldState& state, const EffectiveOperator& op,
                          double z_ref, int incident_sign) {
  const Grid1D& grid = op.grid;
  const double dz = grid.dz();
  const Eigen::ArrayXd z = grid.points();
  const Eigen::ArrayXd density = state.psi.abs2();

  ObservableRow row;
  row.t = state.t;
  row.norm = density.sum() * dz;
  if (!(row.norm > 0.0) || !std::isfinite(row.norm))
    throw std::runtime_error("observables: field norm is not positive and finite");
  row.centroid = (z * density).sum() * dz / row.norm;
  const double var =
      ((z - row.centroid).square() * density).sum() * dz / row.norm;
  row.rms_width = std::sqrt(std::max(var, 0.0));

  Eigen::FFT<double> fft;
  Eigen::VectorXcd work = state.psi.matrix();
  Eigen::VectorXcd spectrum(work.size());
  fft.fwd(spectrum, work);
  const Eigen::ArrayXd k = grid.wavenumbers();
  double total = 0.0, opposite = 0.0;
  for (Eigen::Index j = 0; j < k.size(); ++j) {
    const double w = std::norm(spectrum[j]);
    total += w;
    if (k[j] * incident_sign < 0.0) opposite += w;
  }
  row.reflected_fraction = (total > 0.0) ? opposite / total : 0.0;

  double beyond = 0.0;
  for (Eigen::Index j = 0; j < z.size(); ++j)
    if ((z[j] - z_ref) * incident_sign > 0.0) beyond += density[j];
  row.transmitted_fraction = beyond * dz / row.norm;
  return row;
}

namespace {

/// Per-step transmission of the boundary damping layer: exp(-rate*shape*dt)
/// with shape = cos^2(pi d / (2 width)), d the distance to the nearer edge.
/// The rate form keeps the absorption dynamics independent of dt (a static
/// per-step mask would stiffen into a reflective wall as dt shrinks).
Eigen::ArrayXd absorbing_mask(const Grid1D& grid, double width, double rate,
                              double dt) {
  Eigen::ArrayXd mask = Eigen::ArrayXd::Ones(grid.n);
  if (!(width > 0.0) || !(rate > 0.0)) return mask;
  const Eigen::ArrayXd z = grid.points();
  for (int j = 0; j < grid.n; ++j) {
    const double d = std::min(z[j] - grid.z_min, grid.z_max - z[j]);
    if (d < width) {
      const double s = std::cos(0.5 * std::numbers::pi * d / width);
      mask[j] = std::exp(-rate * s * s * dt);
    }
  }
  return mask;
}

}  // namespace

ObservableSeries evolve(FieldState& state, const EffectiveOperator& op,
                        const EvolveOptions& options) {
  if (!(options.t_end > state.t))
    throw std::invalid_argument("evolve: t_end must exceed the current time");
  const double dt_req = options.dt > 0.0 ? options.dt : default_wave_dt(op);
  const double span = options.t_end - state.t;
  const long nsteps = std::max<long>(1, std::lround(std::ceil(span / dt_req - 1e-9)));
  const double dt = span / nsteps;
  const long sample_stride =
      options.sample_every > 0.0
          ? std::max<long>(1, std::lround(options.sample_every / dt))
          : 1;
  const long snapshot_stride =
      (options.snapshot_sink && options.snapshot_every > 0.0)
          ? std::max<long>(1, std::lround(options.snapshot_every / dt))
          : 0;

  std::unique_ptr<SplitStepStepper> split;
  std::unique_ptr<CrankNicolsonStepper> cn;
  if (options.stepper == StepperKind::split_step)
    split = std::make_unique<SplitStepStepper>(op, dt);
  else
    cn = std::make_unique<CrankNicolsonStepper>(op, dt);

  const bool absorbing = options.boundary == BoundaryKind::absorbing;
  Eigen::ArrayXd mask;
  if (absorbing)
    mask = absorbing_mask(op.grid, options.mask_width, options.mask_rate, dt);
  const double dz = op.grid.dz();

  ObservableSeries series;
  series.rows.push_back(
      observables(state, op, options.z_ref, options.incident_sign));
  if (snapshot_stride > 0) options.snapshot_sink(state);

  for (long i = 1; i <= nsteps; ++i) {
    if (split) split->step(state);
    else cn->step(state);
    if (absorbing) {
      const double before = state.psi.abs2().sum() * dz;
      state.psi *= mask;
      const double after = state.psi.abs2().sum() * dz;
      series.absorbed_norm += before - after;
    }
    if (i % sample_stride == 0 || i == nsteps)
      series.rows.push_back(
          observables(state, op, options.z_ref, options.incident_sign));
    if (snapshot_stride > 0 && (i % snapshot_stride == 0 || i == nsteps))
      options.snapshot_sink(state);
  }
  return series;
}

}  // namespace slowlight
