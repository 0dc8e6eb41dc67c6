#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "slowlight/constants.hpp"
#include "slowlight/dispersion.hpp"
#include "slowlight/profile.hpp"
#include "slowlight/ray.hpp"
#include "slowlight/wave.hpp"

namespace slowlight {

enum class ScenarioName { none, figure1, figure2a, figure2b, figure3, sonar };
std::string to_string(ScenarioName name);
ScenarioName scenario_from_string(const std::string& name);

struct GridConfig {
  double z_min = 0.0;
  double z_max = 4.0e-3;
  int n = 4096;

  Grid1D grid() const { return Grid1D{z_min, z_max, n}; }
  bool operator==(const GridConfig&) const = default;
};

enum class DetuningMode { resonant, explicit_value };
std::string to_string(DetuningMode mode);
DetuningMode detuning_mode_from_string(const std::string& name);

/// Packet launch description. In resonant mode the detuning is
/// detuning_scale * s * u(center)/c resolved against the configured flow
/// profile at runtime (s = branch sign); in explicit mode `detuning` is used
/// as given.
struct PacketConfig {
  double center = 3.0e-3;
  double sigma = 1.0e-4;
  Branch branch = Branch::minus;
  DetuningMode mode = DetuningMode::resonant;
  double detuning = 0.0;
  double detuning_scale = 1.0;

  bool operator==(const PacketConfig&) const = default;
};

struct RayConfig {
  double dt = 1.0e-6;
  double rel_tol = 1.0e-10;
  bool adaptive = true;
  long max_steps = 2'000'000;
  double event_refine_tol = 1.0e-9;
  int max_turning_events = 4;
  double t_end = std::numeric_limits<double>::infinity();  ///< inf = unbounded
  double max_dt = 0.0;

  IntegratorConfig integrator() const;
  bool operator==(const RayConfig&) const = default;
};

struct WaveConfig {
  double dt = 0.0;  ///< 0 selects the stability default
  double t_end = 1.0e-4;
  double sample_every = 2.0e-6;
  StepperKind stepper = StepperKind::split_step;
  BoundaryKind boundary = BoundaryKind::periodic;
  double mask_width = 2.0e-4;
  double mask_rate = 5.0e4;  ///< peak damping rate of the boundary layer [1/s]
  double snapshot_every = 0.0;

  bool operator==(const WaveConfig&) const = default;
};

/// Query grid for the dispersion subcommand and the figure1 curve family.
struct DispersionQuery {
  double u_min = -600.0;
  double u_max = 600.0;
  int u_count = 401;
  std::vector<double> deltas{0.0};
  std::vector<Branch> branches{Branch::plus, Branch::minus};

  bool operator==(const DispersionQuery&) const = default;
};

enum class SweepAxis { flow_drop, group_velocity };
std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& name);

/// Sonar sweep settings: the perturbation amplitude axis. flow_drop sweeps
/// the tanh flow-ramp depth [m/s]; group_velocity sweeps the v_g ramp depth
/// [m/s] at fixed flow.
struct SweepConfig {
  SweepAxis axis = SweepAxis::flow_drop;
  double from = 0.0;
  double to = 2.0e-2;
  int count = 21;

  bool operator==(const SweepConfig&) const = default;
};

/// Scenario-specific extras that are not expressible through the generic
/// sections. bounce_scale multiplies the resonant detuning for the figure3
/// bounce sub-run.
struct ScenarioExtras {
  double bounce_scale = 1.00001;

  bool operator==(const ScenarioExtras&) const = default;
};

struct RunConfig {
  ScenarioName scenario = ScenarioName::none;
  std::string out_dir;
  bool check = false;
  MediumSpec medium;
  ProfileSpec flow;
  ProfileSpec group_velocity;
  GridConfig grid;
  PacketConfig packet;
  RayConfig ray;
  WaveConfig wave;
  DispersionQuery dispersion;
  SweepConfig sweep;
  ScenarioExtras extras;

  bool operator==(const RunConfig&) const = default;
};

/// Defaults for a scenario (ScenarioName::none gives the generic uniform-
/// medium defaults used by the raw dispersion/ray/wave subcommands).
RunConfig default_run_config(ScenarioName scenario);

/// Parse a config in the sectioned key = value format. The [run] scenario key
/// selects the default set; explicit keys override it. Unknown sections or
/// keys, malformed values, missing or wrong units on dimensional keys, and
/// out-of-range values all throw ConfigError with a line reference.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::filesystem::path& path);

/// Canonical serialization; parse(serialize(cfg)) == cfg.
std::string serialize_config(const RunConfig& config);

/// Scale spatial and temporal resolution together: multiplies grid.n by
/// `factor` (rounded to the nearest power of two, min 8) and divides the wave
/// dt (resolving the stability default first) and the fixed ray dt by the
/// same factor. factor must be > 0.
void apply_resolution_scale(RunConfig& config, double factor);

/// Detuning actually used at launch, resolving resonant mode against the
/// configured flow profile at the packet center.
double resolve_detuning(const RunConfig& config);

/// Build the medium profiles (domain clamped to the grid span).
MediumProfiles build_profiles(const RunConfig& config);

/// Validate cross-field constraints (grid power of two, sigma >= 4 dz,
/// profile positivity of v_g on the grid, ...). Throws ConfigError.
void validate_config(const RunConfig& config);

}  // namespace slowlight
