#pragma once

#include <stdexcept>
#include <string>

namespace slowlight {

/// Requested (delta, u) lies where the discriminant is negative: no real
/// wavevector exists and the pulse cannot propagate.
struct EvanescentRegion : std::domain_error {
  using std::domain_error::domain_error;
};

/// turning_flow_speed called with u0 < v_g/2: no flow value can turn the pulse.
struct NoTurningPoint : std::domain_error {
  using std::domain_error::domain_error;
};

/// Profile evaluated outside its configured z domain.
struct ProfileDomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Ray launched where the local dispersion relation has no propagating root.
struct EvanescentLaunch : std::domain_error {
  using std::domain_error::domain_error;
};

/// Ray launch state is not on the dispersion shell for the supplied frequency.
struct OffShellLaunch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// semiclassical_phase called on a trajectory without exactly one turning
/// event or that never returns to the launch position.
struct PhasePrecondition : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Adaptive integrator could not reach the requested tolerance (step size
/// collapsed) or a non-finite state appeared.
struct IntegrationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Config file rejected: syntax, unknown key, missing/wrong unit, or a value
/// out of range. what() carries the line number where applicable.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Root bracketing or iteration failed in a numerics helper.
struct RootFindingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace slowlight
