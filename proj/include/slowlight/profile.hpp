#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

#include "slowlight/numerics.hpp"

namespace slowlight {

enum class ProfileKind { uniform, step, tanh_ramp, linear_ramp, table };

std::string to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& name);

/// Declarative description of a 1-D medium profile (flow u(z) or group
/// velocity v_g(z)). For step/tanh_ramp/linear_ramp, `left`/`right` are the
/// asymptotic values on the small-z/large-z sides, `center` the transition
/// midpoint and `width` its length scale (a step uses width as the smoothing
/// scale of its tanh regularization). A table profile interpolates (z, value)
/// nodes with a natural cubic spline.
struct ProfileSpec {
  ProfileKind kind = ProfileKind::uniform;
  double value = 0.0;
  double left = 0.0;
  double right = 0.0;
  double center = 0.0;
  double width = 1.0;
  std::vector<double> table_z;
  std::vector<double> table_value;
  double domain_min = -std::numeric_limits<double>::infinity();
  double domain_max = std::numeric_limits<double>::infinity();

  bool operator==(const ProfileSpec&) const = default;
};

/// Evaluable profile with an analytic derivative. Evaluation outside
/// [domain_min, domain_max] throws ProfileDomainError; table profiles clamp
/// their domain to the node span.
class Profile {
 public:
  Profile() : Profile(ProfileSpec{}) {}
  explicit Profile(ProfileSpec spec);

  static Profile uniform(double value);
  static Profile step(double left, double right, double center, double smoothing);
  static Profile tanh_ramp(double left, double right, double center, double width);
  static Profile linear_ramp(double left, double right, double center, double width);
  static Profile table(const std::vector<double>& z, const std::vector<double>& value);

  double operator()(double z) const;
  double derivative(double z) const;

  /// Vectorized evaluation (same domain checks per element).
  Eigen::ArrayXd operator()(const Eigen::ArrayXd& z) const;

  double domain_min() const { return spec_.domain_min; }
  double domain_max() const { return spec_.domain_max; }
  const ProfileSpec& spec() const { return spec_; }

 private:
  void check_domain(double z) const;
  double eval_unchecked(double z) const;
  double derivative_unchecked(double z) const;

  ProfileSpec spec_;
  CubicSpline spline_;
};

/// The pair of medium profiles every propagation layer consumes.
struct MediumProfiles {
  Profile flow;            ///< u(z) [m/s]
  Profile group_velocity;  ///< v_g(z) [m/s], must be > 0 on the domain
};

}  // namespace slowlight
