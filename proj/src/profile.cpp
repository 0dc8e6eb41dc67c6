#include "slowlight/profile.hpp"

#include <cmath>
#include <sstream>

#include "slowlight/errors.hpp"

namespace slowlight {

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::uniform: return "uniform";
    case ProfileKind::step: return "step";
    case ProfileKind::tanh_ramp: return "tanh_ramp";
    case ProfileKind::linear_ramp: return "linear_ramp";
    case ProfileKind::table: return "table";
  }
  return "uniform";
}

ProfileKind profile_kind_from_string(const std::string& name) {
  if (name == "uniform") return ProfileKind::uniform;
  if (name == "step") return ProfileKind::step;
  if (name == "tanh_ramp") return ProfileKind::tanh_ramp;
  if (name == "linear_ramp") return ProfileKind::linear_ramp;
  if (name == "table") return ProfileKind::table;
  throw std::invalid_argument("unknown profile kind '" + name + "'");
}

Profile::Profile(ProfileSpec spec) : spec_(std::move(spec)) {
  switch (spec_.kind) {
    case ProfileKind::step:
    case ProfileKind::tanh_ramp:
    case ProfileKind::linear_ramp:
      if (!(spec_.width > 0.0))
        throw std::invalid_argument("Profile: transition width must be > 0");
      break;
    case ProfileKind::table: {
      if (spec_.table_z.size() != spec_.table_value.size() ||
          spec_.table_z.size() < 2)
        throw std::invalid_argument("Profile: table needs >= 2 (z, value) pairs");
      Eigen::ArrayXd z = Eigen::Map<const Eigen::ArrayXd>(
          spec_.table_z.data(), static_cast<Eigen::Index>(spec_.table_z.size()));
      Eigen::ArrayXd v = Eigen::Map<const Eigen::ArrayXd>(
          spec_.table_value.data(),
          static_cast<Eigen::Index>(spec_.table_value.size()));
      spline_ = CubicSpline(z, v);
      spec_.domain_min = std::max(spec_.domain_min, spline_.x_min());
      spec_.domain_max = std::min(spec_.domain_max, spline_.x_max());
      break;
    }
    case ProfileKind::uniform:
      break;
  }
}

Profile Profile::uniform(double value) {
  ProfileSpec s;
  s.kind = ProfileKind::uniform;
  s.value = value;
  return Profile(s);
}

Profile Profile::step(double left, double right, double center, double smoothing) {
  ProfileSpec s;
  s.kind = ProfileKind::step;
  s.left = left;
  s.right = right;
  s.center = center;
  s.width = smoothing;
  return Profile(s);
}

Profile Profile::tanh_ramp(double left, double right, double center, double width) {
  ProfileSpec s;
  s.kind = ProfileKind::tanh_ramp;
  s.left = left;
  s.right = right;
  s.center = center;
  s.width = width;
  return Profile(s);
}

Profile Profile::linear_ramp(double left, double right, double center, double width) {
  ProfileSpec s;
  s.kind = ProfileKind::linear_ramp;
  s.left = left;
  s.right = right;
  s.center = center;
  s.width = width;
  return Profile(s);
}

Profile Profile::table(const std::vector<double>& z,
                       const std::vector<double>& value) {
  ProfileSpec s;
  s.kind = ProfileKind::table;
  s.table_z = z;
  s.table_value = value;
  return Profile(s);
}

void Profile::check_domain(double z) const {
  if (z < spec_.domain_min || z > spec_.domain_max) {
    std::ostringstream msg;
    msg << "profile evaluated at z = " << z << " outside domain ["
        << spec_.domain_min << ", " << spec_.domain_max << "]";
    throw ProfileDomainError(msg.str());
  }
}

namespace {
// Unit sigmoid (1 + tanh(x)) / 2 and its derivative.
double sigmoid(double x) { return 0.5 * (1.0 + std::tanh(x)); }
double sigmoid_deriv(double x) {
  const double t = std::tanh(x);
  return 0.5 * (1.0 - t * t);
}
}  // namespace

double Profile::eval_unchecked(double z) const {
  switch (spec_.kind) {
    case ProfileKind::uniform:
      return spec_.value;
    case ProfileKind::step:
    case ProfileKind::tanh_ramp:
      return spec_.left +
             (spec_.right - spec_.left) * sigmoid((z - spec_.center) / spec_.width);
    case ProfileKind::linear_ramp: {
      const double lo = spec_.center - 0.5 * spec_.width;
      const double hi = spec_.center + 0.5 * spec_.width;
      if (z <= lo) return spec_.left;
      if (z >= hi) return spec_.right;
      return spec_.left + (spec_.right - spec_.left) * (z - lo) / spec_.width;
    }
    case ProfileKind::table:
      return spline_(z);
  }
  return spec_.value;
}

double Profile::derivative_unchecked(double z) const {
  switch (spec_.kind) {
    case ProfileKind::uniform:
      return 0.0;
    case ProfileKind::step:
    case ProfileKind::tanh_ramp:
      return (spec_.right - spec_.left) *
             sigmoid_deriv((z - spec_.center) / spec_.width) / spec_.width;
    case ProfileKind::linear_ramp: {
      const double lo = spec_.center - 0.5 * spec_.width;
      const double hi = spec_.center + 0.5 * spec_.width;
      if (z <= lo || z >= hi) return 0.0;
      return (spec_.right - spec_.left) / spec_.width;
    }
    case ProfileKind::table:
      return spline_.derivative(z);
  }
  return 0.0;
}

double Profile::operator()(double z) const {
  check_domain(z);
  return eval_unchecked(z);
}

double Profile::derivative(double z) const {
  check_domain(z);
  return derivative_unchecked(z);
}

Eigen::ArrayXd Profile::operator()(const Eigen::ArrayXd& z) const {
  Eigen::ArrayXd out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) out[i] = (*this)(z[i]);
  return out;
}

}  // namespace slowlight
