#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

namespace slowlight {

/// Find a root of f in [a, b] with f(a)*f(b) <= 0 by Brent's method.
/// Converges to |b-a| <= xtol + rtol*|x|. Throws RootFindingError if the
/// bracket is invalid or the iteration budget is exhausted.
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double xtol = 0.0, double rtol = 1e-15, int max_iter = 200);

/// Expand a bracket around x0 geometrically until f changes sign, then refine
/// with brent_root. width0 is the initial half-width. Throws RootFindingError
/// if no sign change is found within max_expand doublings.
double bracketed_root(const std::function<double(double)>& f, double x0,
                      double width0, double xtol = 0.0, double rtol = 1e-15,
                      int max_expand = 60);

/// Solve a tridiagonal system in place (Thomas algorithm).
/// lower/diag/upper are the three bands (lower[0] and upper[n-1] unused).
template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> solve_tridiagonal(
    const Eigen::Vector<Scalar, Eigen::Dynamic>& lower,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& diag,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& upper,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& rhs);

/// Solve a cyclic tridiagonal system (periodic wrap corner entries) via the
/// Sherman-Morrison correction on top of solve_tridiagonal.
/// corner_lower couples row 0 to column n-1; corner_upper couples row n-1 to
/// column 0.
template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> solve_tridiagonal_cyclic(
    const Eigen::Vector<Scalar, Eigen::Dynamic>& lower,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& diag,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& upper, Scalar corner_lower,
    Scalar corner_upper, const Eigen::Vector<Scalar, Eigen::Dynamic>& rhs);

/// Natural cubic spline through strictly increasing nodes.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(Eigen::ArrayXd x, Eigen::ArrayXd y);

  double operator()(double x) const;
  double derivative(double x) const;
  double x_min() const { return x_.size() ? x_[0] : 0.0; }
  double x_max() const { return x_.size() ? x_[x_.size() - 1] : 0.0; }

 private:
  int segment(double x) const;
  Eigen::ArrayXd x_, y_, m_;  // m_ holds second derivatives at the nodes
};

}  // namespace slowlight
