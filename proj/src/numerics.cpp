#include "slowlight/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "slowlight/errors.hpp"

namespace slowlight {

double brent_root(const std::function<double(double)>& f, double a, double b,
                  double xtol, double rtol, int max_iter) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::signbit(fa) == std::signbit(fb))
    throw RootFindingError("brent_root: interval does not bracket a root");

  double c = a, fc = fa, d = b - a, e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b)
                       + 0.5 * (xtol + rtol * std::abs(b));
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;

    if (std::abs(e) < tol || std::abs(fa) <= std::abs(fb)) {
      d = m; e = m;  // bisection
    } else {
      double p, q;
      const double s = fb / fa;
      if (a == c) {  // secant
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {  // inverse quadratic
        const double qa = fa / fc, r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d; d = p / q;
      } else {
        d = m; e = m;
      }
    }
    a = b; fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a; fc = fa; d = b - a; e = d;
    }
  }
  throw RootFindingError("brent_root: iteration budget exhausted");
}

double bracketed_root(const std::function<double(double)>& f, double x0,
                      double width0, double xtol, double rtol, int max_expand) {
  double w = width0;
  for (int i = 0; i < max_expand; ++i, w *= 2.0) {
    const double a = x0 - w, b = x0 + w;
    const double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (std::signbit(fa) != std::signbit(fb))
      return brent_root(f, a, b, xtol, rtol);
  }
  throw RootFindingError("bracketed_root: no sign change found");
}

template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> solve_tridiagonal(
    const Eigen::Vector<Scalar, Eigen::Dynamic>& lower,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& diag,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& upper,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& rhs) {
  const Eigen::Index n = diag.size();
  Eigen::Vector<Scalar, Eigen::Dynamic> c(n), x(n);
  Scalar pivot = diag[0];
  c[0] = upper[0] / pivot;
  x[0] = rhs[0] / pivot;
  for (Eigen::Index i = 1; i < n; ++i) {
    pivot = diag[i] - lower[i] * c[i - 1];
    c[i] = (i + 1 < n) ? upper[i] / pivot : Scalar(0);
    x[i] = (rhs[i] - lower[i] * x[i - 1]) / pivot;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) x[i] -= c[i] * x[i + 1];
  return x;
}

template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> solve_tridiagonal_cyclic(
    const Eigen::Vector<Scalar, Eigen::Dynamic>& lower,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& diag,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& upper, Scalar corner_lower,
    Scalar corner_upper, const Eigen::Vector<Scalar, Eigen::Dynamic>& rhs) {
  const Eigen::Index n = diag.size();
  // Sherman-Morrison: write A = T + gamma e0 e0^T-like rank-1 update that
  // absorbs the wrap entries, solve T against rhs and the update vector.
  const Scalar gamma = -diag[0];
  Eigen::Vector<Scalar, Eigen::Dynamic> d = diag;
  d[0] -= gamma;
  d[n - 1] -= corner_lower * corner_upper / gamma;
  Eigen::Vector<Scalar, Eigen::Dynamic> u =
      Eigen::Vector<Scalar, Eigen::Dynamic>::Zero(n);
  u[0] = gamma;
  u[n - 1] = corner_upper;
  const auto x = solve_tridiagonal<Scalar>(lower, d, upper, rhs);
  const auto q = solve_tridiagonal<Scalar>(lower, d, upper, u);
  const Scalar factor =
      (x[0] + corner_lower * x[n - 1] / gamma) /
      (Scalar(1) + q[0] + corner_lower * q[n - 1] / gamma);
  return x - factor * q;
}

template Eigen::VectorXd solve_tridiagonal<double>(const Eigen::VectorXd&,
                                                   const Eigen::VectorXd&,
                                                   const Eigen::VectorXd&,
                                                   const Eigen::VectorXd&);
template Eigen::VectorXcd solve_tridiagonal<std::complex<double>>(
    const Eigen::VectorXcd&, const Eigen::VectorXcd&, const Eigen::VectorXcd&,
    const Eigen::VectorXcd&);
template Eigen::VectorXd solve_tridiagonal_cyclic<double>(
    const Eigen::VectorXd&, const Eigen::VectorXd&, const Eigen::VectorXd&,
    double, double, const Eigen::VectorXd&);
template Eigen::VectorXcd solve_tridiagonal_cyclic<std::complex<double>>(
    const Eigen::VectorXcd&, const Eigen::VectorXcd&, const Eigen::VectorXcd&,
    std::complex<double>, std::complex<double>, const Eigen::VectorXcd&);

CubicSpline::CubicSpline(Eigen::ArrayXd x, Eigen::ArrayXd y)
    : x_(std::move(x)), y_(std::move(y)) {
  const Eigen::Index n = x_.size();
  if (n < 2 || y_.size() != n)
    throw std::invalid_argument("CubicSpline: need >= 2 matching nodes");
  for (Eigen::Index i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1]))
      throw std::invalid_argument("CubicSpline: nodes must strictly increase");

  m_ = Eigen::ArrayXd::Zero(n);
  if (n > 2) {
    // Natural spline: tridiagonal system for interior second derivatives.
    const Eigen::Index m = n - 2;
    Eigen::VectorXd lower(m), diag(m), upper(m), rhs(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double h0 = x_[i + 1] - x_[i];
      const double h1 = x_[i + 2] - x_[i + 1];
      lower[i] = h0;
      diag[i] = 2.0 * (h0 + h1);
      upper[i] = h1;
      rhs[i] = 6.0 * ((y_[i + 2] - y_[i + 1]) / h1 - (y_[i + 1] - y_[i]) / h0);
    }
    const Eigen::VectorXd sol = solve_tridiagonal<double>(lower, diag, upper, rhs);
    m_.segment(1, m) = sol.array();
  }
}

int CubicSpline::segment(double x) const {
  const double* begin = x_.data();
  const double* end = begin + x_.size();
  const double* it = std::upper_bound(begin, end, x);
  Eigen::Index i = it - begin;
  i = std::clamp<Eigen::Index>(i - 1, 0, x_.size() - 2);
  return static_cast<int>(i);
}

double CubicSpline::operator()(double x) const {
  const int i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
  const int i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
  return (y_[i + 1] - y_[i]) / h +
         ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
}

}  // namespace slowlight
