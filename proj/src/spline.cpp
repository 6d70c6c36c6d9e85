#include "ntw/spline.hpp"

#include <algorithm>
#include <stdexcept>

namespace ntw {

NaturalCubicSpline::NaturalCubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) {
    throw std::invalid_argument("spline needs at least two knots with matching values");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("spline knots must increase strictly");
  }

  // Tridiagonal system for interior curvatures, solved by forward elimination
  // and back substitution. End curvatures stay zero.
  curvature_.assign(n, 0.0);
  if (n == 2) return;
  const std::size_t interior = n - 2;
  std::vector<double> diag(interior), upper(interior), rhs(interior);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    diag[i - 1] = 2.0 * (h0 + h1);
    upper[i - 1] = h1;
    rhs[i - 1] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
  }
  for (std::size_t i = 1; i < interior; ++i) {
    const double lower = x_[i + 1] - x_[i];  // sub-diagonal equals h of the previous row
    const double factor = lower / diag[i - 1];
    diag[i] -= factor * upper[i - 1];
    rhs[i] -= factor * rhs[i - 1];
  }
  curvature_[interior] = rhs[interior - 1] / diag[interior - 1];
  for (std::size_t i = interior - 1; i-- > 0;) {
    curvature_[i + 1] = (rhs[i] - upper[i] * curvature_[i + 2]) / diag[i];
  }
}

std::size_t NaturalCubicSpline::interval(double x) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

double NaturalCubicSpline::operator()(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double s = 1.0 - t;
  return s * y_[i] + t * y_[i + 1] +
         h * h / 6.0 *
             ((s * s * s - s) * curvature_[i] + (t * t * t - t) * curvature_[i + 1]);
}

double NaturalCubicSpline::derivative(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double s = 1.0 - t;
  return (y_[i + 1] - y_[i]) / h +
         h / 6.0 * ((1.0 - 3.0 * s * s) * curvature_[i] + (3.0 * t * t - 1.0) * curvature_[i + 1]);
}

double NaturalCubicSpline::second_derivative(double x) const {
  const std::size_t i = interval(x);
  const double t = (x - x_[i]) / (x_[i + 1] - x_[i]);
  return (1.0 - t) * curvature_[i] + t * curvature_[i + 1];
}

}  // namespace ntw
