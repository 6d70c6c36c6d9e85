#pragma once

#include <vector>

namespace ntw {

/// Interpolating cubic spline with zero second derivative at both ends.
/// The curve is C2 across interior knots.
class NaturalCubicSpline {
 public:
  /// Requires at least two knots with strictly increasing abscissae.
  NaturalCubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;

  const std::vector<double>& knots_x() const { return x_; }
  const std::vector<double>& knots_y() const { return y_; }

 private:
  std::size_t interval(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> curvature_;  // second derivative at each knot
};

}  // namespace ntw
