#pragma once

#include <span>
#include <vector>

namespace motbound {

/// Continuous piecewise-linear function given by values at strictly
/// increasing knots, extended beyond the outer knots with fixed slopes.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  PiecewiseLinear(std::vector<double> knots, std::vector<double> values, double left_slope,
                  double right_slope);

  // Extrapolation slopes continue the outermost segments (0 for one knot).
  static PiecewiseLinear continued(std::vector<double> knots, std::vector<double> values);

  double operator()(double x) const;

  std::span<const double> knots() const { return knots_; }
  std::span<const double> values() const { return values_; }
  double left_slope() const { return left_slope_; }
  double right_slope() const { return right_slope_; }
  bool empty() const { return knots_.empty(); }

  // f + a + b * x
  PiecewiseLinear plus_affine(double a, double b) const;

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  double left_slope_ = 0.0;
  double right_slope_ = 0.0;
};

}  // namespace motbound
