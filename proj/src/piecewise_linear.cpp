#include "motbound/piecewise_linear.hpp"

#include <algorithm>
#include <cmath>

#include "motbound/error.hpp"

namespace motbound {

PiecewiseLinear::PiecewiseLinear(std::vector<double> knots, std::vector<double> values,
                                 double left_slope, double right_slope)
    : knots_(std::move(knots)),
      values_(std::move(values)),
      left_slope_(left_slope),
      right_slope_(right_slope) {
  if (knots_.size() != values_.size() || knots_.empty()) {
    throw Error(ErrorKind::invalid_input, "piecewise-linear function needs matching knots/values");
  }
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i]) || !std::isfinite(values_[i])) {
      throw Error(ErrorKind::invalid_input, "non-finite knot or value");
    }
    if (i > 0 && !(knots_[i] > knots_[i - 1])) {
      throw Error(ErrorKind::invalid_input, "knots must be strictly increasing");
    }
  }
  if (!std::isfinite(left_slope_) || !std::isfinite(right_slope_)) {
    throw Error(ErrorKind::invalid_input, "non-finite extrapolation slope");
  }
}

PiecewiseLinear PiecewiseLinear::continued(std::vector<double> knots, std::vector<double> values) {
  double left = 0.0;
  double right = 0.0;
  const std::size_t n = knots.size();
  if (n >= 2) {
    left = (values[1] - values[0]) / (knots[1] - knots[0]);
    right = (values[n - 1] - values[n - 2]) / (knots[n - 1] - knots[n - 2]);
  }
  return PiecewiseLinear(std::move(knots), std::move(values), left, right);
}

double PiecewiseLinear::operator()(double x) const {
  if (x <= knots_.front()) return values_.front() + left_slope_ * (x - knots_.front());
  if (x >= knots_.back()) return values_.back() + right_slope_ * (x - knots_.back());
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  std::size_t j = static_cast<std::size_t>(it - knots_.begin());
  double x0 = knots_[j - 1];
  double x1 = knots_[j];
  if (x == x0) return values_[j - 1];
  double t = (x - x0) / (x1 - x0);
  return values_[j - 1] + t * (values_[j] - values_[j - 1]);
}

PiecewiseLinear PiecewiseLinear::plus_affine(double a, double b) const {
  std::vector<double> v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += a + b * knots_[i];
  return PiecewiseLinear(knots_, std::move(v), left_slope_ + b, right_slope_ + b);
}

}  // namespace motbound
