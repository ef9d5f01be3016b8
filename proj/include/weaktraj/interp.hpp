#pragma once
#include <cstddef>
#include <vector>

namespace weaktraj {

/// Shape-preserving piecewise cubic (Fritsch-Carlson). Mirrors the behavior
/// of Matlab's interp1(...,'cubic',fill): outside the knot range the
/// configured fill value is returned instead of extrapolating.
class PchipInterpolant {
public:
  PchipInterpolant(std::vector<double> x, std::vector<double> y, double fill_value = 0.0);

  double operator()(double x) const;

  std::size_t size() const { return x_.size(); }
  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

private:
  std::vector<double> x_, y_, d_;  // knots, values, endpoint-adjusted derivatives
  double fill_ = 0.0;
};

/// Natural cubic spline (second derivative zero at both ends).
class NaturalCubicSpline {
public:
  NaturalCubicSpline(std::vector<double> x, std::vector<double> y);

  /// Clamped evaluation: outside the knot range the boundary cubic is
  /// extended (callers in this toolkit always evaluate inside).
  double operator()(double x) const;

private:
  std::vector<double> x_, y_, m_;  // knots, values, second derivatives
};

}  // namespace weaktraj
