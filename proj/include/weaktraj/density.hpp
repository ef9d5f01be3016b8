#pragma once
#include <cstddef>
#include <span>
#include <vector>

#include "weaktraj/grid.hpp"

namespace weaktraj {

/// Probability density sampled on a uniform grid, in 1/mm.
struct DensityCurve {
  double z_m = 0.0;
  Grid grid;
  std::vector<double> values;

  /// Checks the normalized-density invariants (nonnegative values,
  /// unit trapezoid integral to 1e-9 relative).
  void validate() const;
};

double trapezoid(std::span<const double> y, double dx);
double trapezoid(std::span<const double> y, std::span<const double> x);

/// Cumulative distribution of a piecewise-linear density. Within each grid
/// cell the mass is quadratic in x, so evaluation and inversion are exact
/// for the sampled density.
class DensityCdf {
public:
  explicit DensityCdf(const DensityCurve& density);
  DensityCdf(std::vector<double> x, std::vector<double> rho);

  /// CDF value in [0,1] at position x (clamped outside the grid).
  double operator()(double x_mm) const;

  /// Position of quantile q in (0,1).
  double quantile(double q) const;

  double total_mass() const { return total_; }

private:
  std::vector<double> x_;
  std::vector<double> rho_;
  std::vector<double> cum_;  // mass up to node i, cum_[0] = 0
  double total_ = 0.0;
};

}  // namespace weaktraj
