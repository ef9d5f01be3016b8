#pragma once
#include <vector>

#include "weaktraj/density.hpp"
#include "weaktraj/grid.hpp"

namespace weaktraj {

/// Pixel-binned data: each position carries its count as a weight.
struct WeightedSamples {
  std::vector<double> positions_mm;
  std::vector<double> weights;

  double total_weight() const;
  /// Kish effective sample size (sum w)^2 / sum w^2.
  double effective_count() const;
  /// Weighted mean position.
  double mean() const;
  /// Weighted (population) standard deviation.
  double stddev() const;

  void validate() const;
};

struct Bandwidth {
  double h_mm = 0.0;
};

/// Silverman's rule h = 1.06 * sigma_hat * n^(-1/5) with the weighted
/// standard deviation and the effective sample size for weighted data.
/// Degenerate spreads (sigma_hat == 0 or n_eff <= 1) raise DataError.
Bandwidth silverman_bandwidth(const WeightedSamples& samples);

/// Gaussian kernel density estimate evaluated on eval_grid and renormalized
/// to unit trapezoid integral.
DensityCurve kde_estimate(const WeightedSamples& samples, Bandwidth h, const Grid& eval_grid,
                          double z_m = 0.0);

/// Natural cubic spline through (position, weight), clamped at zero and
/// renormalized. The baseline fit the weak-measurement analysis started
/// from; jagged under noise.
DensityCurve spline_fit(const WeightedSamples& samples, const Grid& eval_grid, double z_m = 0.0);

}  // namespace weaktraj
