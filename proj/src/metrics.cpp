#include "weaktraj/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace weaktraj {

std::optional<double> pearson_r(std::span<const double> a, std::span<const double> b,
                                std::size_t* dropped) {
  if (a.size() != b.size()) throw ValidationError("pearson_r: sequences must have equal length");
  std::vector<double> xs, ys;
  xs.reserve(a.size());
  ys.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::isnan(a[i]) || std::isnan(b[i])) {
      if (dropped) ++*dropped;
      continue;
    }
    xs.push_back(a[i]);
    ys.push_back(b[i]);
  }
  const std::size_t n = xs.size();
  if (n < 3) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;  // constant sequence
  return sxy / std::sqrt(sxx * syy);
}

ComparisonReport ensemble_mean_r(const TrajectoryEnsemble& recon,
                                 const TrajectoryEnsemble& reference) {
  if (recon.n_trajectories() != reference.n_trajectories())
    throw ValidationError("ensemble_mean_r: trajectory counts differ");
  if (recon.z_levels_m.size() != reference.z_levels_m.size())
    throw ValidationError("ensemble_mean_r: plane counts differ");
  for (std::size_t j = 0; j < recon.z_levels_m.size(); ++j)
    if (std::abs(recon.z_levels_m[j] - reference.z_levels_m[j]) > 1e-12)
      throw ValidationError("ensemble_mean_r: z levels differ");

  ComparisonReport rep;
  rep.pairs_total = recon.n_trajectories();
  double sum = 0.0;
  std::size_t valid = 0;
  for (std::size_t i = 0; i < recon.n_trajectories(); ++i) {
    auto r = pearson_r(recon.positions_mm[i], reference.positions_mm[i],
                       &rep.masked_points_dropped);
    if (r) {
      rep.per_pair_r.push_back(*r);
      sum += *r;
      ++valid;
    } else {
      rep.per_pair_r.push_back(std::nan(""));
      ++rep.pairs_skipped;
    }
  }
  if (valid == 0) throw DataError("ensemble_mean_r: no valid pairs");
  rep.r_avg = sum / double(valid);
  return rep;
}

double congregation_score(std::vector<double> final_positions, const DensityCurve& density,
                          CongregationMethod method, std::size_t n_bins) {
  if (final_positions.size() < 10)
    throw ValidationError("congregation_score: need at least 10 positions");
  DensityCdf cdf(density);
  std::sort(final_positions.begin(), final_positions.end());
  const double n = double(final_positions.size());

  if (method == CongregationMethod::ks) {
    double d = 0.0;
    for (std::size_t i = 0; i < final_positions.size(); ++i) {
      double f = cdf(final_positions[i]);
      d = std::max(d, std::abs(double(i + 1) / n - f));
      d = std::max(d, std::abs(f - double(i) / n));
    }
    return d;
  }

  if (n_bins < 2) throw ValidationError("congregation_score: need >= 2 bins");
  const double lo = density.grid.x_min_mm;
  const double hi = density.grid.x_max_mm;
  const double w = (hi - lo) / double(n_bins);
  double dist = 0.0;
  std::size_t below = 0, above = 0;
  for (double x : final_positions) {
    if (x < lo) ++below;
    if (x > hi) ++above;
  }
  for (std::size_t b = 0; b < n_bins; ++b) {
    double b_lo = lo + double(b) * w;
    double b_hi = b_lo + w;
    double q = cdf(b_hi) - cdf(b_lo);
    auto it_lo = std::lower_bound(final_positions.begin(), final_positions.end(), b_lo);
    auto it_hi = (b + 1 == n_bins) ? std::upper_bound(final_positions.begin(), final_positions.end(), b_hi)
                                   : std::lower_bound(final_positions.begin(), final_positions.end(), b_hi);
    double p = double(it_hi - it_lo) / n;
    dist += std::abs(p - q);
  }
  dist += double(below + above) / n;  // mass outside the density window
  return std::min(0.5 * dist, 1.0);
}

}  // namespace weaktraj
