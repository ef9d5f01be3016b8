#pragma once
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "weaktraj/bohm.hpp"
#include "weaktraj/density.hpp"

namespace weaktraj {

enum class CongregationMethod { ks, l1_histogram };

/// Agreement between a reconstructed and a reference ensemble plus how well
/// final positions congregate where the density is high.
struct ComparisonReport {
  std::vector<double> per_pair_r;  // NaN marks skipped pairs
  double r_avg = 0.0;
  double congregation = 0.0;
  CongregationMethod congregation_method = CongregationMethod::ks;
  std::size_t pairs_total = 0;
  std::size_t pairs_skipped = 0;
  std::size_t masked_points_dropped = 0;
  std::string series_a;
  std::string series_b;
  // headline values published for the original (unavailable) experimental
  // dataset; context only, never asserted
  double published_baseline_r_spline = 0.53;
  double published_baseline_r_kde = 0.62;
};

/// Sample Pearson correlation over the planes where both trajectories are
/// unmasked. Empty result when fewer than 3 common planes remain or either
/// sequence is constant. dropped (optional) accumulates masked points.
std::optional<double> pearson_r(std::span<const double> a, std::span<const double> b,
                                std::size_t* dropped = nullptr);

/// Mean Pearson correlation over seed-index-paired trajectories. Skipped
/// pairs reduce the averaging set and are counted, never fabricated.
ComparisonReport ensemble_mean_r(const TrajectoryEnsemble& recon, const TrajectoryEnsemble& reference);

/// Congregation statistic of final positions against a density:
/// ks          - Kolmogorov-Smirnov distance between the empirical CDF and
///               the density CDF (0 = perfect congregation),
/// l1_histogram - half L1 distance between binned position frequencies and
///               the density's bin masses.
double congregation_score(std::vector<double> final_positions, const DensityCurve& density,
                          CongregationMethod method = CongregationMethod::ks,
                          std::size_t n_bins = 64);

}  // namespace weaktraj
