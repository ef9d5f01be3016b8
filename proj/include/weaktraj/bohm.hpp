#pragma once
#include <cmath>
#include <cstddef>
#include <vector>

#include "weaktraj/density.hpp"
#include "weaktraj/wavefield.hpp"

namespace weaktraj {

/// N trajectories sampled at shared, strictly increasing z levels.
/// Truncated trajectories carry NaN entries after their last valid plane.
struct TrajectoryEnsemble {
  std::vector<double> z_levels_m;
  std::vector<std::vector<double>> positions_mm;  // [trajectory][plane]
  std::size_t truncated_count = 0;

  std::size_t n_trajectories() const { return positions_mm.size(); }
  std::size_t n_planes() const { return z_levels_m.size(); }
  static bool is_masked(double v) { return std::isnan(v); }

  /// Final-plane positions of trajectories that reached it.
  std::vector<double> final_positions() const;
  void validate() const;
};

/// Seed positions at the first plane, pinned to CDF quantiles (i-1/2)/n.
struct QuantileSeeds {
  std::vector<double> quantiles;
  std::vector<double> positions_mm;

  std::size_t size() const { return quantiles.size(); }
  void validate() const;
};

QuantileSeeds seed_quantiles(const DensityCurve& density, std::size_t n);

/// Probability-conserving transport: trajectory i at plane j sits at the
/// quantile_i position of density_j. The corrected stepping update (each
/// Bohm trajectory advanced by the slope at its own position) is
/// algebraically this construction.
TrajectoryEnsemble cdf_transport_trajectories(const std::vector<DensityCurve>& densities,
                                              const QuantileSeeds& seeds);

enum class Integrator { midpoint, euler };

/// Integrates seeds through the Bohm velocity field of the given slices.
/// The slope field per plane comes from phase_gradient_slope with the
/// |k|/k_z correction; interpolation is shape-preserving cubic with zero
/// fill outside the sampled range. midpoint (default) evaluates the slope
/// at both bounding planes per step; euler reproduces the legacy stepping.
TrajectoryEnsemble phase_trajectories(const std::vector<FieldSlice>& fields,
                                      const SlitConfig& cfg, const QuantileSeeds& seeds,
                                      Integrator integrator = Integrator::midpoint);

enum class CvtMetric {
  mass,      ///< Lloyd in CDF-uniformized coordinates; fixed point = density quantiles
  euclidean  ///< textbook density-weighted CVT; fixed point follows the rho^(1/3) law
};

struct LloydDiagnostics {
  std::vector<std::size_t> iterations;  // per plane
  std::vector<double> final_move;       // per plane, in mm
};

inline constexpr double kLloydMoveTolFraction = 1e-10;  // of grid span
inline constexpr std::size_t kLloydMaxIterations = 10000;

/// Trajectories from successive centroidal tessellations of the density,
/// no equations of motion involved. Generators at plane j warm-start from
/// plane j-1's converged tessellation. Throws NumericError with iteration
/// diagnostics on non-convergence.
TrajectoryEnsemble cvt_trajectories(const std::vector<DensityCurve>& densities, std::size_t n,
                                    CvtMetric metric = CvtMetric::mass,
                                    LloydDiagnostics* diagnostics = nullptr);

/// One Lloyd pass over sorted generators; returns the max generator move in
/// mm. Exposed for convergence and energy tests.
double lloyd_step(const DensityCdf& cdf, const DensityCurve& density,
                  std::vector<double>& generators, CvtMetric metric);

/// Quantization energy of the current tessellation (in the metric's
/// coordinates); non-increasing under lloyd_step.
double lloyd_energy(const DensityCdf& cdf, const DensityCurve& density,
                    const std::vector<double>& generators, CvtMetric metric);

enum class BohmInterp { corrected_cdfx_wise, legacy_cdfx };

/// Stepped Bohm update: per-plane quantile positions carry the
/// probability-conserved slope; each Bohm trajectory is advanced by the
/// slope interpolated at its own position (corrected, which reproduces
/// cdf_transport) or at the paired query trajectory's position (the legacy
/// cdfx bug). query_positions[trajectory][plane].
TrajectoryEnsemble coupled_update_trajectories(const std::vector<DensityCurve>& densities,
                                               const QuantileSeeds& seeds,
                                               const std::vector<std::vector<double>>& query_positions,
                                               BohmInterp interp);

}  // namespace weaktraj
