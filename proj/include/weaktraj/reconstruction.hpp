#pragma once
#include <string>
#include <vector>

#include "weaktraj/bohm.hpp"
#include "weaktraj/weak_momentum.hpp"

namespace weaktraj {

enum class SmoothingMethod { kde, spline };

/// One switch per defect of the original analysis chain: image
/// normalization, momentum inversion, the position update factor, the
/// intensity fitting method, and the Bohm-update interpolation argument.
struct PipelineMode {
  enum class Normalization { corrected, legacy } normalization = Normalization::corrected;
  MomentumMode momentum = MomentumMode::corrected;
  SlopeMode update = SlopeMode::corrected;
  SmoothingMethod smoothing = SmoothingMethod::kde;
  BohmInterp bohm_interp = BohmInterp::corrected_cdfx_wise;

  static PipelineMode all_corrected();
  static PipelineMode all_legacy();
  /// Parses "corrected", "legacy", or "custom:key=value,..." with keys
  /// normalization, momentum, update, smoothing, bohm_interp.
  static PipelineMode parse(const std::string& mode_text);
  std::string to_string() const;
};

/// Shape-preserving interpolation of the unmasked slope samples, zero
/// outside their range. Throws DataError below 4 unmasked samples.
double interpolate_slope(const SlopeCurve& slope, double x_mm);

/// Euler position update x' = x + dz * slope(x); dz in meters, x in mm.
double advance(double x_mm, double dz_m, const SlopeCurve& slope);

struct ReconstructionDiagnostics {
  std::size_t truncated = 0;        ///< trajectories that left the measured window
  std::size_t out_of_range_steps = 0;  ///< steps taken on the zero-fill region
};

/// Integrates every seed through the per-plane slope curves with Euler
/// steps (the measurement only provides slopes at the recorded planes).
/// Trajectories leaving the slope curve's window are truncated and masked.
TrajectoryEnsemble reconstruct_ensemble(const std::vector<SlopeCurve>& slopes,
                                        const QuantileSeeds& seeds,
                                        ReconstructionDiagnostics* diagnostics = nullptr);

}  // namespace weaktraj
