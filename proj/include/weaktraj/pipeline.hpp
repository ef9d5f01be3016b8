#pragma once
#include <filesystem>
#include <string>
#include <vector>

#include "weaktraj/config.hpp"
#include "weaktraj/csv.hpp"
#include "weaktraj/metrics.hpp"

namespace weaktraj {

/// In-memory stages ---------------------------------------------------------

/// Noise-free ground-truth densities on the config grid, one per z plane.
std::vector<DensityCurve> true_densities(const RunConfig& config);

/// Forward-modeled CCD frames, Poisson noise applied when the photon budget
/// is positive. Per-frame RNG seeds are rng_seed ^ plane_index, so frames
/// are reproducible under any parallel schedule.
std::vector<PixelImage> synthesize_frames(const RunConfig& config);

/// CDF-transport Bohm ensemble on the noiseless densities (the dataset's
/// ground truth).
TrajectoryEnsemble ground_truth_ensemble(const RunConfig& config);

struct ReconstructionResult {
  TrajectoryEnsemble ensemble;
  QuantileSeeds seeds;
  std::vector<DensityCurve> measured_densities;  // summed channel per plane
  std::vector<SlopeCurve> slopes;
  std::vector<double> bandwidths_mm;  // per plane (KDE mode only)
  ReconstructionDiagnostics integration;
  std::size_t clamped_samples = 0;
  std::size_t masked_samples = 0;
};

/// Full measurement-side pipeline: background subtraction, normalization,
/// per-channel smoothing, momentum inversion, slope conversion, Euler
/// integration. Honors every switch in config.mode.
ReconstructionResult reconstruct_frames(const RunConfig& config,
                                        const std::vector<PixelImage>& frames);

/// Reference ensemble the reconstruction is compared against: the supplied
/// ground truth under the corrected Bohm update, or the legacy-cdfx
/// regeneration (coupled to the photon ensemble through the measured data)
/// when config.mode.bohm_interp is legacy_cdfx.
TrajectoryEnsemble reference_ensemble(const RunConfig& config, const ReconstructionResult& recon,
                                      const TrajectoryEnsemble& ground_truth);

/// Disk stages ---------------------------------------------------------------

struct StageResult {
  std::filesystem::path out_dir;
  std::vector<std::filesystem::path> files;
};

/// Writes frame_###.csv per plane, the ground-truth ensemble bohm_cdf.csv,
/// and manifest.json.
StageResult run_synthesize(const RunConfig& config, const std::filesystem::path& out_dir);

/// Reads frames from frames_dir, runs the mode's measurement pipeline and
/// writes recon_ensemble.csv, recon_density_final.csv and, when ground
/// truth is available, report.json + per_pair_r.csv (byte-identical to what
/// run_compare produces from the persisted artifacts).
StageResult run_reconstruct(const RunConfig& config, const std::filesystem::path& frames_dir,
                            const std::filesystem::path& out_dir, bool force = false);

/// Generates a Bohm ensemble by "cdf", "phase", or "cvt" and writes
/// bohm_<method>.csv.
StageResult run_bohm(const RunConfig& config, const std::string& method,
                     const std::filesystem::path& out_dir);

/// Compares two persisted ensembles against a density and writes
/// report.json, per_pair_r.csv, overlay.csv and final_panel.csv.
StageResult run_compare(const std::filesystem::path& ensemble_a,
                        const std::filesystem::path& ensemble_b,
                        const std::filesystem::path& density,
                        const std::filesystem::path& out_dir,
                        CongregationMethod method = CongregationMethod::ks, bool force = false);

/// Human-readable summary of one or more report.json files.
std::string report_summary(const std::vector<std::filesystem::path>& report_paths);

}  // namespace weaktraj
