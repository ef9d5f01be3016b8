#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "weaktraj/density.hpp"
#include "weaktraj/weak_momentum.hpp"

namespace weaktraj {

/// Simulated CCD frame: per-pixel counts for the right/left circular
/// polarization channels at one z plane. Pixel centers are real transverse
/// positions after magnification, uniformly spaced by pitch * magnification.
struct PixelImage {
  double z_m = 0.0;
  double pixel_pitch_um = 26.0;
  double magnification = 1.0;
  std::vector<double> pixel_centers_mm;
  std::vector<double> counts_r;
  std::vector<double> counts_l;
  std::string rng_id = "none";

  std::size_t size() const { return pixel_centers_mm.size(); }
  double pixel_spacing_mm() const { return pixel_pitch_um * 1e-3 * magnification; }
  void validate() const;
};

struct NoiseConfig {
  double photon_budget = 0.0;     ///< expected total counts per frame; 0 disables noise
  double background_level = 0.0;  ///< expected counts per pixel
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (background_level < 0.0) throw ValidationError("noise: background must be >= 0");
    if (photon_budget < 0.0) throw ValidationError("noise: photon budget must be >= 0");
  }
};

enum class Channel { right, left, sum };

/// Exact (noise-free) forward model of the weak measurement: per pixel,
/// counts_r + counts_l equals the density mass over the pixel extent and
/// (counts_r - counts_l)/(counts_r + counts_l) = sin(zeta * kxk) at the
/// pixel center. n_pixels == 0 derives the pixel count from the grid span.
/// Throws ValidationError when zeta * max |kxk| reaches pi/2 (arcsin branch).
PixelImage project_to_pixels(const DensityCurve& density, const KxkCurve& aux_kxk,
                             double pitch_um, double magnification, CouplingConstant zeta,
                             std::size_t n_pixels = 0);

/// Replaces each channel count by a Poisson draw with mean
/// photon_budget * count + background_level. Deterministic under the seed.
PixelImage add_noise(const PixelImage& img, const NoiseConfig& noise);

/// counts' = max(counts - estimate, 0), per pixel per channel.
PixelImage subtract_background(const PixelImage& img, double background_estimate);

/// Corrected normalization: divide by the trapezoid integral of the counts
/// over the magnified pixel positions, giving a unit-integral density.
DensityCurve normalize_magnified(const PixelImage& img, Channel channel);

/// Legacy normalization (the original analysis code): divide by the plain
/// sum of counts, ignoring pixel size. Sums to one but does not integrate
/// to one; not a valid DensityCurve unless the spacing is exactly 1 mm.
DensityCurve normalize_legacy(const PixelImage& img, Channel channel);

}  // namespace weaktraj
