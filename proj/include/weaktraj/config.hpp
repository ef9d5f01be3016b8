#pragma once
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "weaktraj/grid.hpp"
#include "weaktraj/reconstruction.hpp"
#include "weaktraj/sensor.hpp"
#include "weaktraj/wavefield.hpp"
#include "weaktraj/weak_momentum.hpp"

namespace weaktraj {

struct SensorConfig {
  double pixel_pitch_um = 26.0;
  std::size_t n_pixels = 0;  ///< 0 derives the pixel count from the grid span
  std::vector<double> magnifications;  ///< one entry, or one per z plane
  NoiseConfig noise;

  double magnification_for_plane(std::size_t j) const;
};

struct RunConfig {
  int schema_version = 1;
  SlitConfig slit;
  Grid grid;
  std::vector<double> z_schedule_m;
  SensorConfig sensor;
  CouplingConstant zeta;
  PipelineMode mode;
  std::size_t n_trajectories = 80;
  std::string output_dir = "out";
  int jobs = 1;

  /// Throws ValidationError listing every violation.
  void validate() const;

  /// Hash of the dataset identity: every field that shapes the synthesized
  /// data. Pipeline mode, output_dir and jobs are excluded so artifacts of
  /// different analysis modes over one dataset can be compared directly.
  std::string dataset_hash() const;

  std::string to_json_text() const;
  static RunConfig from_json_text(const std::string& text);
  static RunConfig load(const std::filesystem::path& path);

  /// Demo defaults: a broad-separation slit pair producing many fine
  /// fringes. Good for plots; heavier smoothing regime than `standard`.
  static RunConfig defaults();
  /// The toolkit's reference dataset: narrow slits observed deep in the far
  /// field, with the sensor window tracking the envelope via per-plane
  /// magnification. All ordered-outcome acceptance checks run on this.
  static RunConfig standard();
};

}  // namespace weaktraj
