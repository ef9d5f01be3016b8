#pragma once
#include <cstdint>
#include <random>
#include <string>

namespace weaktraj {

/// Deterministic counting RNG for frame synthesis: mt19937_64 uniforms with
/// an inversion/PTRD Poisson sampler on top. The identity string below is
/// recorded in frame metadata so outputs declare how they were drawn.
class FrameRng {
public:
  explicit FrameRng(std::uint64_t seed) : engine_(seed) {}

  static std::string generator_name() { return "mt19937_64-poisson"; }

  /// Uniform double in (0,1).
  double uniform();

  /// Poisson draw with the given mean (inversion below 10, Hormann's PTRD
  /// transformed rejection above).
  std::uint64_t poisson(double mean);

private:
  std::uint64_t poisson_inversion(double mean);
  std::uint64_t poisson_ptrd(double mean);

  std::mt19937_64 engine_;
};

}  // namespace weaktraj
