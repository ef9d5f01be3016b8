#pragma once
#include <cstdint>
#include <vector>

#include "weaktraj/density.hpp"

namespace weaktraj {

/// Transverse momentum ratio k_x/|k| sampled along x at one plane.
/// Masked samples carry no usable value and are excluded from interpolation;
/// clamped samples were limited to the open (-1,1) ratio interval after noise.
struct KxkCurve {
  double z_m = 0.0;
  std::vector<double> x_mm;
  std::vector<double> value;
  std::vector<std::uint8_t> masked;
  std::vector<std::uint8_t> clamped;

  std::size_t size() const { return x_mm.size(); }
  std::size_t masked_count() const;
  std::size_t clamped_count() const;
};

/// Trajectory slope dx/dz sampled along x; same layout as KxkCurve.
struct SlopeCurve {
  double z_m = 0.0;
  std::vector<double> x_mm;
  std::vector<double> value;
  std::vector<std::uint8_t> masked;
  std::vector<std::uint8_t> clamped;

  std::size_t size() const { return x_mm.size(); }
  std::size_t masked_count() const;
};

struct CouplingConstant {
  double zeta = 373.5;  ///< reference calibration value

  void validate() const {
    if (!(zeta > 0.0)) throw ValidationError("coupling: zeta must be > 0");
  }
};

enum class MomentumMode { corrected, legacy_tan };
enum class SlopeMode { corrected, legacy_direct };

/// Fraction of the frame's peak summed intensity below which a sample is
/// shot-noise dominated and gets masked.
inline constexpr double kLowIntensityMaskFraction = 1e-3;

/// Inverts the polarization intensity asymmetry into k_x/|k|.
/// corrected:   v = asin((I_R-I_L)/(I_R+I_L)) / zeta
/// legacy_tan:  v = tan(asin((I_R-I_L)/(I_R+I_L))) / zeta, the original
///              analysis chain's extra tangent.
/// Ratios pushed outside (-1,1) by noise are clamped to +-(1-1e-12) and
/// flagged; samples with I_R+I_L below the mask fraction are masked.
KxkCurve infer_kx_over_k(const DensityCurve& intensity_r, const DensityCurve& intensity_l,
                         CouplingConstant zeta, MomentumMode mode);

/// Converts k_x/|k| into the trajectory slope dx/dz.
/// corrected:     slope = v / sqrt(1 - v^2)   (the |k|/k_z factor)
/// legacy_direct: slope = v                   (factor missing)
/// |v| >= 1 is grazing propagation and masks the sample in corrected mode.
SlopeCurve slope_from_kxk(const KxkCurve& kxk, SlopeMode mode);

}  // namespace weaktraj
