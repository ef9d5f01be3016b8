#include "weaktraj/weak_momentum.hpp"

#include <algorithm>
#include <cmath>

namespace weaktraj {

namespace {

std::size_t count_flags(const std::vector<std::uint8_t>& flags) {
  return std::size_t(std::count(flags.begin(), flags.end(), std::uint8_t(1)));
}

}  // namespace

std::size_t KxkCurve::masked_count() const { return count_flags(masked); }
std::size_t KxkCurve::clamped_count() const { return count_flags(clamped); }
std::size_t SlopeCurve::masked_count() const { return count_flags(masked); }

KxkCurve infer_kx_over_k(const DensityCurve& intensity_r, const DensityCurve& intensity_l,
                         CouplingConstant zeta, MomentumMode mode) {
  zeta.validate();
  if (intensity_r.grid != intensity_l.grid)
    throw DataError("infer_kx_over_k: intensity curves must share the x grid");
  if (intensity_r.z_m != intensity_l.z_m)
    throw DataError("infer_kx_over_k: intensity curves must share z");

  const std::size_t n = intensity_r.values.size();
  KxkCurve out;
  out.z_m = intensity_r.z_m;
  out.x_mm = intensity_r.grid.positions();
  out.value.assign(n, 0.0);
  out.masked.assign(n, 0);
  out.clamped.assign(n, 0);

  double peak_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    peak_sum = std::max(peak_sum, intensity_r.values[i] + intensity_l.values[i]);
  const double floor = kLowIntensityMaskFraction * peak_sum;

  constexpr double kRatioLimit = 1.0 - 1e-12;
  for (std::size_t i = 0; i < n; ++i) {
    double r = intensity_r.values[i];
    double l = intensity_l.values[i];
    double sum = r + l;
    if (!(sum > 0.0) || sum < floor) {
      out.masked[i] = 1;
      continue;
    }
    double ratio = (r - l) / sum;
    if (ratio > kRatioLimit) {
      ratio = kRatioLimit;
      out.clamped[i] = 1;
    } else if (ratio < -kRatioLimit) {
      ratio = -kRatioLimit;
      out.clamped[i] = 1;
    }
    double v;
    if (mode == MomentumMode::corrected) {
      v = std::asin(ratio) / zeta.zeta;
    } else {
      // replicates the original code's operation order: tangent on top of
      // the arcsin of the ratio, before the 1/zeta scaling
      v = std::tan(std::asin(ratio)) / zeta.zeta;
    }
    out.value[i] = v;
  }
  return out;
}

SlopeCurve slope_from_kxk(const KxkCurve& kxk, SlopeMode mode) {
  const std::size_t n = kxk.size();
  SlopeCurve out;
  out.z_m = kxk.z_m;
  out.x_mm = kxk.x_mm;
  out.value.assign(n, 0.0);
  out.masked = kxk.masked;
  out.clamped = kxk.clamped;

  for (std::size_t i = 0; i < n; ++i) {
    if (out.masked[i]) continue;
    double v = kxk.value[i];
    if (mode == SlopeMode::legacy_direct) {
      out.value[i] = v;
      continue;
    }
    if (std::abs(v) >= 1.0) {
      out.masked[i] = 1;  // grazing
      continue;
    }
    out.value[i] = v / std::sqrt(1.0 - v * v);
  }
  return out;
}

}  // namespace weaktraj
