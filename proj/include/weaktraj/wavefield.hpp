#pragma once
#include <complex>
#include <vector>

#include "weaktraj/density.hpp"
#include "weaktraj/grid.hpp"
#include "weaktraj/weak_momentum.hpp"

namespace weaktraj {

/// Two-slit source: Gaussian apertures of half-width sigma centered at
/// +-separation/2, superposed with a relative amplitude and phase.
/// amplitude_ratio == 0 degenerates to a single centered Gaussian.
struct SlitConfig {
  double slit_sigma_mm = 0.3;
  double slit_separation_mm = 4.7;
  double wavelength_nm = 943.0;
  double amplitude_ratio = 1.0;
  double relative_phase_rad = 0.0;

  double half_separation_mm() const {
    return amplitude_ratio == 0.0 ? 0.0 : 0.5 * slit_separation_mm;
  }
  /// Wavenumber in rad/mm.
  double k_per_mm() const;
  /// Rayleigh-like range 2*k*sigma^2 in mm (sigma is the intensity width).
  double rayleigh_mm() const;
  /// Intensity width of one propagated slit beam at z, in mm.
  double beam_sigma_mm(double z_m) const;
  /// Width of the full two-slit envelope sqrt(a^2 + sigma(z)^2), in mm.
  double envelope_sigma_mm(double z_m) const;

  void validate() const;
};

/// Complex transverse field at one propagation distance.
struct FieldSlice {
  double z_m = 0.0;
  Grid grid;
  std::vector<std::complex<double>> amplitude;
};

/// Builds the normalized two-slit superposition at z = 0.
/// Throws ValidationError when the grid truncates more than 1e-6 of the mass.
FieldSlice make_two_slit_field(const SlitConfig& cfg, const Grid& grid);

/// Closed-form paraxial propagation of the two-Gaussian superposition,
/// normalized to unit trapezoid integral of |psi|^2 on the grid.
FieldSlice propagate_analytic(const SlitConfig& cfg, const Grid& grid, double z_m);

/// Angular-spectrum step by dz: multiply the transform by
/// exp(-i k_x^2 dz / (2k)). Throws NumericError when boundary intensity
/// exceeds 1e-8 of the peak (aliasing risk).
FieldSlice propagate_spectral(const FieldSlice& field, double dz_m, const SlitConfig& cfg);

/// |psi|^2 renormalized to a unit-integral density curve.
DensityCurve intensity(const FieldSlice& field);

/// k_x/|k| = Im(psi* psi') / (k |psi|^2), central differences with
/// second-order one-sided stencils at the boundary. Samples where the
/// density is below 1e-12 of the peak are masked (nodes).
KxkCurve phase_gradient_slope(const FieldSlice& field, const SlitConfig& cfg);

}  // namespace weaktraj
