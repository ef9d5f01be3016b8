#include "weaktraj/wavefield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "weaktraj/fft.hpp"

namespace weaktraj {

namespace {

constexpr double kTruncationLimit = 1e-6;
constexpr double kNodeMaskFraction = 1e-12;
constexpr double kBoundaryMassLimit = 1e-8;

using cplx = std::complex<double>;

double gauss_mass_inside(double center, double sigma, double lo, double hi) {
  // integral of exp(-(x-c)^2/(2 sigma^2))/(sigma sqrt(2 pi)) over [lo, hi]
  double s = sigma * std::numbers::sqrt2;
  return 0.5 * (std::erf((hi - center) / s) - std::erf((lo - center) / s));
}

/// Fraction of the analytic |psi|^2 mass of the z=0 superposition that falls
/// outside [lo, hi]. The three Gaussian terms integrate in closed form.
double truncated_mass(const SlitConfig& cfg, double lo, double hi) {
  double a = cfg.half_separation_mm();
  double s = cfg.slit_sigma_mm;
  double r = cfg.amplitude_ratio;
  double cross_scale = 2.0 * r * std::cos(cfg.relative_phase_rad) *
                       std::exp(-a * a / (2.0 * s * s));
  double total = 1.0 + r * r + cross_scale;
  double inside = gauss_mass_inside(a, s, lo, hi) + r * r * gauss_mass_inside(-a, s, lo, hi) +
                  cross_scale * gauss_mass_inside(0.0, s, lo, hi);
  return std::max(0.0, 1.0 - inside / total);
}

void normalize_field(FieldSlice& f) {
  std::vector<double> dens(f.amplitude.size());
  for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = std::norm(f.amplitude[i]);
  double I = trapezoid(dens, f.grid.dx());
  if (!(I > 0.0)) throw DataError("field: zero norm");
  double scale = 1.0 / std::sqrt(I);
  for (auto& v : f.amplitude) v *= scale;
}

}  // namespace

double SlitConfig::k_per_mm() const {
  return 2.0 * std::numbers::pi / (wavelength_nm * 1e-6);
}

double SlitConfig::rayleigh_mm() const {
  return 2.0 * k_per_mm() * slit_sigma_mm * slit_sigma_mm;
}

double SlitConfig::beam_sigma_mm(double z_m) const {
  double zr = z_m * 1000.0 / rayleigh_mm();
  return slit_sigma_mm * std::sqrt(1.0 + zr * zr);
}

double SlitConfig::envelope_sigma_mm(double z_m) const {
  double a = half_separation_mm();
  double s = beam_sigma_mm(z_m);
  return std::sqrt(a * a + s * s);
}

void SlitConfig::validate() const {
  if (!(slit_sigma_mm > 0.0)) throw ValidationError("slit: sigma must be > 0");
  if (!(wavelength_nm > 0.0)) throw ValidationError("slit: wavelength must be > 0");
  if (amplitude_ratio < 0.0) throw ValidationError("slit: amplitude_ratio must be >= 0");
  if (amplitude_ratio > 0.0) {
    if (!(slit_separation_mm > 2.0 * slit_sigma_mm))
      throw ValidationError("slit: separation must exceed 2*sigma (resolvable slits)");
  }
}

FieldSlice make_two_slit_field(const SlitConfig& cfg, const Grid& grid) {
  cfg.validate();
  grid.validate();
  if (truncated_mass(cfg, grid.x_min_mm, grid.x_max_mm) > kTruncationLimit)
    throw ValidationError("two-slit field: grid truncates more than 1e-6 of the mass");

  double a = cfg.half_separation_mm();
  double s2 = cfg.slit_sigma_mm * cfg.slit_sigma_mm;
  cplx rel = cfg.amplitude_ratio * std::polar(1.0, cfg.relative_phase_rad);

  FieldSlice f;
  f.z_m = 0.0;
  f.grid = grid;
  f.amplitude.resize(grid.n_points);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    double x = grid.x(i);
    double g1 = std::exp(-(x - a) * (x - a) / (4.0 * s2));
    double g2 = std::exp(-(x + a) * (x + a) / (4.0 * s2));
    f.amplitude[i] = cplx(g1, 0.0) + rel * g2;
  }
  normalize_field(f);
  return f;
}

FieldSlice propagate_analytic(const SlitConfig& cfg, const Grid& grid, double z_m) {
  cfg.validate();
  grid.validate();
  if (z_m < 0.0) throw ValidationError("propagate: z must be >= 0");

  double a = cfg.half_separation_mm();
  double s2 = cfg.slit_sigma_mm * cfg.slit_sigma_mm;
  double z_mm = z_m * 1000.0;
  cplx q(1.0, z_mm / cfg.rayleigh_mm());  // 1 + i z / (2 k sigma^2)
  cplx inv_sqrt_q = 1.0 / std::sqrt(q);
  cplx rel = cfg.amplitude_ratio * std::polar(1.0, cfg.relative_phase_rad);

  FieldSlice f;
  f.z_m = z_m;
  f.grid = grid;
  f.amplitude.resize(grid.n_points);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    double x = grid.x(i);
    cplx g1 = std::exp(-(x - a) * (x - a) / (4.0 * s2 * q));
    cplx g2 = std::exp(-(x + a) * (x + a) / (4.0 * s2 * q));
    f.amplitude[i] = inv_sqrt_q * (g1 + rel * g2);
  }
  normalize_field(f);
  return f;
}

FieldSlice propagate_spectral(const FieldSlice& field, double dz_m, const SlitConfig& cfg) {
  if (dz_m < 0.0) throw ValidationError("propagate_spectral: dz must be >= 0");
  const std::size_t n = field.amplitude.size();
  if (n < 2) throw DataError("propagate_spectral: empty field");

  double peak = 0.0;
  for (const auto& v : field.amplitude) peak = std::max(peak, std::norm(v));
  double edge = std::max(std::norm(field.amplitude.front()), std::norm(field.amplitude.back()));
  if (!(peak > 0.0)) throw DataError("propagate_spectral: zero field");
  if (edge > kBoundaryMassLimit * peak)
    throw NumericError("propagate_spectral: boundary intensity above 1e-8 of peak (aliasing)");

  std::vector<cplx> spec(field.amplitude.begin(), field.amplitude.end());
  fft(spec, false);
  const double k = cfg.k_per_mm();
  const double dz_mm = dz_m * 1000.0;
  auto kx = fft_freq(n, field.grid.dx());
  for (std::size_t i = 0; i < n; ++i)
    spec[i] *= std::polar(1.0, -kx[i] * kx[i] * dz_mm / (2.0 * k));
  fft(spec, true);

  FieldSlice out;
  out.z_m = field.z_m + dz_m;
  out.grid = field.grid;
  out.amplitude = std::move(spec);

  double out_peak = 0.0;
  for (const auto& v : out.amplitude) out_peak = std::max(out_peak, std::norm(v));
  double out_edge = std::max(std::norm(out.amplitude.front()), std::norm(out.amplitude.back()));
  if (out_edge > kBoundaryMassLimit * out_peak)
    throw NumericError("propagate_spectral: propagated mass reached the boundary (aliasing)");
  return out;
}

DensityCurve intensity(const FieldSlice& field) {
  DensityCurve d;
  d.z_m = field.z_m;
  d.grid = field.grid;
  d.values.resize(field.amplitude.size());
  for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] = std::norm(field.amplitude[i]);
  double I = trapezoid(d.values, d.grid.dx());
  if (!(I > 0.0)) throw DataError("intensity: all-zero field");
  for (auto& v : d.values) v /= I;
  return d;
}

KxkCurve phase_gradient_slope(const FieldSlice& field, const SlitConfig& cfg) {
  const std::size_t n = field.amplitude.size();
  if (n < 3) throw DataError("phase_gradient_slope: need >= 3 samples");
  const double dx = field.grid.dx();
  const double k = cfg.k_per_mm();

  double peak = 0.0;
  for (const auto& v : field.amplitude) peak = std::max(peak, std::norm(v));
  const double floor = kNodeMaskFraction * peak;

  KxkCurve out;
  out.z_m = field.z_m;
  out.x_mm = field.grid.positions();
  out.value.assign(n, 0.0);
  out.masked.assign(n, 0);
  out.clamped.assign(n, 0);

  auto deriv = [&](std::size_t i) -> cplx {
    if (i == 0)
      return (-3.0 * field.amplitude[0] + 4.0 * field.amplitude[1] - field.amplitude[2]) /
             (2.0 * dx);
    if (i == n - 1)
      return (3.0 * field.amplitude[n - 1] - 4.0 * field.amplitude[n - 2] +
              field.amplitude[n - 3]) /
             (2.0 * dx);
    return (field.amplitude[i + 1] - field.amplitude[i - 1]) / (2.0 * dx);
  };

  for (std::size_t i = 0; i < n; ++i) {
    double dens = std::norm(field.amplitude[i]);
    if (dens <= floor) {
      out.masked[i] = 1;
      continue;
    }
    out.value[i] = std::imag(std::conj(field.amplitude[i]) * deriv(i)) / (dens * k);
  }
  return out;
}

}  // namespace weaktraj
