#include "weaktraj/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "weaktraj/interp.hpp"
#include "weaktraj/rng.hpp"

namespace weaktraj {

namespace {

std::vector<double> channel_counts(const PixelImage& img, Channel ch) {
  switch (ch) {
    case Channel::right:
      return img.counts_r;
    case Channel::left:
      return img.counts_l;
    case Channel::sum: {
      std::vector<double> s(img.size());
      for (std::size_t i = 0; i < s.size(); ++i) s[i] = img.counts_r[i] + img.counts_l[i];
      return s;
    }
  }
  return {};
}

DensityCurve pixel_density(const PixelImage& img, std::vector<double> values) {
  DensityCurve d;
  d.z_m = img.z_m;
  d.grid = Grid{img.pixel_centers_mm.front(), img.pixel_centers_mm.back(), img.size()};
  d.values = std::move(values);
  return d;
}

}  // namespace

void PixelImage::validate() const {
  if (pixel_centers_mm.size() < 2) throw DataError("pixel image: need >= 2 pixels");
  if (counts_r.size() != size() || counts_l.size() != size())
    throw DataError("pixel image: channel sizes do not match pixel count");
  double spacing = pixel_spacing_mm();
  for (std::size_t i = 1; i < size(); ++i) {
    double step = pixel_centers_mm[i] - pixel_centers_mm[i - 1];
    if (!(step > 0.0) || std::abs(step - spacing) > 1e-9 * spacing)
      throw DataError("pixel image: centers must increase uniformly by pitch*magnification");
  }
  for (std::size_t i = 0; i < size(); ++i)
    if (counts_r[i] < 0.0 || counts_l[i] < 0.0)
      throw DataError("pixel image: negative counts");
}

PixelImage project_to_pixels(const DensityCurve& density, const KxkCurve& aux_kxk,
                             double pitch_um, double magnification, CouplingConstant zeta,
                             std::size_t n_pixels) {
  zeta.validate();
  if (!(pitch_um > 0.0) || !(magnification > 0.0))
    throw ValidationError("project_to_pixels: pitch and magnification must be > 0");

  const double spacing = pitch_um * 1e-3 * magnification;
  const double mid = 0.5 * (density.grid.x_min_mm + density.grid.x_max_mm);
  if (n_pixels == 0)
    n_pixels = std::size_t(std::floor(density.grid.span() / spacing)) + 1;
  if (n_pixels < 2) throw ValidationError("project_to_pixels: pixel window too narrow");

  PixelImage img;
  img.z_m = density.z_m;
  img.pixel_pitch_um = pitch_um;
  img.magnification = magnification;
  img.pixel_centers_mm.resize(n_pixels);
  for (std::size_t i = 0; i < n_pixels; ++i)
    img.pixel_centers_mm[i] = mid + (double(i) - 0.5 * double(n_pixels - 1)) * spacing;

  // interpolated momentum ratio at pixel centers, zero-filled like the
  // analysis code outside the unmasked sample range
  std::vector<double> vx, vy;
  for (std::size_t i = 0; i < aux_kxk.size(); ++i) {
    if (!aux_kxk.masked[i]) {
      vx.push_back(aux_kxk.x_mm[i]);
      vy.push_back(aux_kxk.value[i]);
    }
  }
  if (vx.size() < 2) throw DataError("project_to_pixels: momentum curve fully masked");
  PchipInterpolant vfun(std::move(vx), std::move(vy), 0.0);

  DensityCdf cdf(density);
  const double total = cdf.total_mass();
  img.counts_r.resize(n_pixels);
  img.counts_l.resize(n_pixels);
  for (std::size_t i = 0; i < n_pixels; ++i) {
    double c = img.pixel_centers_mm[i];
    double mass = (cdf(c + 0.5 * spacing) - cdf(c - 0.5 * spacing)) * total;
    double v = vfun(c);
    double arg = zeta.zeta * v;
    if (std::abs(arg) >= 0.5 * std::numbers::pi)
      throw ValidationError("project_to_pixels: zeta*|kxk| reaches pi/2 (arcsin branch)");
    double asym = std::sin(arg);
    img.counts_r[i] = 0.5 * mass * (1.0 + asym);
    img.counts_l[i] = 0.5 * mass * (1.0 - asym);
  }
  return img;
}

PixelImage add_noise(const PixelImage& img, const NoiseConfig& noise) {
  noise.validate();
  PixelImage out = img;
  if (noise.photon_budget <= 0.0 && noise.background_level <= 0.0) return out;
  FrameRng rng(noise.rng_seed);
  auto draw = [&](double count) {
    double mean = noise.photon_budget * count + noise.background_level;
    return double(rng.poisson(mean));
  };
  for (std::size_t i = 0; i < out.size(); ++i) out.counts_r[i] = draw(img.counts_r[i]);
  for (std::size_t i = 0; i < out.size(); ++i) out.counts_l[i] = draw(img.counts_l[i]);
  out.rng_id = FrameRng::generator_name() + ":" + std::to_string(noise.rng_seed);
  return out;
}

PixelImage subtract_background(const PixelImage& img, double background_estimate) {
  if (background_estimate < 0.0)
    throw ValidationError("subtract_background: estimate must be >= 0");
  PixelImage out = img;
  for (auto& c : out.counts_r) c = std::max(c - background_estimate, 0.0);
  for (auto& c : out.counts_l) c = std::max(c - background_estimate, 0.0);
  return out;
}

DensityCurve normalize_magnified(const PixelImage& img, Channel channel) {
  img.validate();
  auto counts = channel_counts(img, channel);
  double I = trapezoid(counts, img.pixel_spacing_mm());
  if (!(I > 0.0)) throw DataError("normalize_magnified: zero total counts");
  for (auto& v : counts) v /= I;
  return pixel_density(img, std::move(counts));
}

DensityCurve normalize_legacy(const PixelImage& img, Channel channel) {
  img.validate();
  auto counts = channel_counts(img, channel);
  double total = 0.0;
  for (double v : counts) total += v;
  if (!(total > 0.0)) throw DataError("normalize_legacy: zero total counts");
  for (auto& v : counts) v /= total;
  return pixel_density(img, std::move(counts));
}

}  // namespace weaktraj
