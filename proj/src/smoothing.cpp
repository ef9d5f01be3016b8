#include "weaktraj/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "weaktraj/interp.hpp"

namespace weaktraj {

double WeightedSamples::total_weight() const {
  double w = 0.0;
  for (double v : weights) w += v;
  return w;
}

double WeightedSamples::effective_count() const {
  double w = 0.0, w2 = 0.0;
  for (double v : weights) {
    w += v;
    w2 += v * v;
  }
  return w2 > 0.0 ? w * w / w2 : 0.0;
}

double WeightedSamples::mean() const {
  double w = 0.0, wx = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    w += weights[i];
    wx += weights[i] * positions_mm[i];
  }
  return wx / w;
}

double WeightedSamples::stddev() const {
  double mu = mean();
  double w = 0.0, wd = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double d = positions_mm[i] - mu;
    w += weights[i];
    wd += weights[i] * d * d;
  }
  return std::sqrt(wd / w);
}

void WeightedSamples::validate() const {
  if (positions_mm.size() != weights.size() || positions_mm.empty())
    throw DataError("samples: need matching non-empty positions/weights");
  for (std::size_t i = 1; i < positions_mm.size(); ++i)
    if (!(positions_mm[i] > positions_mm[i - 1]))
      throw DataError("samples: positions must be strictly increasing");
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw DataError("samples: weights must be finite and >= 0");
  }
  if (!(total_weight() > 0.0)) throw DataError("samples: total weight must be > 0");
}

Bandwidth silverman_bandwidth(const WeightedSamples& samples) {
  samples.validate();
  double sd = samples.stddev();
  double n_eff = samples.effective_count();
  if (!(sd > 0.0)) throw DataError("silverman: zero spread (all weight at one position)");
  if (!(n_eff > 1.0)) throw DataError("silverman: effective sample size must exceed 1");
  return Bandwidth{1.06 * sd * std::pow(n_eff, -0.2)};
}

DensityCurve kde_estimate(const WeightedSamples& samples, Bandwidth h, const Grid& eval_grid,
                          double z_m) {
  samples.validate();
  eval_grid.validate();
  if (!(h.h_mm > 0.0)) throw ValidationError("kde: bandwidth must be > 0");

  const double W = samples.total_weight();
  const double norm = 1.0 / (W * h.h_mm * std::sqrt(2.0 * std::numbers::pi));
  const double cutoff = 38.0 * h.h_mm;  // exp(-u^2/2) underflows past |u| ~ 38

  DensityCurve d;
  d.z_m = z_m;
  d.grid = eval_grid;
  d.values.assign(eval_grid.n_points, 0.0);

  const auto& xs = samples.positions_mm;
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < eval_grid.n_points; ++i) {
    double x = eval_grid.x(i);
    while (lo < xs.size() && xs[lo] < x - cutoff) ++lo;
    if (hi < lo) hi = lo;
    while (hi < xs.size() && xs[hi] <= x + cutoff) ++hi;
    double acc = 0.0;
    for (std::size_t j = lo; j < hi; ++j) {
      double u = (x - xs[j]) / h.h_mm;
      acc += samples.weights[j] * std::exp(-0.5 * u * u);
    }
    d.values[i] = acc * norm;
  }
  double I = trapezoid(d.values, d.grid.dx());
  if (!(I > 0.0)) throw NumericError("kde: estimate vanished on the evaluation grid");
  for (auto& v : d.values) v /= I;
  return d;
}

DensityCurve spline_fit(const WeightedSamples& samples, const Grid& eval_grid, double z_m) {
  samples.validate();
  eval_grid.validate();
  if (samples.positions_mm.size() < 4)
    throw ValidationError("spline_fit: need at least 4 samples");

  NaturalCubicSpline spline(samples.positions_mm, samples.weights);
  DensityCurve d;
  d.z_m = z_m;
  d.grid = eval_grid;
  d.values.assign(eval_grid.n_points, 0.0);
  const double x_lo = samples.positions_mm.front();
  const double x_hi = samples.positions_mm.back();
  for (std::size_t i = 0; i < eval_grid.n_points; ++i) {
    double x = eval_grid.x(i);
    if (x < x_lo || x > x_hi) continue;
    d.values[i] = std::max(spline(x), 0.0);
  }
  double I = trapezoid(d.values, d.grid.dx());
  if (!(I > 0.0)) throw NumericError("spline_fit: fit vanished on the evaluation grid");
  for (auto& v : d.values) v /= I;
  return d;
}

}  // namespace weaktraj
