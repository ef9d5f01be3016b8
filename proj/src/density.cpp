#include "weaktraj/density.hpp"

#include <algorithm>
#include <cmath>

#include "weaktraj/errors.hpp"

namespace weaktraj {

double trapezoid(std::span<const double> y, double dx) {
  if (y.size() < 2) return 0.0;
  double s = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
  return s * dx;
}

double trapezoid(std::span<const double> y, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 1; i < y.size(); ++i)
    s += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
  return s;
}

void DensityCurve::validate() const {
  grid.validate();
  if (values.size() != grid.n_points)
    throw DataError("density: value count does not match grid");
  for (double v : values) {
    if (!std::isfinite(v)) throw DataError("density: non-finite value");
    if (v < 0.0) throw DataError("density: negative value");
  }
  double I = trapezoid(values, grid.dx());
  if (std::abs(I - 1.0) > 1e-9)
    throw DataError("density: trapezoid integral deviates from 1 by more than 1e-9");
}

DensityCdf::DensityCdf(const DensityCurve& density)
    : DensityCdf(density.grid.positions(), density.values) {}

DensityCdf::DensityCdf(std::vector<double> x, std::vector<double> rho)
    : x_(std::move(x)), rho_(std::move(rho)) {
  if (x_.size() != rho_.size() || x_.size() < 2)
    throw DataError("cdf: need matching x/density arrays with >= 2 samples");
  cum_.resize(x_.size());
  cum_[0] = 0.0;
  for (std::size_t i = 1; i < x_.size(); ++i) {
    if (!(x_[i] > x_[i - 1])) throw DataError("cdf: x samples must be strictly increasing");
    if (rho_[i] < 0.0 || rho_[i - 1] < 0.0)
      throw DataError("cdf: negative density makes the CDF non-monotone");
    cum_[i] = cum_[i - 1] + 0.5 * (rho_[i] + rho_[i - 1]) * (x_[i] - x_[i - 1]);
  }
  total_ = cum_.back();
  if (!(total_ > 0.0)) throw DataError("cdf: density has zero total mass");
}

double DensityCdf::operator()(double x_mm) const {
  if (x_mm <= x_.front()) return 0.0;
  if (x_mm >= x_.back()) return 1.0;
  auto it = std::upper_bound(x_.begin(), x_.end(), x_mm);
  std::size_t i = std::size_t(it - x_.begin()) - 1;
  double t = x_mm - x_[i];
  double h = x_[i + 1] - x_[i];
  double slope = (rho_[i + 1] - rho_[i]) / h;
  double m = cum_[i] + rho_[i] * t + 0.5 * slope * t * t;
  return std::clamp(m / total_, 0.0, 1.0);
}

double DensityCdf::quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw ValidationError("cdf: quantile must lie in (0,1)");
  double m = q * total_;
  // first node whose cumulative mass exceeds m; the cell below it carries mass
  std::size_t i = std::size_t(std::upper_bound(cum_.begin(), cum_.end(), m) - cum_.begin());
  if (i == 0) i = 1;
  if (i >= cum_.size()) i = cum_.size() - 1;
  std::size_t lo = i - 1;
  double h = x_[lo + 1] - x_[lo];
  double need = m - cum_[lo];
  double a = rho_[lo];
  double slope = (rho_[lo + 1] - rho_[lo]) / h;
  // solve a*t + slope*t^2/2 = need for t in [0, h], in cancellation-free form
  double disc = a * a + 2.0 * slope * need;
  if (disc < 0.0) disc = 0.0;
  double denom = a + std::sqrt(disc);
  double t = (denom > 0.0) ? 2.0 * need / denom : 0.0;
  return x_[lo] + std::clamp(t, 0.0, h);
}

}  // namespace weaktraj
