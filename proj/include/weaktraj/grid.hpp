#pragma once
#include <cstddef>
#include <vector>

#include "weaktraj/errors.hpp"

namespace weaktraj {

/// Uniform transverse coordinate grid, positions in mm.
struct Grid {
  double x_min_mm = 0.0;
  double x_max_mm = 0.0;
  std::size_t n_points = 0;

  double dx() const { return (x_max_mm - x_min_mm) / double(n_points - 1); }
  double x(std::size_t i) const { return x_min_mm + double(i) * dx(); }
  double span() const { return x_max_mm - x_min_mm; }

  std::vector<double> positions() const {
    std::vector<double> xs(n_points);
    for (std::size_t i = 0; i < n_points; ++i) xs[i] = x(i);
    return xs;
  }

  void validate() const {
    if (!(x_min_mm < x_max_mm)) throw ValidationError("grid: x_min must be < x_max");
    if (n_points < 2) throw ValidationError("grid: n_points must be >= 2");
  }

  bool operator==(const Grid&) const = default;
};

}  // namespace weaktraj
