#pragma once
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "weaktraj/config.hpp"
#include "weaktraj/density.hpp"

namespace testutil {

/// Unique scratch directory under the system temp dir, removed on scope exit.
class TmpDir {
public:
  explicit TmpDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("weaktraj_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TmpDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

inline weaktraj::DensityCurve gaussian_density(double sigma_mm, double center_mm,
                                               const weaktraj::Grid& grid, double z_m = 0.0) {
  weaktraj::DensityCurve d;
  d.z_m = z_m;
  d.grid = grid;
  d.values.resize(grid.n_points);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    double u = (grid.x(i) - center_mm) / sigma_mm;
    d.values[i] = std::exp(-0.5 * u * u);
  }
  double I = weaktraj::trapezoid(d.values, grid.dx());
  for (auto& v : d.values) v /= I;
  return d;
}

inline weaktraj::DensityCurve uniform_density(const weaktraj::Grid& grid, double z_m = 0.0) {
  weaktraj::DensityCurve d;
  d.z_m = z_m;
  d.grid = grid;
  d.values.assign(grid.n_points, 1.0 / grid.span());
  return d;
}

/// Small fast two-slit dataset for pipeline-level tests.
inline weaktraj::RunConfig mini_config(std::size_t n_planes = 9, std::size_t n_traj = 24,
                                       double budget = 0.0) {
  weaktraj::RunConfig c = weaktraj::RunConfig::standard();
  c.z_schedule_m.resize(n_planes);
  c.sensor.magnifications.resize(n_planes);
  const double pitch_mm = c.sensor.pixel_pitch_um * 1e-3;
  c.sensor.n_pixels = 700;
  for (std::size_t j = 0; j < n_planes; ++j) {
    c.z_schedule_m[j] = 3.0 + 2.5 * double(j) / double(n_planes - 1);
    double half = 4.4 * c.slit.envelope_sigma_mm(c.z_schedule_m[j]);
    c.sensor.magnifications[j] = 2.0 * half / (double(c.sensor.n_pixels) * pitch_mm);
  }
  c.grid.n_points = 2048;
  c.n_trajectories = n_traj;
  c.sensor.noise.photon_budget = budget;
  return c;
}

// reference inverse-normal values, Phi^-1(q)
inline constexpr double kPhiInv075 = 0.6744897501960817;
inline constexpr double kPhiInv090 = 1.2815515655446004;

}  // namespace testutil
