#include "weaktraj/bohm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "weaktraj/interp.hpp"

namespace weaktraj {

namespace {

void check_z_ordering(const std::vector<double>& z) {
  if (z.size() < 2) throw ValidationError("ensemble: need >= 2 z planes");
  for (std::size_t j = 1; j < z.size(); ++j)
    if (!(z[j] > z[j - 1])) throw ValidationError("ensemble: z levels must be strictly increasing");
}

// Exact integrals of rho, x*rho and (x-g)^2*rho over [a, b] for the
// piecewise-linear density, accumulated cell by cell.
struct CellMoments {
  double mass = 0.0;
  double first = 0.0;
};

template <class Term>
void for_each_subcell(const DensityCurve& density, double a, double b, Term&& term) {
  const auto& g = density.grid;
  a = std::max(a, g.x_min_mm);
  b = std::min(b, g.x_max_mm);
  if (!(b > a)) return;
  const double dx = g.dx();
  std::size_t i0 = std::min(std::size_t((a - g.x_min_mm) / dx), g.n_points - 2);
  std::size_t i1 = std::min(std::size_t((b - g.x_min_mm) / dx), g.n_points - 2);
  for (std::size_t i = i0; i <= i1; ++i) {
    double lo = std::max(a, g.x(i));
    double hi = std::min(b, g.x(i + 1));
    if (hi > lo) term(i, lo, hi);
  }
}

CellMoments density_moments(const DensityCurve& density, double a, double b) {
  CellMoments m;
  const auto& g = density.grid;
  for_each_subcell(density, a, b, [&](std::size_t i, double lo, double hi) {
    double xi = g.x(i);
    double s = (density.values[i + 1] - density.values[i]) / g.dx();
    double tp = lo - xi, tq = hi - xi;
    double t1 = tq - tp;
    double t2 = 0.5 * (tq * tq - tp * tp);
    double t3 = (tq * tq * tq - tp * tp * tp) / 3.0;
    double m0 = density.values[i] * t1 + s * t2;
    double m1 = xi * m0 + density.values[i] * t2 + s * t3;
    m.mass += m0;
    m.first += m1;
  });
  return m;
}

double quantization_integral(const DensityCurve& density, double a, double b, double gen) {
  double e = 0.0;
  const auto& g = density.grid;
  for_each_subcell(density, a, b, [&](std::size_t i, double lo, double hi) {
    double xi = g.x(i);
    double rho = density.values[i];
    double s = (density.values[i + 1] - rho) / g.dx();
    double tp = lo - xi, tq = hi - xi;
    auto T = [&](int k) { return (std::pow(tq, k) - std::pow(tp, k)) / double(k); };
    double c = xi - gen;
    e += c * c * (rho * T(1) + s * T(2)) + 2.0 * c * (rho * T(2) + s * T(3)) +
         (rho * T(3) + s * T(4));
  });
  return e;
}

/// Shape-preserving interpolant over the unmasked samples of a slope curve,
/// zero outside their range (interp1(...,'cubic',0) behavior).
PchipInterpolant slope_interpolant(const SlopeCurve& slope) {
  std::vector<double> xs, ys;
  xs.reserve(slope.size());
  for (std::size_t i = 0; i < slope.size(); ++i) {
    if (!slope.masked[i]) {
      xs.push_back(slope.x_mm[i]);
      ys.push_back(slope.value[i]);
    }
  }
  if (xs.size() < 4) throw DataError("slope curve: fewer than 4 unmasked samples");
  return PchipInterpolant(std::move(xs), std::move(ys), 0.0);
}

}  // namespace

std::vector<double> TrajectoryEnsemble::final_positions() const {
  std::vector<double> out;
  out.reserve(n_trajectories());
  for (const auto& row : positions_mm)
    if (!row.empty() && !is_masked(row.back())) out.push_back(row.back());
  return out;
}

void TrajectoryEnsemble::validate() const {
  check_z_ordering(z_levels_m);
  for (const auto& row : positions_mm) {
    if (row.size() != n_planes())
      throw DataError("ensemble: trajectory length does not match z levels");
    bool truncated = false;
    for (double v : row) {
      if (is_masked(v)) truncated = true;
      else if (truncated) throw DataError("ensemble: valid entry after a masked one");
      else if (!std::isfinite(v)) throw DataError("ensemble: non-finite position");
    }
  }
}

void QuantileSeeds::validate() const {
  if (quantiles.empty() || quantiles.size() != positions_mm.size())
    throw ValidationError("seeds: quantiles and positions must match and be non-empty");
  for (std::size_t i = 0; i < quantiles.size(); ++i) {
    if (!(quantiles[i] > 0.0 && quantiles[i] < 1.0))
      throw ValidationError("seeds: quantiles must lie in (0,1)");
    if (i > 0 && !(quantiles[i] > quantiles[i - 1] && positions_mm[i] > positions_mm[i - 1]))
      throw ValidationError("seeds: quantiles and positions must be strictly increasing");
  }
}

QuantileSeeds seed_quantiles(const DensityCurve& density, std::size_t n) {
  if (n == 0) throw ValidationError("seed_quantiles: n must be >= 1");
  DensityCdf cdf(density);
  QuantileSeeds seeds;
  seeds.quantiles.resize(n);
  seeds.positions_mm.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    seeds.quantiles[i] = (double(i) + 0.5) / double(n);
    seeds.positions_mm[i] = cdf.quantile(seeds.quantiles[i]);
  }
  seeds.validate();
  return seeds;
}

TrajectoryEnsemble cdf_transport_trajectories(const std::vector<DensityCurve>& densities,
                                              const QuantileSeeds& seeds) {
  seeds.validate();
  TrajectoryEnsemble ens;
  ens.z_levels_m.reserve(densities.size());
  for (const auto& d : densities) ens.z_levels_m.push_back(d.z_m);
  check_z_ordering(ens.z_levels_m);

  ens.positions_mm.assign(seeds.size(), std::vector<double>(densities.size()));
  for (std::size_t j = 0; j < densities.size(); ++j) {
    DensityCdf cdf(densities[j]);
    for (std::size_t i = 0; i < seeds.size(); ++i)
      ens.positions_mm[i][j] = cdf.quantile(seeds.quantiles[i]);
  }
  return ens;
}

TrajectoryEnsemble phase_trajectories(const std::vector<FieldSlice>& fields,
                                      const SlitConfig& cfg, const QuantileSeeds& seeds,
                                      Integrator integrator) {
  seeds.validate();
  TrajectoryEnsemble ens;
  ens.z_levels_m.reserve(fields.size());
  for (const auto& f : fields) ens.z_levels_m.push_back(f.z_m);
  check_z_ordering(ens.z_levels_m);

  const std::size_t n_planes = fields.size();
  std::vector<PchipInterpolant> slope_fns;
  slope_fns.reserve(n_planes);
  std::vector<double> x_lo(n_planes), x_hi(n_planes);
  for (std::size_t j = 0; j < n_planes; ++j) {
    auto slope = slope_from_kxk(phase_gradient_slope(fields[j], cfg), SlopeMode::corrected);
    slope_fns.push_back(slope_interpolant(slope));
    x_lo[j] = fields[j].grid.x_min_mm;
    x_hi[j] = fields[j].grid.x_max_mm;
  }

  const std::size_t n = seeds.size();
  ens.positions_mm.assign(n, std::vector<double>(n_planes));
  for (std::size_t i = 0; i < n; ++i) {
    double x = seeds.positions_mm[i];
    ens.positions_mm[i][0] = x;
    bool truncated = false;
    for (std::size_t j = 0; j + 1 < n_planes; ++j) {
      if (truncated) {
        ens.positions_mm[i][j + 1] = std::nan("");
        continue;
      }
      double dz_mm = (ens.z_levels_m[j + 1] - ens.z_levels_m[j]) * 1000.0;
      double s1 = slope_fns[j](x);
      double x_next;
      if (integrator == Integrator::euler) {
        x_next = x + dz_mm * s1;
      } else {
        double s2 = slope_fns[j + 1](x + dz_mm * s1);
        x_next = x + 0.5 * dz_mm * (s1 + s2);
      }
      if (x_next < x_lo[j + 1] || x_next > x_hi[j + 1]) {
        truncated = true;
        ens.positions_mm[i][j + 1] = std::nan("");
        continue;
      }
      x = x_next;
      ens.positions_mm[i][j + 1] = x;
    }
    if (truncated) ++ens.truncated_count;
  }
  return ens;
}

double lloyd_step(const DensityCdf& cdf, const DensityCurve& density,
                  std::vector<double>& generators, CvtMetric metric) {
  const std::size_t n = generators.size();
  double max_move = 0.0;
  if (metric == CvtMetric::mass) {
    // Lloyd on the uniformized coordinate u = F(x): cell boundaries are
    // u-midpoints and the centroid of a cell under a uniform measure is its
    // u-midpoint, so the fixed point is u_i = (i-1/2)/n, i.e. the density
    // quantiles in x.
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = cdf(generators[i]);
    std::vector<double> b(n + 1);
    b[0] = 0.0;
    b[n] = 1.0;
    for (std::size_t i = 1; i < n; ++i) b[i] = 0.5 * (u[i - 1] + u[i]);
    for (std::size_t i = 0; i < n; ++i) {
      double u_new = std::clamp(0.5 * (b[i] + b[i + 1]), 1e-15, 1.0 - 1e-15);
      double x_new = cdf.quantile(u_new);
      max_move = std::max(max_move, std::abs(x_new - generators[i]));
      generators[i] = x_new;
    }
  } else {
    // classic density-weighted centroids of midpoint Voronoi cells
    const auto& g = density.grid;
    std::vector<double> b(n + 1);
    b[0] = g.x_min_mm;
    b[n] = g.x_max_mm;
    for (std::size_t i = 1; i < n; ++i) b[i] = 0.5 * (generators[i - 1] + generators[i]);
    for (std::size_t i = 0; i < n; ++i) {
      CellMoments m = density_moments(density, b[i], b[i + 1]);
      double x_new = m.mass > 0.0 ? m.first / m.mass : generators[i];
      max_move = std::max(max_move, std::abs(x_new - generators[i]));
      generators[i] = x_new;
    }
  }
  return max_move;
}

double lloyd_energy(const DensityCdf& cdf, const DensityCurve& density,
                    const std::vector<double>& generators, CvtMetric metric) {
  const std::size_t n = generators.size();
  const auto& g = density.grid;
  double energy = 0.0;
  if (metric == CvtMetric::mass) {
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = cdf(generators[i]);
    // uniform measure on [0,1]: sum over cells of int (t - u_i)^2 dt
    double lo = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double hi = (i + 1 < n) ? 0.5 * (u[i] + u[i + 1]) : 1.0;
      double a = lo - u[i], b = hi - u[i];
      energy += (b * b * b - a * a * a) / 3.0;
      lo = hi;
    }
  } else {
    double lo = g.x_min_mm;
    for (std::size_t i = 0; i < n; ++i) {
      double hi = (i + 1 < n) ? 0.5 * (generators[i] + generators[i + 1]) : g.x_max_mm;
      energy += quantization_integral(density, lo, hi, generators[i]);
      lo = hi;
    }
  }
  return energy;
}

TrajectoryEnsemble cvt_trajectories(const std::vector<DensityCurve>& densities, std::size_t n,
                                    CvtMetric metric, LloydDiagnostics* diagnostics) {
  if (n == 0) throw ValidationError("cvt_trajectories: n must be >= 1");
  TrajectoryEnsemble ens;
  ens.z_levels_m.reserve(densities.size());
  for (const auto& d : densities) ens.z_levels_m.push_back(d.z_m);
  check_z_ordering(ens.z_levels_m);

  ens.positions_mm.assign(n, std::vector<double>(densities.size()));
  std::vector<double> gen;
  std::vector<double> prev_levels;  // converged mass coordinates, for warm starts
  for (std::size_t j = 0; j < densities.size(); ++j) {
    DensityCdf cdf(densities[j]);
    if (j == 0) {
      auto seeds = seed_quantiles(densities[0], n);
      gen = seeds.positions_mm;
    } else if (metric == CvtMetric::mass && prev_levels.size() == n) {
      // warm start: a generator's identity under the mass metric is its
      // quantile level, so carry the level across planes
      for (std::size_t i = 0; i < n; ++i) gen[i] = cdf.quantile(prev_levels[i]);
    }
    const double tol = kLloydMoveTolFraction * densities[j].grid.span();
    std::size_t steps = 0;
    double move = 0.0;
    while (steps < kLloydMaxIterations) {
      move = lloyd_step(cdf, densities[j], gen, metric);
      ++steps;
      if (move < tol) break;
    }
    if (diagnostics) {
      diagnostics->iterations.push_back(steps);
      diagnostics->final_move.push_back(move);
    }
    if (move >= tol)
      throw NumericError("cvt: Lloyd did not converge at plane " + std::to_string(j) +
                         " (last move " + std::to_string(move) + " mm after " +
                         std::to_string(kLloydMaxIterations) + " iterations)");
    if (metric == CvtMetric::mass) {
      prev_levels.resize(n);
      for (std::size_t i = 0; i < n; ++i) prev_levels[i] = cdf(gen[i]);
    }
    for (std::size_t i = 0; i < n; ++i) ens.positions_mm[i][j] = gen[i];
  }
  return ens;
}

TrajectoryEnsemble coupled_update_trajectories(const std::vector<DensityCurve>& densities,
                                               const QuantileSeeds& seeds,
                                               const std::vector<std::vector<double>>& query_positions,
                                               BohmInterp interp) {
  seeds.validate();
  const std::size_t n = seeds.size();
  const std::size_t n_planes = densities.size();
  if (interp == BohmInterp::legacy_cdfx) {
    if (query_positions.size() != n)
      throw ValidationError("coupled_update: query ensemble must pair trajectories by index");
    for (const auto& row : query_positions)
      if (row.size() != n_planes)
        throw ValidationError("coupled_update: query ensemble plane count mismatch");
  }

  TrajectoryEnsemble ens;
  ens.z_levels_m.reserve(n_planes);
  for (const auto& d : densities) ens.z_levels_m.push_back(d.z_m);
  check_z_ordering(ens.z_levels_m);

  // probability-conserved positions per plane; consecutive differences give
  // the slope each quantile trajectory should follow
  std::vector<std::vector<double>> q_pos(n_planes, std::vector<double>(n));
  for (std::size_t j = 0; j < n_planes; ++j) {
    DensityCdf cdf(densities[j]);
    for (std::size_t i = 0; i < n; ++i) q_pos[j][i] = cdf.quantile(seeds.quantiles[i]);
  }

  ens.positions_mm.assign(n, std::vector<double>(n_planes));
  for (std::size_t i = 0; i < n; ++i) ens.positions_mm[i][0] = q_pos[0][i];
  for (std::size_t j = 0; j + 1 < n_planes; ++j) {
    double dz_mm = (ens.z_levels_m[j + 1] - ens.z_levels_m[j]) * 1000.0;
    std::vector<double> slope(n);
    for (std::size_t i = 0; i < n; ++i) slope[i] = (q_pos[j + 1][i] - q_pos[j][i]) / dz_mm;
    if (n == 1) {
      ens.positions_mm[0][j + 1] = ens.positions_mm[0][j] + dz_mm * slope[0];
      continue;
    }
    PchipInterpolant sfun(q_pos[j], slope, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double at = (interp == BohmInterp::legacy_cdfx) ? query_positions[i][j]
                                                      : ens.positions_mm[i][j];
      double s = std::isnan(at) ? 0.0 : sfun(at);
      ens.positions_mm[i][j + 1] = ens.positions_mm[i][j] + dz_mm * s;
    }
  }
  return ens;
}

}  // namespace weaktraj
