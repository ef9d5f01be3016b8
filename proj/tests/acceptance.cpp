// Acceptance suite: prints one PASS/FAIL line per criterion and exits with
// the number of failures. Every tolerance is pinned here, in code.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "weaktraj/pipeline.hpp"
#include "weaktraj/smoothing.hpp"

using namespace weaktraj;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

DensityCurve eval_on_grid(const std::vector<double>& xs, std::vector<double> values,
                          double z_m = 0.0) {
  DensityCurve d;
  d.z_m = z_m;
  d.grid = Grid{xs.front(), xs.back(), xs.size()};
  d.values = std::move(values);
  return d;
}

// ---- criterion 1: forward-inverse identity --------------------------------

Outcome criterion_forward_inverse() {
  Outcome out;
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const CouplingConstant zeta{373.5};
  double worst = 0.0;

  for (int field = 0; field < 3; ++field) {
    Grid g{-6.0, 6.0, 2048};
    // random smooth positive density: a few gaussian bumps
    std::vector<double> rho(g.n_points, 0.0);
    for (int bump = 0; bump < 4; ++bump) {
      double c = -3.0 + 6.0 * u(rng);
      double s = 0.4 + 1.2 * u(rng);
      double a = 0.3 + u(rng);
      for (std::size_t i = 0; i < g.n_points; ++i) {
        double t = (g.x(i) - c) / s;
        rho[i] += a * std::exp(-0.5 * t * t);
      }
    }
    double I = trapezoid(rho, g.dx());
    for (auto& v : rho) v /= I;
    DensityCurve density = eval_on_grid(g.positions(), rho);

    // pixel centers from a flat-momentum projection
    KxkCurve flat;
    flat.x_mm = g.positions();
    flat.value.assign(g.n_points, 0.0);
    flat.masked.assign(g.n_points, 0);
    flat.clamped.assign(g.n_points, 0);
    PixelImage probe = project_to_pixels(density, flat, 26.0, 1.0, zeta);

    // random smooth momentum sampled exactly at the pixel centers, with
    // zeta*|v| safely inside the arcsin branch
    double a1 = u(rng), a2 = u(rng), p1 = 6.28 * u(rng), p2 = 6.28 * u(rng);
    double vmax = 0.85 * 0.5 * std::numbers::pi / zeta.zeta;
    auto vfun = [&](double x) {
      double raw = a1 * std::sin(0.8 * x + p1) + a2 * std::sin(2.3 * x + p2);
      return vmax * raw / (a1 + a2);
    };
    KxkCurve truth;
    truth.z_m = 0.0;
    truth.x_mm = probe.pixel_centers_mm;
    for (double c : truth.x_mm) truth.value.push_back(vfun(c));
    truth.masked.assign(truth.x_mm.size(), 0);
    truth.clamped.assign(truth.x_mm.size(), 0);

    PixelImage img = project_to_pixels(density, truth, 26.0, 1.0, zeta);
    DensityCurve ir = eval_on_grid(img.pixel_centers_mm, img.counts_r);
    DensityCurve il = eval_on_grid(img.pixel_centers_mm, img.counts_l);
    KxkCurve rec = infer_kx_over_k(ir, il, zeta, MomentumMode::corrected);
    for (std::size_t i = 0; i < rec.size(); ++i) {
      if (rec.masked[i]) continue;
      worst = std::max(worst, std::abs(rec.value[i] - truth.value[i]));
    }
  }
  out.pass = worst <= 1e-12;
  out.detail = "max |recovered - true| = " + fmt(worst) + " (limit 1e-12)";
  return out;
}

// ---- criterion 2: method triangle ------------------------------------------

Outcome criterion_method_triangle() {
  Outcome out;
  SlitConfig cfg;
  cfg.slit_sigma_mm = 0.3;
  cfg.slit_separation_mm = 0.0;
  cfg.amplitude_ratio = 0.0;  // single spreading gaussian
  Grid g{-4.0, 4.0, 4096};

  const std::size_t n_planes = 51;  // 1 m at dz = 2 cm
  const std::size_t n_traj = 51;
  std::vector<FieldSlice> slices;
  std::vector<DensityCurve> planes;
  for (std::size_t j = 0; j < n_planes; ++j) {
    double z = 1.0 * double(j) / double(n_planes - 1);
    slices.push_back(propagate_analytic(cfg, g, z));
    planes.push_back(intensity(slices.back()));
  }
  auto seeds = seed_quantiles(planes[0], n_traj);
  auto phase = phase_trajectories(slices, cfg, seeds);
  auto cdf = cdf_transport_trajectories(planes, seeds);
  auto cvt = cvt_trajectories(planes, n_traj, CvtMetric::mass);

  double worst = 0.0;
  auto check_pair = [&](const TrajectoryEnsemble& a, const TrajectoryEnsemble& b) {
    for (std::size_t j = 0; j < n_planes; ++j)
      for (std::size_t i = 0; i < n_traj; ++i) {
        double lo = cdf.positions_mm[i > 0 ? i - 1 : i][j];
        double hi = cdf.positions_mm[i + 1 < n_traj ? i + 1 : i][j];
        double local = (hi - lo) / double((i > 0 && i + 1 < n_traj) ? 2 : 1);
        double diff = std::abs(a.positions_mm[i][j] - b.positions_mm[i][j]);
        worst = std::max(worst, diff / (0.02 * local));
      }
  };
  check_pair(phase, cdf);
  check_pair(cvt, cdf);
  check_pair(phase, cvt);
  out.pass = worst <= 1.0;
  out.detail = "max pairwise deviation = " + fmt(worst * 2.0) + "% of local spacing (limit 2%)";
  return out;
}

// ---- criterion 3: noiseless end-to-end -------------------------------------

Outcome criterion_noiseless_end_to_end() {
  Outcome out;
  RunConfig config = RunConfig::standard();
  config.sensor.noise.photon_budget = 0.0;  // noiseless frames
  config.jobs = 2;

  auto frames = synthesize_frames(config);
  auto recon = reconstruct_frames(config, frames);
  auto truth = ground_truth_ensemble(config);
  ComparisonReport rep = ensemble_mean_r(recon.ensemble, truth);
  DensityCurve final_truth = true_densities(config).back();
  double congregation = congregation_score(recon.ensemble.final_positions(), final_truth);

  out.pass = rep.r_avg > 0.999 && congregation < 0.02;
  out.detail = "r_avg = " + fmt(rep.r_avg) + " (need > 0.999), congregation = " +
               fmt(congregation) + " (need < 0.02)";
  return out;
}

// ---- criterion 4: bug-mode ordering ----------------------------------------

Outcome criterion_bug_mode_ordering() {
  Outcome out;
  RunConfig base = RunConfig::standard();
  base.sensor.noise.photon_budget = 1e6;
  base.sensor.noise.background_level = 5.0;
  base.jobs = 2;

  auto truth = ground_truth_ensemble(base);
  DensityCurve final_truth = true_densities(base).back();

  const int n_seeds = 20;
  std::vector<double> r_kde, r_spline, r_legacy, k_kde, k_spline, k_legacy;
  int kde_wins = 0;
  for (int seed = 1; seed <= n_seeds; ++seed) {
    RunConfig c = base;
    c.sensor.noise.rng_seed = std::uint64_t(seed);
    auto frames = synthesize_frames(c);

    auto run_mode = [&](const std::string& mode, std::vector<double>& rs,
                        std::vector<double>& ks) {
      RunConfig m = c;
      m.mode = PipelineMode::parse(mode);
      auto recon = reconstruct_frames(m, frames);
      auto reference = reference_ensemble(m, recon, truth);
      rs.push_back(ensemble_mean_r(recon.ensemble, reference).r_avg);
      ks.push_back(congregation_score(recon.ensemble.final_positions(), final_truth));
    };
    run_mode("corrected", r_kde, k_kde);
    run_mode("custom:smoothing=spline", r_spline, k_spline);
    run_mode("legacy", r_legacy, k_legacy);
    if (r_kde.back() > r_spline.back()) ++kde_wins;
  }

  double rk = median(r_kde), rs = median(r_spline), rl = median(r_legacy);
  double kk = median(k_kde), ks = median(k_spline), kl = median(k_legacy);
  bool r_order = rk > rs && rs > rl;
  bool k_order = kk < ks && ks < kl;
  bool dominance = kde_wins >= 16;
  out.pass = r_order && k_order && dominance;
  out.detail = "median r_avg kde/spline/legacy = " + fmt(rk) + "/" + fmt(rs) + "/" + fmt(rl) +
               ", median congregation = " + fmt(kk) + "/" + fmt(ks) + "/" + fmt(kl) +
               ", kde r_avg wins " + std::to_string(kde_wins) + "/20 (need >= 16)";
  return out;
}

// ---- criterion 5: normalization bug check ----------------------------------

Outcome criterion_normalization_bug() {
  Outcome out;
  SlitConfig slit{0.3, 4.7, 943.0, 1.0, 0.0};
  Grid g{-20.0, 20.0, 4096};
  DensityCurve scene = intensity(propagate_analytic(slit, g, 2.0));
  KxkCurve flat;
  flat.x_mm = g.positions();
  flat.value.assign(g.n_points, 0.0);
  flat.masked.assign(g.n_points, 0);
  flat.clamped.assign(g.n_points, 0);
  CouplingConstant zeta{373.5};
  DensityCdf cdf(scene);

  auto l1_vs_scene = [&](const DensityCurve& c) {
    double err = 0.0;
    double h = 1e-4;
    for (std::size_t i = 1; i + 1 < c.values.size(); ++i) {
      double x = c.grid.x(i);
      double rho = (cdf(x + h) - cdf(x - h)) / (2.0 * h);
      err += std::abs(c.values[i] - rho) * c.grid.dx();
    }
    return err;
  };

  double worst_corrected = 0.0;
  double legacy_ratio = 0.0;
  std::vector<DensityCurve> legacy_curves;
  for (double mag : {1.0, 2.0}) {
    PixelImage img = project_to_pixels(scene, flat, 26.0, mag, zeta);
    img = add_noise(img, NoiseConfig{1e8, 0.0, 17});
    DensityCurve corr = normalize_magnified(img, Channel::sum);
    worst_corrected = std::max(worst_corrected, l1_vs_scene(corr));
    legacy_curves.push_back(normalize_legacy(img, Channel::sum));
  }
  // legacy value ratio between magnifications approaches the magnification factor
  {
    const DensityCurve& g1 = legacy_curves[0];
    const DensityCurve& g2 = legacy_curves[1];
    auto value_at = [](const DensityCurve& c, double x) {
      std::size_t i = std::size_t((x - c.grid.x_min_mm) / c.grid.dx());
      return c.values[std::min(i, c.values.size() - 1)];
    };
    double num = 0.0, den = 0.0;
    for (double x : {-2.4, -2.3, 2.3, 2.4}) {  // on the bright slit humps
      num += value_at(g2, x);
      den += value_at(g1, x);
    }
    legacy_ratio = num / den;
  }
  double legacy_l1 = l1_vs_scene(legacy_curves[1]);

  bool covariant = worst_corrected < 0.02;
  bool legacy_fails = std::abs(legacy_ratio - 2.0) < 0.1 && legacy_l1 > 0.5;
  out.pass = covariant && legacy_fails;
  out.detail = "corrected L1 = " + fmt(worst_corrected) + " (need < 0.02), legacy mag ratio = " +
               fmt(legacy_ratio) + " (expect ~2), legacy L1 = " + fmt(legacy_l1);
  return out;
}

// ---- criterion 6: exact arithmetic spot checks ------------------------------

Outcome criterion_spot_checks() {
  Outcome out;
  // silverman: sigma=1, n_eff=100 against the exact arithmetic oracle
  WeightedSamples samples;
  for (int i = 0; i < 100; ++i) {
    samples.positions_mm.push_back(i < 50 ? -1.0 + 1e-9 * i : 1.0 + 1e-9 * i);
    samples.weights.push_back(1.0);
  }
  double h = silverman_bandwidth(samples).h_mm;
  double h_oracle = 1.06 * std::pow(100.0, -0.2);  // 0.42199360078670705
  bool ok_h = std::abs(h - h_oracle) <= 1e-5;

  // slope of v = 0.6 is 0.75 (to one ulp; 0.6 is not a binary fraction)
  KxkCurve kxk;
  kxk.x_mm = {0.0};
  kxk.value = {0.6};
  kxk.masked = {0};
  kxk.clamped = {0};
  double slope = slope_from_kxk(kxk, SlopeMode::corrected).value[0];
  bool ok_slope = std::abs(slope - 0.75) <= 3e-16;

  // dark left channel at zeta = 373.5
  Grid g{0.0, 1.0, 4};
  DensityCurve ir = eval_on_grid(g.positions(), {1.0, 1.0, 1.0, 1.0});
  DensityCurve il = eval_on_grid(g.positions(), {0.0, 0.0, 0.0, 0.0});
  double v = infer_kx_over_k(ir, il, CouplingConstant{373.5}, MomentumMode::corrected).value[0];
  bool ok_infer = std::abs(v - 4.206e-3) <= 1e-6;

  out.pass = ok_h && ok_slope && ok_infer;
  out.detail = "h = " + fmt(h) + " vs " + fmt(h_oracle) + ", slope(0.6) = " + fmt(slope) +
               ", infer = " + fmt(v);
  return out;
}

// ---- criterion 7: invariant suites -----------------------------------------

Outcome criterion_invariants() {
  Outcome out;
  std::vector<std::string> failures;

  // non-crossing + probability conservation on the standard two-slit flow
  {
    RunConfig c = RunConfig::standard();
    std::vector<DensityCurve> planes = true_densities(c);
    auto seeds = seed_quantiles(planes.front(), 40);
    auto ens = cdf_transport_trajectories(planes, seeds);
    for (std::size_t j = 0; j < ens.n_planes(); ++j)
      for (std::size_t i = 1; i < ens.n_trajectories(); ++i)
        if (!(ens.positions_mm[i][j] > ens.positions_mm[i - 1][j])) {
          failures.push_back("non-crossing");
          goto crossing_done;
        }
  crossing_done:
    for (std::size_t j = 0; j < planes.size(); j += 8) {
      DensityCdf cdf(planes[j]);
      for (std::size_t i = 1; i < ens.n_trajectories(); ++i) {
        double got = cdf(ens.positions_mm[i][j]) - cdf(ens.positions_mm[i - 1][j]);
        if (std::abs(got - (seeds.quantiles[i] - seeds.quantiles[i - 1])) > 1e-3) {
          failures.push_back("probability conservation");
          j = planes.size();
          break;
        }
      }
    }
  }

  // kde unit integral at 1e-9
  {
    WeightedSamples s;
    for (int i = 0; i < 60; ++i) {
      s.positions_mm.push_back(-3.0 + 0.1 * i);
      s.weights.push_back(1.0 + std::sin(0.7 * i) * std::sin(0.7 * i));
    }
    Grid g{-12.0, 12.0, 2048};
    DensityCurve d = kde_estimate(s, silverman_bandwidth(s), g);
    if (std::abs(trapezoid(d.values, g.dx()) - 1.0) > 1e-9) failures.push_back("kde integral");
  }

  // propagator agreement at 1e-6
  {
    SlitConfig slit{0.3, 4.7, 943.0, 1.0, 0.0};
    Grid g{-25.0, 25.0, 4096};
    FieldSlice f0 = make_two_slit_field(slit, g);
    DensityCurve ds = intensity(propagate_spectral(f0, 2.0, slit));
    DensityCurve da = intensity(propagate_analytic(slit, g, 2.0));
    double linf = 0.0;
    for (std::size_t i = 0; i < g.n_points; ++i)
      linf = std::max(linf, std::abs(ds.values[i] - da.values[i]));
    if (linf >= 1e-6) failures.push_back("propagator agreement " + fmt(linf));
  }

  // determinism under fixed seeds
  {
    RunConfig c = RunConfig::standard();
    c.z_schedule_m.resize(4);
    c.sensor.magnifications.resize(4);
    c.sensor.noise.photon_budget = 1e5;
    auto a = synthesize_frames(c);
    auto b = synthesize_frames(c);
    for (std::size_t j = 0; j < a.size(); ++j)
      if (a[j].counts_r != b[j].counts_r || a[j].counts_l != b[j].counts_l) {
        failures.push_back("determinism");
        break;
      }
  }

  out.pass = failures.empty();
  if (out.pass) {
    out.detail = "non-crossing, probability conservation, kde integral, propagator, determinism";
  } else {
    out.detail = "failed:";
    for (const auto& f : failures) out.detail += " " + f;
  }
  return out;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* label;
    double budget_s;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {1, "forward-inverse identity (zeta = 373.5, three random fields)", 1.0,
       criterion_forward_inverse},
      {2, "method triangle within 2% of local spacing", 30.0, criterion_method_triangle},
      {3, "noiseless end-to-end r_avg > 0.999, congregation < 0.02", 60.0,
       criterion_noiseless_end_to_end},
      {4, "bug-mode ordering over 20 noisy seeds", 600.0, criterion_bug_mode_ordering},
      {5, "magnification-covariant normalization vs legacy", 30.0, criterion_normalization_bug},
      {6, "exact arithmetic spot checks", 5.0, criterion_spot_checks},
      {7, "invariant suites", 300.0, criterion_invariants},
  };

  int failures = 0;
  for (const auto& e : entries) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = e.fn();
    } catch (const std::exception& ex) {
      o.pass = false;
      o.detail = std::string("exception: ") + ex.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > e.budget_s) {
      o.pass = false;
      o.detail += " [over the " + fmt(e.budget_s) + " s budget]";
    }
    std::printf("%s  criterion %d: %s (%.2f s) - %s\n", o.pass ? "PASS" : "FAIL", e.id, e.label,
                secs, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures;
}
