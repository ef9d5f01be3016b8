#include "weaktraj/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "weaktraj/parallel.hpp"
#include "weaktraj/smoothing.hpp"
#include "weaktraj/version.hpp"

namespace weaktraj {

using nlohmann::json;

namespace {

std::string frame_name(std::size_t j) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%03zu.csv", j);
  return buf;
}

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

void write_manifest(const std::filesystem::path& path, const std::string& stage,
                    const std::string& hash, const std::string& started, json diagnostics,
                    const std::vector<std::filesystem::path>& files) {
  json m;
  m["stage"] = stage;
  m["config"] = hash;
  m["version"] = kVersion;
  m["started_utc"] = started;
  m["finished_utc"] = utc_now();
  m["diagnostics"] = std::move(diagnostics);
  json names = json::array();
  for (const auto& f : files) names.push_back(f.filename().string());
  m["files"] = names;
  write_text(path, m.dump(2) + "\n");
}

void check_hash(const std::string& found, const std::string& expected,
                const std::filesystem::path& path, bool force) {
  if (force || found.empty()) return;
  if (found != expected)
    throw DataError(path.string() + ": config hash " + found + " does not match " + expected +
                    " (pass --force to mix artifacts)");
}

DensityCurve smooth_channel(const PixelImage& img, Channel ch, PipelineMode::Normalization norm,
                            SmoothingMethod method, double* h_used) {
  DensityCurve raw = (norm == PipelineMode::Normalization::corrected)
                         ? normalize_magnified(img, ch)
                         : normalize_legacy(img, ch);
  WeightedSamples samples{img.pixel_centers_mm, raw.values};
  if (method == SmoothingMethod::spline) {
    if (h_used) *h_used = 0.0;
    return spline_fit(samples, raw.grid, img.z_m);
  }
  Bandwidth h = silverman_bandwidth(samples);
  h.h_mm = std::max(h.h_mm, img.pixel_spacing_mm() / 4.0);  // sub-pixel spike floor
  if (h_used) *h_used = h.h_mm;
  return kde_estimate(samples, h, raw.grid, img.z_m);
}

std::string congregation_name(CongregationMethod m) {
  return m == CongregationMethod::ks ? "ks" : "l1_histogram";
}

json report_json(const ComparisonReport& rep, const std::string& hash, double density_z,
                 const std::string& density_hash, const std::string& mode_a,
                 const std::string& mode_b) {
  json j;
  j["schema_version"] = 1;
  j["config"] = hash;
  j["series_a"] = rep.series_a;
  j["series_b"] = rep.series_b;
  j["mode_a"] = mode_a;
  j["mode_b"] = mode_b;
  j["r_avg"] = rep.r_avg;
  j["congregation"] = {{"method", congregation_name(rep.congregation_method)},
                       {"score", rep.congregation}};
  j["density"] = {{"config", density_hash}, {"z_m", density_z}};
  j["diagnostics"] = {{"pairs_total", rep.pairs_total},
                      {"pairs_skipped", rep.pairs_skipped},
                      {"masked_points_dropped", rep.masked_points_dropped}};
  j["baselines"] = {{"r_avg_spline_published", rep.published_baseline_r_spline},
                    {"r_avg_kde_published", rep.published_baseline_r_kde}};
  return j;
}

void write_per_pair_csv(const std::filesystem::path& path, const ComparisonReport& rep,
                        const std::string& hash) {
  std::ostringstream out;
  out << "# config=" << hash << "\n";
  out << "# series_a=" << rep.series_a << "\n";
  out << "# series_b=" << rep.series_b << "\n";
  out << "pair_index,r\n";
  for (std::size_t i = 0; i < rep.per_pair_r.size(); ++i) {
    out << i << ',';
    if (!std::isnan(rep.per_pair_r[i])) out << format_double(rep.per_pair_r[i]);
    out << '\n';
  }
  write_text(path, out.str());
}

}  // namespace

std::vector<DensityCurve> true_densities(const RunConfig& config) {
  config.validate();
  std::vector<DensityCurve> out(config.z_schedule_m.size());
  parallel_for(out.size(), config.jobs, [&](std::size_t j) {
    out[j] = intensity(propagate_analytic(config.slit, config.grid, config.z_schedule_m[j]));
  });
  return out;
}

std::vector<PixelImage> synthesize_frames(const RunConfig& config) {
  config.validate();
  const std::size_t n_planes = config.z_schedule_m.size();
  std::vector<PixelImage> frames(n_planes);
  parallel_for(n_planes, config.jobs, [&](std::size_t j) {
    double z = config.z_schedule_m[j];
    FieldSlice field = propagate_analytic(config.slit, config.grid, z);
    DensityCurve density = intensity(field);
    KxkCurve kxk = phase_gradient_slope(field, config.slit);
    PixelImage img = project_to_pixels(density, kxk, config.sensor.pixel_pitch_um,
                                       config.sensor.magnification_for_plane(j), config.zeta,
                                       config.sensor.n_pixels);
    if (config.sensor.noise.photon_budget > 0.0) {
      NoiseConfig noise = config.sensor.noise;
      noise.rng_seed = config.sensor.noise.rng_seed ^ std::uint64_t(j);
      img = add_noise(img, noise);
    }
    frames[j] = std::move(img);
  });
  return frames;
}

TrajectoryEnsemble ground_truth_ensemble(const RunConfig& config) {
  auto densities = true_densities(config);
  auto seeds = seed_quantiles(densities.front(), config.n_trajectories);
  return cdf_transport_trajectories(densities, seeds);
}

ReconstructionResult reconstruct_frames(const RunConfig& config,
                                        const std::vector<PixelImage>& frames) {
  config.validate();
  if (frames.size() != config.z_schedule_m.size())
    throw DataError("reconstruct: frame count does not match the z schedule");

  const std::size_t n_planes = frames.size();
  ReconstructionResult res;
  res.measured_densities.resize(n_planes);
  res.slopes.resize(n_planes);
  res.bandwidths_mm.assign(n_planes, 0.0);
  std::vector<std::size_t> clamped(n_planes, 0), masked(n_planes, 0);

  // frames synthesized without a photon budget never saw the noise stage,
  // so there is no background to remove
  const double background_estimate =
      config.sensor.noise.photon_budget > 0.0 ? config.sensor.noise.background_level : 0.0;
  parallel_for(n_planes, config.jobs, [&](std::size_t j) {
    PixelImage img = subtract_background(frames[j], background_estimate);
    double h = 0.0;
    DensityCurve right =
        smooth_channel(img, Channel::right, config.mode.normalization, config.mode.smoothing, &h);
    DensityCurve left =
        smooth_channel(img, Channel::left, config.mode.normalization, config.mode.smoothing, nullptr);
    res.measured_densities[j] =
        smooth_channel(img, Channel::sum, config.mode.normalization, config.mode.smoothing, nullptr);
    res.bandwidths_mm[j] = h;
    KxkCurve kxk = infer_kx_over_k(right, left, config.zeta, config.mode.momentum);
    clamped[j] = kxk.clamped_count();
    masked[j] = kxk.masked_count();
    res.slopes[j] = slope_from_kxk(kxk, config.mode.update);
  });
  for (std::size_t j = 0; j < n_planes; ++j) {
    res.clamped_samples += clamped[j];
    res.masked_samples += masked[j];
  }

  res.seeds = seed_quantiles(res.measured_densities.front(), config.n_trajectories);
  res.ensemble = reconstruct_ensemble(res.slopes, res.seeds, &res.integration);
  return res;
}

TrajectoryEnsemble reference_ensemble(const RunConfig& config, const ReconstructionResult& recon,
                                      const TrajectoryEnsemble& ground_truth) {
  if (config.mode.bohm_interp == BohmInterp::corrected_cdfx_wise) return ground_truth;
  return coupled_update_trajectories(recon.measured_densities, recon.seeds,
                                     recon.ensemble.positions_mm, BohmInterp::legacy_cdfx);
}

StageResult run_synthesize(const RunConfig& config, const std::filesystem::path& out_dir) {
  const std::string started = utc_now();
  config.validate();
  ensure_dir(out_dir);
  const std::string hash = config.dataset_hash();

  auto frames = synthesize_frames(config);
  StageResult result{out_dir, {}};
  for (std::size_t j = 0; j < frames.size(); ++j) {
    auto path = out_dir / frame_name(j);
    write_frame_csv(path, frames[j], {{"config", hash}});
    result.files.push_back(path);
  }

  auto truth = ground_truth_ensemble(config);
  auto bohm_path = out_dir / "bohm_cdf.csv";
  write_ensemble_csv(bohm_path, truth,
                     {{"config", hash}, {"series", "bohm"}, {"mode", "cdf_transport"}});
  result.files.push_back(bohm_path);

  json diag{{"planes", frames.size()},
            {"pixels_per_frame", frames.empty() ? 0 : frames.front().size()},
            {"photon_budget", config.sensor.noise.photon_budget},
            {"rng_seed", config.sensor.noise.rng_seed}};
  auto manifest = out_dir / "manifest.json";
  write_manifest(manifest, "synthesize", hash, started, diag, result.files);
  result.files.push_back(manifest);
  return result;
}

StageResult run_reconstruct(const RunConfig& config, const std::filesystem::path& frames_dir,
                            const std::filesystem::path& out_dir, bool force) {
  const std::string started = utc_now();
  config.validate();
  ensure_dir(out_dir);
  const std::string hash = config.dataset_hash();
  const std::size_t n_planes = config.z_schedule_m.size();

  std::vector<PixelImage> frames(n_planes);
  for (std::size_t j = 0; j < n_planes; ++j) {
    auto path = frames_dir / frame_name(j);
    if (!std::filesystem::exists(path))
      throw DataError("missing frame for z index " + std::to_string(j) + ": " + path.string());
    CsvHeader header;
    frames[j] = read_frame_csv(path, &header);
    check_hash(header_value(header, "config"), hash, path, force);
    if (std::abs(frames[j].z_m - config.z_schedule_m[j]) > 1e-9)
      throw DataError(path.string() + ": frame z does not match the config schedule");
  }

  ReconstructionResult recon = reconstruct_frames(config, frames);
  StageResult result{out_dir, {}};

  const std::string mode_str = config.mode.to_string();
  auto ens_path = out_dir / "recon_ensemble.csv";
  write_ensemble_csv(ens_path, recon.ensemble,
                     {{"config", hash}, {"series", "reconstruction"}, {"mode", mode_str}});
  result.files.push_back(ens_path);

  const DensityCurve& final_density = recon.measured_densities.back();
  auto dens_path = out_dir / "recon_density_final.csv";
  CsvHeader dens_header{{"config", hash}};
  if (config.mode.smoothing == SmoothingMethod::kde) {
    dens_header.emplace_back("method", "kde");
    dens_header.emplace_back("h_mm", format_double(recon.bandwidths_mm.back()));
  } else {
    dens_header.emplace_back("method", "spline");
  }
  write_density_csv(dens_path, final_density, dens_header);
  result.files.push_back(dens_path);

  json diag{{"mode", mode_str},
            {"seeds", recon.seeds.positions_mm},
            {"clamped_samples", recon.clamped_samples},
            {"masked_samples", recon.masked_samples},
            {"truncated_trajectories", recon.integration.truncated},
            {"out_of_range_steps", recon.integration.out_of_range_steps}};

  auto truth_path = frames_dir / "bohm_cdf.csv";
  if (std::filesystem::exists(truth_path)) {
    CsvHeader truth_header;
    TrajectoryEnsemble truth = read_ensemble_csv(truth_path, &truth_header);
    check_hash(header_value(truth_header, "config"), hash, truth_path, force);

    TrajectoryEnsemble reference = reference_ensemble(config, recon, truth);
    std::string series_b = "bohm";
    std::string mode_b = config.mode.bohm_interp == BohmInterp::corrected_cdfx_wise
                             ? "cdf_transport"
                             : "legacy_cdfx";
    if (config.mode.bohm_interp == BohmInterp::legacy_cdfx) {
      auto ref_path = out_dir / "bohm_legacy_cdfx.csv";
      write_ensemble_csv(ref_path, reference,
                         {{"config", hash}, {"series", series_b}, {"mode", mode_b}});
      result.files.push_back(ref_path);
    }

    ComparisonReport rep = ensemble_mean_r(recon.ensemble, reference);
    rep.series_a = "reconstruction";
    rep.series_b = series_b;
    rep.congregation_method = CongregationMethod::ks;
    rep.congregation = congregation_score(recon.ensemble.final_positions(), final_density,
                                          CongregationMethod::ks);

    auto report_path = out_dir / "report.json";
    write_text(report_path,
               report_json(rep, hash, final_density.z_m, hash, mode_str, mode_b).dump(2) + "\n");
    result.files.push_back(report_path);
    auto pairs_path = out_dir / "per_pair_r.csv";
    write_per_pair_csv(pairs_path, rep, hash);
    result.files.push_back(pairs_path);
    diag["r_avg"] = rep.r_avg;
    diag["congregation"] = rep.congregation;
  }

  auto manifest = out_dir / "recon_manifest.json";
  write_manifest(manifest, "reconstruct", hash, started, diag, result.files);
  result.files.push_back(manifest);
  return result;
}

StageResult run_bohm(const RunConfig& config, const std::string& method,
                     const std::filesystem::path& out_dir) {
  const std::string started = utc_now();
  config.validate();
  ensure_dir(out_dir);
  const std::string hash = config.dataset_hash();

  TrajectoryEnsemble ens;
  json diag{{"method", method}, {"n_trajectories", config.n_trajectories}};
  if (method == "cdf") {
    ens = ground_truth_ensemble(config);
  } else if (method == "phase") {
    std::vector<FieldSlice> fields(config.z_schedule_m.size());
    parallel_for(fields.size(), config.jobs, [&](std::size_t j) {
      fields[j] = propagate_analytic(config.slit, config.grid, config.z_schedule_m[j]);
    });
    auto seeds = seed_quantiles(intensity(fields.front()), config.n_trajectories);
    ens = phase_trajectories(fields, config.slit, seeds, Integrator::midpoint);
    diag["truncated_trajectories"] = ens.truncated_count;
  } else if (method == "cvt") {
    LloydDiagnostics lloyd;
    ens = cvt_trajectories(true_densities(config), config.n_trajectories, CvtMetric::mass, &lloyd);
    std::size_t total_iters = 0;
    for (auto it : lloyd.iterations) total_iters += it;
    diag["lloyd_iterations_total"] = total_iters;
  } else {
    throw ValidationError("bohm: method must be cdf|phase|cvt, got '" + method + "'");
  }

  StageResult result{out_dir, {}};
  auto path = out_dir / ("bohm_" + method + ".csv");
  write_ensemble_csv(path, ens, {{"config", hash}, {"series", "bohm"}, {"mode", method}});
  result.files.push_back(path);
  auto manifest = out_dir / "bohm_manifest.json";
  write_manifest(manifest, "bohm", hash, started, diag, result.files);
  result.files.push_back(manifest);
  return result;
}

StageResult run_compare(const std::filesystem::path& ensemble_a,
                        const std::filesystem::path& ensemble_b,
                        const std::filesystem::path& density,
                        const std::filesystem::path& out_dir, CongregationMethod method,
                        bool force) {
  const std::string started = utc_now();
  ensure_dir(out_dir);

  CsvHeader ha, hb, hd;
  TrajectoryEnsemble a = read_ensemble_csv(ensemble_a, &ha);
  TrajectoryEnsemble b = read_ensemble_csv(ensemble_b, &hb);
  DensityCurve dens = read_density_csv(density, &hd);

  std::string hash = header_value(ha, "config");
  if (hash.empty()) hash = header_value(hb, "config");
  check_hash(header_value(hb, "config"), hash, ensemble_b, force);
  check_hash(header_value(hd, "config"), hash, density, force);

  ComparisonReport rep = ensemble_mean_r(a, b);
  rep.series_a = header_value(ha, "series").empty() ? "a" : header_value(ha, "series");
  rep.series_b = header_value(hb, "series").empty() ? "b" : header_value(hb, "series");
  rep.congregation_method = method;
  rep.congregation = congregation_score(a.final_positions(), dens, method);
  std::string mode_a = header_value(ha, "mode");
  std::string mode_b = header_value(hb, "mode");

  StageResult result{out_dir, {}};
  auto report_path = out_dir / "report.json";
  write_text(report_path,
             report_json(rep, hash, dens.z_m, header_value(hd, "config"), mode_a, mode_b).dump(2) +
                 "\n");
  result.files.push_back(report_path);
  auto pairs_path = out_dir / "per_pair_r.csv";
  write_per_pair_csv(pairs_path, rep, hash);
  result.files.push_back(pairs_path);

  // overlay plot data: every trajectory point of both series, long format
  {
    std::ostringstream out;
    out << "# config=" << hash << "\n";
    out << "series,z_m,x_mm\n";
    auto emit = [&](const TrajectoryEnsemble& e, const std::string& name) {
      for (std::size_t i = 0; i < e.n_trajectories(); ++i)
        for (std::size_t j = 0; j < e.n_planes(); ++j)
          if (!TrajectoryEnsemble::is_masked(e.positions_mm[i][j]))
            out << name << ',' << format_double(e.z_levels_m[j]) << ','
                << format_double(e.positions_mm[i][j]) << '\n';
    };
    emit(a, rep.series_a);
    emit(b, rep.series_b);
    auto overlay_path = out_dir / "overlay.csv";
    write_text(overlay_path, out.str());
    result.files.push_back(overlay_path);
  }

  // final panel: trajectory endpoints of both series plus the density curve
  {
    std::ostringstream out;
    out << "# config=" << hash << "\n";
    out << "kind,series,x_mm,value\n";
    for (double x : a.final_positions())
      out << "final_position," << rep.series_a << ',' << format_double(x) << ",\n";
    for (double x : b.final_positions())
      out << "final_position," << rep.series_b << ',' << format_double(x) << ",\n";
    for (std::size_t i = 0; i < dens.values.size(); ++i)
      out << "density,," << format_double(dens.grid.x(i)) << ','
          << format_double(dens.values[i]) << '\n';
    auto panel_path = out_dir / "final_panel.csv";
    write_text(panel_path, out.str());
    result.files.push_back(panel_path);
  }

  json diag{{"r_avg", rep.r_avg},
            {"congregation", rep.congregation},
            {"pairs_skipped", rep.pairs_skipped}};
  auto manifest = out_dir / "compare_manifest.json";
  write_manifest(manifest, "compare", hash, started, diag, result.files);
  result.files.push_back(manifest);
  return result;
}

std::string report_summary(const std::vector<std::filesystem::path>& report_paths) {
  std::ostringstream out;
  for (const auto& path : report_paths) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open report " + path.string());
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw DataError(path.string() + ": invalid report JSON: " + e.what());
    }
    out << path.string() << "\n";
    out << "  series:       " << j.value("series_a", "?") << " vs " << j.value("series_b", "?")
        << "\n";
    if (j.contains("mode_a") && !j["mode_a"].get<std::string>().empty())
      out << "  mode_a:       " << j["mode_a"].get<std::string>() << "\n";
    if (j.contains("mode_b") && !j["mode_b"].get<std::string>().empty())
      out << "  mode_b:       " << j["mode_b"].get<std::string>() << "\n";
    out << "  r_avg:        " << j.value("r_avg", 0.0) << "\n";
    if (j.contains("congregation"))
      out << "  congregation: " << j["congregation"].value("score", 0.0) << " ("
          << j["congregation"].value("method", "?") << ")\n";
    if (j.contains("diagnostics")) {
      const auto& d = j["diagnostics"];
      out << "  pairs:        " << d.value("pairs_total", 0) << " total, "
          << d.value("pairs_skipped", 0) << " skipped\n";
    }
    if (j.contains("baselines"))
      out << "  published r_avg baselines (original dataset, not reproducible): spline "
          << j["baselines"].value("r_avg_spline_published", 0.0) << ", kde "
          << j["baselines"].value("r_avg_kde_published", 0.0) << "\n";
  }
  return out.str();
}

}  // namespace weaktraj
