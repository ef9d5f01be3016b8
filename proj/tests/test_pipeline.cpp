#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "weaktraj/pipeline.hpp"

using namespace weaktraj;
using testutil::TmpDir;
using testutil::mini_config;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t file_count(const std::filesystem::path& dir) {
  std::size_t n = 0;
  for (auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file()) ++n;
  return n;
}

double endpoint_rms(const TrajectoryEnsemble& a, const TrajectoryEnsemble& b) {
  double sq = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.n_trajectories(); ++i) {
    double xa = a.positions_mm[i].back(), xb = b.positions_mm[i].back();
    if (TrajectoryEnsemble::is_masked(xa) || TrajectoryEnsemble::is_masked(xb)) continue;
    sq += (xa - xb) * (xa - xb);
    ++n;
  }
  return std::sqrt(sq / double(n));
}

}  // namespace

TEST_CASE("synthesize: file-count contract (2 planes, n=5)") {
  RunConfig c = mini_config(2, 5);
  TmpDir tmp("synth_count");
  run_synthesize(c, tmp.path());
  CHECK(file_count(tmp.path()) == 4);  // 2 frames + bohm_cdf.csv + manifest.json
  CHECK(std::filesystem::exists(tmp.path() / "frame_000.csv"));
  CHECK(std::filesystem::exists(tmp.path() / "frame_001.csv"));
  CHECK(std::filesystem::exists(tmp.path() / "bohm_cdf.csv"));
  CHECK(std::filesystem::exists(tmp.path() / "manifest.json"));
}

TEST_CASE("synthesize twice gives identical frame bytes (determinism)") {
  RunConfig c = mini_config(3, 6, 5e4);
  TmpDir a("synth_det_a"), b("synth_det_b");
  run_synthesize(c, a.path());
  run_synthesize(c, b.path());
  for (const char* f : {"frame_000.csv", "frame_001.csv", "frame_002.csv", "bohm_cdf.csv"})
    CHECK(slurp(a.path() / f) == slurp(b.path() / f));
}

TEST_CASE("synthesize output is independent of the worker count") {
  RunConfig c = mini_config(4, 5, 2e4);
  TmpDir a("jobs1"), b("jobs4");
  c.jobs = 1;
  run_synthesize(c, a.path());
  c.jobs = 4;
  run_synthesize(c, b.path());
  for (const char* f : {"frame_000.csv", "frame_003.csv", "bohm_cdf.csv"})
    CHECK(slurp(a.path() / f) == slurp(b.path() / f));
}

TEST_CASE("invalid config reports the offending fields") {
  RunConfig c = mini_config(3, 5);
  c.z_schedule_m[1] = c.z_schedule_m[2];  // not strictly increasing
  TmpDir tmp("synth_bad");
  CHECK_THROWS_WITH_AS(run_synthesize(c, tmp.path()), doctest::Contains("z_schedule"),
                       ValidationError);
}

TEST_CASE("reconstruct: missing frame errors name the z index") {
  RunConfig c = mini_config(3, 5);
  TmpDir frames("rec_missing"), out("rec_missing_out");
  run_synthesize(c, frames.path());
  std::filesystem::remove(frames.path() / "frame_001.csv");
  CHECK_THROWS_WITH_AS(run_reconstruct(c, frames.path(), out.path()), doctest::Contains("1"),
                       DataError);
}

TEST_CASE("reconstruct: hash mismatch is refused unless forced") {
  RunConfig c = mini_config(3, 12);
  TmpDir frames("rec_hash"), out("rec_hash_out");
  run_synthesize(c, frames.path());
  RunConfig other = c;
  other.sensor.noise.rng_seed += 1;  // different dataset identity
  CHECK_THROWS_WITH_AS(run_reconstruct(other, frames.path(), out.path()),
                       doctest::Contains("hash"), DataError);
  CHECK_NOTHROW(run_reconstruct(other, frames.path(), out.path(), /*force=*/true));
}

TEST_CASE("noiseless corrected+kde run reconstructs the ground truth closely") {
  RunConfig c = mini_config(9, 24, 0.0);
  TmpDir frames("rec_clean"), out("rec_clean_out");
  run_synthesize(c, frames.path());
  run_reconstruct(c, frames.path(), out.path());

  auto recon = read_ensemble_csv(out.path() / "recon_ensemble.csv");
  auto truth = read_ensemble_csv(frames.path() / "bohm_cdf.csv");
  ComparisonReport rep = ensemble_mean_r(recon, truth);
  CHECK(rep.r_avg > 0.999);
  CHECK(std::filesystem::exists(out.path() / "report.json"));
  CHECK(std::filesystem::exists(out.path() / "recon_density_final.csv"));
}

TEST_CASE("report from reconstruct and from compare are byte-identical") {
  RunConfig c = mini_config(7, 16, 3e5);
  TmpDir frames("rerun_frames"), rec("rerun_rec"), cmp("rerun_cmp");
  run_synthesize(c, frames.path());
  run_reconstruct(c, frames.path(), rec.path());
  run_compare(rec.path() / "recon_ensemble.csv", frames.path() / "bohm_cdf.csv",
              rec.path() / "recon_density_final.csv", cmp.path());
  CHECK(slurp(rec.path() / "report.json") == slurp(cmp.path() / "report.json"));
  CHECK(slurp(rec.path() / "per_pair_r.csv") == slurp(cmp.path() / "per_pair_r.csv"));

  // same property for the legacy chain, whose reference ensemble is the
  // regenerated legacy-cdfx one
  TmpDir rec2("rerun_rec_leg"), cmp2("rerun_cmp_leg");
  RunConfig leg = c;
  leg.mode = PipelineMode::all_legacy();
  run_reconstruct(leg, frames.path(), rec2.path());
  run_compare(rec2.path() / "recon_ensemble.csv", rec2.path() / "bohm_legacy_cdfx.csv",
              rec2.path() / "recon_density_final.csv", cmp2.path());
  CHECK(slurp(rec2.path() / "report.json") == slurp(cmp2.path() / "report.json"));
}

TEST_CASE("compare emits overlay and final panel plot data") {
  RunConfig c = mini_config(5, 12);
  TmpDir frames("cmp_frames"), rec("cmp_rec"), cmp("cmp_out");
  run_synthesize(c, frames.path());
  run_reconstruct(c, frames.path(), rec.path());
  run_compare(rec.path() / "recon_ensemble.csv", frames.path() / "bohm_cdf.csv",
              rec.path() / "recon_density_final.csv", cmp.path());

  std::string overlay = slurp(cmp.path() / "overlay.csv");
  CHECK(overlay.find("series,z_m,x_mm") != std::string::npos);
  CHECK(overlay.find("reconstruction,") != std::string::npos);
  CHECK(overlay.find("bohm,") != std::string::npos);

  std::string panel = slurp(cmp.path() / "final_panel.csv");
  CHECK(panel.find("kind,series,x_mm,value") != std::string::npos);
  std::size_t finals = 0, densities = 0;
  std::istringstream lines(panel);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("final_position,", 0) == 0) ++finals;
    if (line.rfind("density,", 0) == 0) ++densities;
  }
  CHECK(finals == 2 * c.n_trajectories);
  CHECK(densities >= c.sensor.n_pixels);
}

TEST_CASE("compare: incompatible ensembles and mixed hashes are rejected") {
  RunConfig c = mini_config(5, 12);
  TmpDir frames("cmp_bad"), rec("cmp_bad_rec"), cmp("cmp_bad_out");
  run_synthesize(c, frames.path());
  run_reconstruct(c, frames.path(), rec.path());

  RunConfig other = mini_config(4, 8);  // different plane count
  other.sensor.noise.rng_seed = 9;
  TmpDir frames2("cmp_bad2");
  run_synthesize(other, frames2.path());
  CHECK_THROWS_AS(run_compare(rec.path() / "recon_ensemble.csv",
                              frames2.path() / "bohm_cdf.csv",
                              rec.path() / "recon_density_final.csv", cmp.path()),
                  DataError);  // hash mismatch comes first
  // force skips the hash check but the shapes still cannot be compared
  CHECK_THROWS_AS(run_compare(rec.path() / "recon_ensemble.csv",
                              frames2.path() / "bohm_cdf.csv",
                              rec.path() / "recon_density_final.csv", cmp.path(),
                              CongregationMethod::ks, true),
                  ValidationError);
}

TEST_CASE("bohm stage writes the requested generator's ensemble") {
  RunConfig c = mini_config(5, 8);
  TmpDir out("bohm_out");
  run_bohm(c, "cdf", out.path());
  run_bohm(c, "phase", out.path());
  run_bohm(c, "cvt", out.path());
  auto cdf = read_ensemble_csv(out.path() / "bohm_cdf.csv");
  auto phase = read_ensemble_csv(out.path() / "bohm_phase.csv");
  auto cvt = read_ensemble_csv(out.path() / "bohm_cvt.csv");
  CHECK(cdf.n_trajectories() == 8);
  // three independent constructions of the same flow
  CHECK(endpoint_rms(cdf, phase) < 0.05);
  CHECK(endpoint_rms(cdf, cvt) < 0.05);
  CHECK_THROWS_AS(run_bohm(c, "nonsense", out.path()), ValidationError);
}

TEST_CASE("noiseless convergence: error shrinks monotonically over three budget decades") {
  TmpDir dirs("budget_ladder");
  std::vector<double> errors;
  for (double budget : {1e4, 1e6, 1e8}) {
    RunConfig c = mini_config(7, 16, budget);
    auto frames = synthesize_frames(c);
    auto recon = reconstruct_frames(c, frames);
    auto truth = ground_truth_ensemble(c);
    errors.push_back(endpoint_rms(recon.ensemble, truth));
  }
  CHECK(errors[1] < errors[0]);
  CHECK(errors[2] < errors[1]);
}

TEST_CASE("symmetric config reconstructs an x -> -x symmetric ensemble (noiseless)") {
  RunConfig c = mini_config(7, 14, 0.0);
  auto frames = synthesize_frames(c);
  auto recon = reconstruct_frames(c, frames);
  const std::size_t n = c.n_trajectories;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < recon.ensemble.n_planes(); ++j) {
      double a = recon.ensemble.positions_mm[i][j];
      double b = recon.ensemble.positions_mm[n - 1 - i][j];
      if (TrajectoryEnsemble::is_masked(a) || TrajectoryEnsemble::is_masked(b)) continue;
      CHECK(a == doctest::Approx(-b).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("kde mode beats spline mode on one noisy seed") {
  RunConfig c = mini_config(9, 24, 1e6);
  c.sensor.noise.rng_seed = 3;
  auto frames = synthesize_frames(c);
  auto truth = ground_truth_ensemble(c);

  c.mode = PipelineMode::parse("corrected");
  auto kde = reconstruct_frames(c, frames);
  c.mode = PipelineMode::parse("custom:smoothing=spline");
  auto spline = reconstruct_frames(c, frames);
  double r_kde = ensemble_mean_r(kde.ensemble, truth).r_avg;
  double r_spline = ensemble_mean_r(spline.ensemble, truth).r_avg;
  CHECK(r_kde > r_spline);
}
