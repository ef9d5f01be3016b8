#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "helpers.hpp"
#include "weaktraj/config.hpp"

using testutil::TmpDir;

namespace {

int run(const std::string& args) {
  std::string cmd = std::string(WEAKTRAJ_CLI_BIN) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::filesystem::path write_mini_config(const TmpDir& tmp, const std::string& out_dir) {
  weaktraj::RunConfig c = testutil::mini_config(4, 12);
  c.output_dir = out_dir;
  auto path = tmp.path() / "config.json";
  std::ofstream out(path);
  out << c.to_json_text();
  return path;
}

}  // namespace

TEST_CASE("cli: version flag") { CHECK(run("--version") == 0); }

TEST_CASE("cli: full pipeline with explicit directories and exit codes") {
  TmpDir tmp("cli_run");
  auto frames = tmp.path() / "frames";
  auto rec = tmp.path() / "rec";
  auto cmp = tmp.path() / "cmp";
  auto cfg = write_mini_config(tmp, frames.string());

  CHECK(run("synthesize --config " + cfg.string()) == 0);
  CHECK(std::filesystem::exists(frames / "manifest.json"));

  CHECK(run("reconstruct --config " + cfg.string() + " --frames " + frames.string() +
            " --out " + rec.string()) == 0);
  CHECK(std::filesystem::exists(rec / "recon_ensemble.csv"));

  CHECK(run("compare --a " + (rec / "recon_ensemble.csv").string() + " --b " +
            (frames / "bohm_cdf.csv").string() + " --density " +
            (rec / "recon_density_final.csv").string() + " --out " + cmp.string()) == 0);

  CHECK(run("report " + (cmp / "report.json").string()) == 0);
}

TEST_CASE("cli: exit codes follow the error category") {
  TmpDir tmp("cli_err");
  auto cfg_path = tmp.path() / "bad.json";
  {
    std::ofstream out(cfg_path);
    out << R"({"schema_version": 1, "z_schedule_m": [2.0, 1.0]})";
  }
  CHECK(run("synthesize --config " + cfg_path.string() + " --out " +
            (tmp.path() / "x").string()) == 2);  // validation
  CHECK(run("synthesize --config /no/such/config.json") == 5);  // io
  auto good = write_mini_config(tmp, (tmp.path() / "frames").string());
  CHECK(run("reconstruct --config " + good.string() + " --frames " +
            (tmp.path() / "empty").string() + " --out " + (tmp.path() / "r").string()) == 3);
}

TEST_CASE("cli: WEAKTRAJ_OUT overrides the config output directory") {
  TmpDir tmp("cli_env");
  auto env_dir = tmp.path() / "env_out";
  auto cfg = write_mini_config(tmp, (tmp.path() / "ignored").string());
  std::string cmd = "WEAKTRAJ_OUT=" + env_dir.string() + " " + WEAKTRAJ_CLI_BIN +
                    " synthesize --config " + cfg.string() + " >/dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(std::filesystem::exists(env_dir / "manifest.json"));
  CHECK(!std::filesystem::exists(tmp.path() / "ignored"));
}

TEST_CASE("cli: legacy mode flag flows through to the report") {
  TmpDir tmp("cli_mode");
  auto frames = tmp.path() / "frames";
  auto rec = tmp.path() / "rec";
  auto cfg = write_mini_config(tmp, frames.string());
  CHECK(run("synthesize --config " + cfg.string()) == 0);
  CHECK(run("reconstruct --config " + cfg.string() + " --frames " + frames.string() +
            " --out " + rec.string() + " --mode legacy") == 0);
  std::ifstream in(rec / "report.json");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("legacy_cdfx") != std::string::npos);
  CHECK(text.find("legacy_tan") != std::string::npos);
}
