// weaktraj command line: synthesize / reconstruct / bohm / compare / report
// over the shared-library C API.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weaktraj.h"

namespace {

int fail(weaktraj_status status) {
  std::cerr << "error: " << weaktraj_last_error() << "\n";
  return int(status);
}

struct ConfigHandle {
  weaktraj_config* ptr = nullptr;
  ~ConfigHandle() { weaktraj_config_free(ptr); }
};

/// Loads the config (or the built-in standard one) and applies the common
/// flag overrides. Returns WEAKTRAJ_OK or the failing status.
weaktraj_status make_config(ConfigHandle& handle, const std::string& config_path,
                            const std::string& mode, long long seed, int jobs) {
  weaktraj_status st = config_path.empty()
                           ? weaktraj_config_create_standard(&handle.ptr)
                           : weaktraj_config_load(config_path.c_str(), &handle.ptr);
  if (st != WEAKTRAJ_OK) return st;
  if (!mode.empty()) {
    st = weaktraj_config_set_mode(handle.ptr, mode.c_str());
    if (st != WEAKTRAJ_OK) return st;
  }
  if (seed >= 0) {
    st = weaktraj_config_set_seed(handle.ptr, (unsigned long long)seed);
    if (st != WEAKTRAJ_OK) return st;
  }
  if (jobs >= 0) {
    st = weaktraj_config_set_jobs(handle.ptr, jobs);
    if (st != WEAKTRAJ_OK) return st;
  }
  return WEAKTRAJ_OK;
}

/// Output directory precedence: --out flag, then WEAKTRAJ_OUT, then the
/// config's output_dir (empty string falls through inside the library).
std::string resolve_out(const std::string& flag_out) {
  if (!flag_out.empty()) return flag_out;
  const char* env = std::getenv("WEAKTRAJ_OUT");
  return env ? env : "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weak-measurement photon trajectory toolkit"};
  app.set_version_flag("--version", std::string(weaktraj_version()));
  app.require_subcommand(1);

  std::string config_path, mode, out, frames_dir;
  long long seed = -1;
  int jobs = -1;
  bool force = false;

  auto add_common = [&](CLI::App* cmd, bool with_mode) {
    cmd->add_option("--config", config_path, "JSON run configuration (default: built-in standard)");
    cmd->add_option("--out", out, "output directory (overrides WEAKTRAJ_OUT and the config)");
    cmd->add_option("--seed", seed, "override the RNG seed");
    cmd->add_option("--jobs", jobs, "parallel workers per stage (0 = all cores)");
    if (with_mode)
      cmd->add_option("--mode", mode, "pipeline mode: corrected|legacy|custom:key=value,...");
  };

  auto* synth = app.add_subcommand("synthesize", "generate frames and ground-truth Bohm data");
  add_common(synth, false);

  auto* recon = app.add_subcommand("reconstruct", "reconstruct trajectories from frames");
  add_common(recon, true);
  recon->add_option("--frames", frames_dir, "directory holding frame_###.csv")->required();
  recon->add_flag("--force", force, "accept artifacts with mismatched config hashes");

  auto* bohm = app.add_subcommand("bohm", "generate reference Bohm trajectories");
  add_common(bohm, false);
  std::string method = "cdf";
  bohm->add_option("--method", method, "cdf|phase|cvt (default cdf)");

  auto* compare = app.add_subcommand("compare", "compare two trajectory ensembles");
  std::string ens_a, ens_b, density_path, congregation = "ks";
  compare->add_option("--a", ens_a, "first ensemble CSV (the reconstruction)")->required();
  compare->add_option("--b", ens_b, "second ensemble CSV (the reference)")->required();
  compare->add_option("--density", density_path, "density CSV for the congregation score")
      ->required();
  compare->add_option("--out", out, "output directory")->required();
  compare->add_option("--congregation", congregation, "congregation statistic: ks|l1");
  compare->add_flag("--force", force, "accept artifacts with mismatched config hashes");

  auto* report = app.add_subcommand("report", "print a summary of report.json files");
  std::vector<std::string> report_files;
  report->add_option("reports", report_files, "report JSON paths")->required();

  CLI11_PARSE(app, argc, argv);

  if (synth->parsed() || recon->parsed() || bohm->parsed()) {
    ConfigHandle cfg;
    weaktraj_status st = make_config(cfg, config_path, mode, seed, jobs);
    if (st != WEAKTRAJ_OK) return fail(st);
    std::string out_dir = resolve_out(out);
    const char* out_arg = out_dir.empty() ? nullptr : out_dir.c_str();

    if (synth->parsed())
      st = weaktraj_synthesize(cfg.ptr, out_arg);
    else if (recon->parsed())
      st = weaktraj_reconstruct(cfg.ptr, frames_dir.c_str(), out_arg, force ? 1 : 0);
    else
      st = weaktraj_bohm(cfg.ptr, method.c_str(), out_arg);
    if (st != WEAKTRAJ_OK) return fail(st);
    const char* shown = out_arg ? out_arg : weaktraj_config_output_dir(cfg.ptr);
    std::cout << (synth->parsed() ? "synthesize" : recon->parsed() ? "reconstruct" : "bohm")
              << ": wrote " << shown << "\n";
    return 0;
  }

  if (compare->parsed()) {
    std::string out_dir = resolve_out(out);
    weaktraj_status st =
        weaktraj_compare(ens_a.c_str(), ens_b.c_str(), density_path.c_str(),
                         out_dir.empty() ? out.c_str() : out_dir.c_str(), congregation.c_str(),
                         force ? 1 : 0);
    if (st != WEAKTRAJ_OK) return fail(st);
    std::cout << "compare: wrote " << (out_dir.empty() ? out : out_dir) << "\n";
    return 0;
  }

  // report
  std::vector<const char*> paths;
  for (const auto& p : report_files) paths.push_back(p.c_str());
  char* text = nullptr;
  weaktraj_status st = weaktraj_report_summary(paths.data(), paths.size(), &text);
  if (st != WEAKTRAJ_OK) return fail(st);
  std::cout << text;
  weaktraj_string_free(text);
  return 0;
}
