#include "weaktraj.h"

#include <cstring>
#include <string>

#include "weaktraj/pipeline.hpp"
#include "weaktraj/version.hpp"

namespace {

thread_local std::string t_last_error;

weaktraj_status to_status(const weaktraj::Error& e) {
  switch (e.category()) {
    case weaktraj::ErrorCategory::validation:
      return WEAKTRAJ_E_VALIDATION;
    case weaktraj::ErrorCategory::data:
      return WEAKTRAJ_E_DATA;
    case weaktraj::ErrorCategory::numeric:
      return WEAKTRAJ_E_NUMERIC;
    case weaktraj::ErrorCategory::io:
      return WEAKTRAJ_E_IO;
  }
  return WEAKTRAJ_E_VALIDATION;
}

template <class Fn>
weaktraj_status guarded(Fn&& fn) {
  try {
    fn();
    t_last_error.clear();
    return WEAKTRAJ_OK;
  } catch (const weaktraj::Error& e) {
    t_last_error = e.what();
    return to_status(e);
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return WEAKTRAJ_E_NUMERIC;
  } catch (...) {
    t_last_error = "unknown error";
    return WEAKTRAJ_E_NUMERIC;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct weaktraj_config {
  weaktraj::RunConfig cfg;
};

namespace {
const char* or_default(const char* dir, const weaktraj_config* cfg) {
  return dir && *dir ? dir : cfg->cfg.output_dir.c_str();
}
}  // namespace

extern "C" {

const char* weaktraj_version(void) { return weaktraj::kVersion; }

const char* weaktraj_last_error(void) { return t_last_error.c_str(); }

weaktraj_status weaktraj_config_create_standard(weaktraj_config** out) {
  return guarded([&] { *out = new weaktraj_config{weaktraj::RunConfig::standard()}; });
}

weaktraj_status weaktraj_config_create_default(weaktraj_config** out) {
  return guarded([&] { *out = new weaktraj_config{weaktraj::RunConfig::defaults()}; });
}

weaktraj_status weaktraj_config_load(const char* path, weaktraj_config** out) {
  return guarded([&] {
    if (!path) throw weaktraj::ValidationError("config_load: path is null");
    *out = new weaktraj_config{weaktraj::RunConfig::load(path)};
  });
}

weaktraj_status weaktraj_config_parse(const char* json_text, weaktraj_config** out) {
  return guarded([&] {
    if (!json_text) throw weaktraj::ValidationError("config_parse: text is null");
    *out = new weaktraj_config{weaktraj::RunConfig::from_json_text(json_text)};
  });
}

void weaktraj_config_free(weaktraj_config* cfg) { delete cfg; }

weaktraj_status weaktraj_config_validate(const weaktraj_config* cfg) {
  return guarded([&] { cfg->cfg.validate(); });
}

weaktraj_status weaktraj_config_set_mode(weaktraj_config* cfg, const char* mode_spec) {
  return guarded([&] {
    if (!mode_spec) throw weaktraj::ValidationError("set_mode: spec is null");
    cfg->cfg.mode = weaktraj::PipelineMode::parse(mode_spec);
  });
}

weaktraj_status weaktraj_config_set_seed(weaktraj_config* cfg, unsigned long long seed) {
  return guarded([&] { cfg->cfg.sensor.noise.rng_seed = seed; });
}

weaktraj_status weaktraj_config_set_jobs(weaktraj_config* cfg, int jobs) {
  return guarded([&] {
    if (jobs < 0) throw weaktraj::ValidationError("set_jobs: jobs must be >= 0");
    cfg->cfg.jobs = jobs;
  });
}

weaktraj_status weaktraj_config_set_output_dir(weaktraj_config* cfg, const char* dir) {
  return guarded([&] {
    if (!dir || !*dir) throw weaktraj::ValidationError("set_output_dir: dir is empty");
    cfg->cfg.output_dir = dir;
  });
}

weaktraj_status weaktraj_config_hash(const weaktraj_config* cfg, char* buf, size_t buf_len) {
  return guarded([&] {
    std::string h = cfg->cfg.dataset_hash();
    if (buf_len < h.size() + 1)
      throw weaktraj::ValidationError("config_hash: buffer must hold at least 17 bytes");
    std::memcpy(buf, h.c_str(), h.size() + 1);
  });
}

weaktraj_status weaktraj_config_to_json(const weaktraj_config* cfg, char** out_json) {
  return guarded([&] { *out_json = dup_string(cfg->cfg.to_json_text()); });
}

const char* weaktraj_config_output_dir(const weaktraj_config* cfg) {
  return cfg->cfg.output_dir.c_str();
}

void weaktraj_string_free(char* s) { delete[] s; }

weaktraj_status weaktraj_synthesize(const weaktraj_config* cfg, const char* out_dir) {
  return guarded([&] { weaktraj::run_synthesize(cfg->cfg, or_default(out_dir, cfg)); });
}

weaktraj_status weaktraj_reconstruct(const weaktraj_config* cfg, const char* frames_dir,
                                     const char* out_dir, int force) {
  return guarded([&] {
    if (!frames_dir) throw weaktraj::ValidationError("reconstruct: frames_dir is null");
    weaktraj::run_reconstruct(cfg->cfg, frames_dir, or_default(out_dir, cfg), force != 0);
  });
}

weaktraj_status weaktraj_bohm(const weaktraj_config* cfg, const char* method,
                              const char* out_dir) {
  return guarded([&] {
    weaktraj::run_bohm(cfg->cfg, method ? method : "cdf", or_default(out_dir, cfg));
  });
}

weaktraj_status weaktraj_compare(const char* ensemble_a_csv, const char* ensemble_b_csv,
                                 const char* density_csv, const char* out_dir,
                                 const char* congregation_method, int force) {
  return guarded([&] {
    if (!ensemble_a_csv || !ensemble_b_csv || !density_csv || !out_dir)
      throw weaktraj::ValidationError("compare: ensemble, density and output paths are required");
    weaktraj::CongregationMethod method = weaktraj::CongregationMethod::ks;
    if (congregation_method && *congregation_method) {
      std::string m = congregation_method;
      if (m == "ks") method = weaktraj::CongregationMethod::ks;
      else if (m == "l1") method = weaktraj::CongregationMethod::l1_histogram;
      else throw weaktraj::ValidationError("compare: congregation method must be ks|l1");
    }
    weaktraj::run_compare(ensemble_a_csv, ensemble_b_csv, density_csv, out_dir, method,
                          force != 0);
  });
}

weaktraj_status weaktraj_report_summary(const char* const* report_paths, size_t n_reports,
                                        char** out_text) {
  return guarded([&] {
    if (!report_paths || n_reports == 0)
      throw weaktraj::ValidationError("report: need at least one report path");
    std::vector<std::filesystem::path> paths;
    for (size_t i = 0; i < n_reports; ++i) paths.emplace_back(report_paths[i]);
    *out_text = dup_string(weaktraj::report_summary(paths));
  });
}

}  // extern "C"
