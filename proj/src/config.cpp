#include "weaktraj/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "weaktraj/version.hpp"

namespace weaktraj {

using nlohmann::json;

double SensorConfig::magnification_for_plane(std::size_t j) const {
  if (magnifications.empty()) return 1.0;
  if (magnifications.size() == 1) return magnifications[0];
  if (j >= magnifications.size())
    throw ValidationError("sensor: no magnification entry for plane " + std::to_string(j));
  return magnifications[j];
}

void RunConfig::validate() const {
  std::vector<std::string> problems;
  auto check = [&](bool ok, const std::string& msg) {
    if (!ok) problems.push_back(msg);
  };

  check(schema_version == kConfigSchemaVersion,
        "schema_version: expected " + std::to_string(kConfigSchemaVersion));
  try {
    slit.validate();
  } catch (const Error& e) {
    problems.push_back(e.what());
  }
  try {
    grid.validate();
  } catch (const Error& e) {
    problems.push_back(e.what());
  }
  check(z_schedule_m.size() >= 2, "z_schedule: need at least 2 planes");
  for (std::size_t j = 1; j < z_schedule_m.size(); ++j)
    if (!(z_schedule_m[j] > z_schedule_m[j - 1])) {
      problems.push_back("z_schedule: not strictly increasing at index " + std::to_string(j));
      break;
    }
  if (!z_schedule_m.empty())
    check(z_schedule_m.front() >= 0.0, "z_schedule: z must be >= 0");
  check(sensor.pixel_pitch_um > 0.0, "sensor: pixel pitch must be > 0");
  check(sensor.magnifications.size() <= 1 || sensor.magnifications.size() == z_schedule_m.size(),
        "sensor: magnifications must be one value or one per z plane");
  for (double m : sensor.magnifications)
    if (!(m > 0.0)) {
      problems.push_back("sensor: magnifications must be > 0");
      break;
    }
  try {
    sensor.noise.validate();
  } catch (const Error& e) {
    problems.push_back(e.what());
  }
  try {
    zeta.validate();
  } catch (const Error& e) {
    problems.push_back(e.what());
  }
  check(n_trajectories >= 1, "n_trajectories: must be >= 1");
  check(jobs >= 0, "jobs: must be >= 0");
  check(!output_dir.empty(), "output_dir: must not be empty");

  if (!problems.empty()) {
    std::string msg = "invalid config:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw ValidationError(msg);
  }
}

namespace {

json dataset_json(const RunConfig& c) {
  // canonical dataset identity; keys sort deterministically in nlohmann
  json j;
  j["schema_version"] = c.schema_version;
  j["slit"] = {{"sigma_mm", c.slit.slit_sigma_mm},
               {"separation_mm", c.slit.slit_separation_mm},
               {"wavelength_nm", c.slit.wavelength_nm},
               {"amplitude_ratio", c.slit.amplitude_ratio},
               {"relative_phase_rad", c.slit.relative_phase_rad}};
  j["grid"] = {{"x_min_mm", c.grid.x_min_mm},
               {"x_max_mm", c.grid.x_max_mm},
               {"n_points", c.grid.n_points}};
  j["z_schedule_m"] = c.z_schedule_m;
  j["sensor"] = {{"pixel_pitch_um", c.sensor.pixel_pitch_um},
                 {"n_pixels", c.sensor.n_pixels},
                 {"magnifications", c.sensor.magnifications},
                 {"photon_budget", c.sensor.noise.photon_budget},
                 {"background_level", c.sensor.noise.background_level},
                 {"rng_seed", c.sensor.noise.rng_seed}};
  j["zeta"] = c.zeta.zeta;
  j["n_trajectories"] = c.n_trajectories;
  return j;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::string RunConfig::dataset_hash() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                (unsigned long long)fnv1a(dataset_json(*this).dump()));
  return buf;
}

std::string RunConfig::to_json_text() const {
  json j = dataset_json(*this);
  j["mode"] = mode.to_string();
  j["output_dir"] = output_dir;
  j["jobs"] = jobs;
  return j.dump(2) + "\n";
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("config: invalid JSON: ") + e.what());
  }
  RunConfig c;
  try {
    c.schema_version = j.value("schema_version", kConfigSchemaVersion);
    if (j.contains("slit")) {
      const auto& s = j["slit"];
      c.slit.slit_sigma_mm = s.value("sigma_mm", c.slit.slit_sigma_mm);
      c.slit.slit_separation_mm = s.value("separation_mm", c.slit.slit_separation_mm);
      c.slit.wavelength_nm = s.value("wavelength_nm", c.slit.wavelength_nm);
      c.slit.amplitude_ratio = s.value("amplitude_ratio", c.slit.amplitude_ratio);
      c.slit.relative_phase_rad = s.value("relative_phase_rad", c.slit.relative_phase_rad);
    }
    if (j.contains("grid")) {
      const auto& g = j["grid"];
      c.grid.x_min_mm = g.value("x_min_mm", 0.0);
      c.grid.x_max_mm = g.value("x_max_mm", 0.0);
      c.grid.n_points = g.value("n_points", std::size_t(0));
    }
    c.z_schedule_m = j.value("z_schedule_m", std::vector<double>{});
    if (j.contains("sensor")) {
      const auto& s = j["sensor"];
      c.sensor.pixel_pitch_um = s.value("pixel_pitch_um", 26.0);
      c.sensor.n_pixels = s.value("n_pixels", std::size_t(0));
      if (s.contains("magnifications"))
        c.sensor.magnifications = s["magnifications"].get<std::vector<double>>();
      else if (s.contains("magnification"))
        c.sensor.magnifications = {s["magnification"].get<double>()};
      c.sensor.noise.photon_budget = s.value("photon_budget", 0.0);
      c.sensor.noise.background_level = s.value("background_level", 0.0);
      c.sensor.noise.rng_seed = s.value("rng_seed", std::uint64_t(0));
    }
    c.zeta.zeta = j.value("zeta", 373.5);
    if (j.contains("mode")) {
      if (j["mode"].is_string()) {
        std::string m = j["mode"].get<std::string>();
        c.mode = (m == "corrected" || m == "legacy" || m.rfind("custom:", 0) == 0)
                     ? PipelineMode::parse(m)
                     : PipelineMode::parse("custom:" + m);
      } else {
        throw DataError("config: mode must be a string");
      }
    }
    c.n_trajectories = j.value("n_trajectories", std::size_t(80));
    c.output_dir = j.value("output_dir", std::string("out"));
    c.jobs = j.value("jobs", 1);
  } catch (const json::exception& e) {
    throw DataError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.slit = SlitConfig{};  // 0.3 mm sigma, 4.7 mm separation, 943 nm
  // +-10 mm keeps zeta * kxk inside the arcsin branch at the nearest plane
  c.grid = Grid{-10.0, 10.0, 4096};
  c.z_schedule_m.resize(41);
  for (std::size_t j = 0; j < 41; ++j) c.z_schedule_m[j] = 2.0 + 0.1 * double(j);
  c.sensor.pixel_pitch_um = 26.0;
  c.sensor.n_pixels = 0;
  c.sensor.magnifications = {1.0};
  c.sensor.noise = NoiseConfig{1e6, 5.0, 1};
  c.zeta = CouplingConstant{373.5};
  c.n_trajectories = 80;
  return c;
}

RunConfig RunConfig::standard() {
  RunConfig c;
  c.slit.slit_sigma_mm = 0.09;
  c.slit.slit_separation_mm = 0.45;
  c.slit.wavelength_nm = 943.0;
  c.slit.amplitude_ratio = 1.0;
  c.slit.relative_phase_rad = 0.0;

  const std::size_t n_planes = 41;
  c.z_schedule_m.resize(n_planes);
  for (std::size_t j = 0; j < n_planes; ++j)
    c.z_schedule_m[j] = 3.0 + 2.5 * double(j) / double(n_planes - 1);

  // sensor window tracks the envelope at +-4.4 sigma-hat via per-plane
  // magnification, keeping the angular coverage (and so zeta * kxk at the
  // window edge) constant across the schedule
  c.sensor.pixel_pitch_um = 26.0;
  c.sensor.n_pixels = 2000;
  c.sensor.magnifications.resize(n_planes);
  const double pitch_mm = c.sensor.pixel_pitch_um * 1e-3;
  for (std::size_t j = 0; j < n_planes; ++j) {
    double half_window = 4.4 * c.slit.envelope_sigma_mm(c.z_schedule_m[j]);
    c.sensor.magnifications[j] = 2.0 * half_window / (double(c.sensor.n_pixels) * pitch_mm);
  }
  double grid_half = 4.7 * c.slit.envelope_sigma_mm(c.z_schedule_m.back());
  c.grid = Grid{-grid_half, grid_half, 4096};
  c.sensor.noise = NoiseConfig{1e6, 5.0, 1};
  c.zeta = CouplingConstant{373.5};
  c.n_trajectories = 80;
  return c;
}

}  // namespace weaktraj
