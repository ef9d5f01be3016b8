#include "weaktraj/reconstruction.hpp"

#include <cmath>

#include "weaktraj/interp.hpp"

namespace weaktraj {

namespace {

PchipInterpolant unmasked_interpolant(const SlopeCurve& slope) {
  std::vector<double> xs, ys;
  xs.reserve(slope.size());
  for (std::size_t i = 0; i < slope.size(); ++i) {
    if (!slope.masked[i]) {
      xs.push_back(slope.x_mm[i]);
      ys.push_back(slope.value[i]);
    }
  }
  if (xs.size() < 4) throw DataError("interpolate_slope: fewer than 4 unmasked samples");
  return PchipInterpolant(std::move(xs), std::move(ys), 0.0);
}

std::string name_of(PipelineMode::Normalization v) {
  return v == PipelineMode::Normalization::corrected ? "corrected" : "legacy";
}
std::string name_of(MomentumMode v) {
  return v == MomentumMode::corrected ? "corrected" : "legacy_tan";
}
std::string name_of(SlopeMode v) {
  return v == SlopeMode::corrected ? "corrected" : "legacy_direct";
}
std::string name_of(SmoothingMethod v) { return v == SmoothingMethod::kde ? "kde" : "spline"; }
std::string name_of(BohmInterp v) {
  return v == BohmInterp::corrected_cdfx_wise ? "corrected_cdfxWise" : "legacy_cdfx";
}

}  // namespace

PipelineMode PipelineMode::all_corrected() { return PipelineMode{}; }

PipelineMode PipelineMode::all_legacy() {
  PipelineMode m;
  m.normalization = Normalization::legacy;
  m.momentum = MomentumMode::legacy_tan;
  m.update = SlopeMode::legacy_direct;
  m.smoothing = SmoothingMethod::spline;
  m.bohm_interp = BohmInterp::legacy_cdfx;
  return m;
}

PipelineMode PipelineMode::parse(const std::string& mode_text) {
  if (mode_text == "corrected") return all_corrected();
  if (mode_text == "legacy") return all_legacy();
  const std::string prefix = "custom:";
  if (mode_text.rfind(prefix, 0) != 0)
    throw ValidationError("mode: expected 'corrected', 'legacy', or 'custom:key=value,...', got '" +
                          mode_text + "'");
  PipelineMode m = all_corrected();
  std::string rest = mode_text.substr(prefix.size());
  std::size_t pos = 0;
  while (pos < rest.size()) {
    std::size_t end = rest.find(',', pos);
    if (end == std::string::npos) end = rest.size();
    std::string item = rest.substr(pos, end - pos);
    pos = end + 1;
    std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("mode: expected key=value, got '" + item + "'");
    std::string key = item.substr(0, eq);
    std::string val = item.substr(eq + 1);
    if (key == "normalization") {
      if (val == "corrected") m.normalization = Normalization::corrected;
      else if (val == "legacy") m.normalization = Normalization::legacy;
      else throw ValidationError("mode: normalization must be corrected|legacy");
    } else if (key == "momentum") {
      if (val == "corrected") m.momentum = MomentumMode::corrected;
      else if (val == "legacy_tan") m.momentum = MomentumMode::legacy_tan;
      else throw ValidationError("mode: momentum must be corrected|legacy_tan");
    } else if (key == "update") {
      if (val == "corrected") m.update = SlopeMode::corrected;
      else if (val == "legacy_direct") m.update = SlopeMode::legacy_direct;
      else throw ValidationError("mode: update must be corrected|legacy_direct");
    } else if (key == "smoothing") {
      if (val == "kde") m.smoothing = SmoothingMethod::kde;
      else if (val == "spline") m.smoothing = SmoothingMethod::spline;
      else throw ValidationError("mode: smoothing must be kde|spline");
    } else if (key == "bohm_interp") {
      if (val == "corrected_cdfxWise") m.bohm_interp = BohmInterp::corrected_cdfx_wise;
      else if (val == "legacy_cdfx") m.bohm_interp = BohmInterp::legacy_cdfx;
      else throw ValidationError("mode: bohm_interp must be corrected_cdfxWise|legacy_cdfx");
    } else {
      throw ValidationError("mode: unknown key '" + key + "'");
    }
  }
  return m;
}

std::string PipelineMode::to_string() const {
  return "normalization=" + name_of(normalization) + ",momentum=" + name_of(momentum) +
         ",update=" + name_of(update) + ",smoothing=" + name_of(smoothing) +
         ",bohm_interp=" + name_of(bohm_interp);
}

double interpolate_slope(const SlopeCurve& slope, double x_mm) {
  return unmasked_interpolant(slope)(x_mm);
}

double advance(double x_mm, double dz_m, const SlopeCurve& slope) {
  if (!(dz_m > 0.0)) throw ValidationError("advance: dz must be > 0");
  return x_mm + dz_m * 1000.0 * interpolate_slope(slope, x_mm);
}

TrajectoryEnsemble reconstruct_ensemble(const std::vector<SlopeCurve>& slopes,
                                        const QuantileSeeds& seeds,
                                        ReconstructionDiagnostics* diagnostics) {
  seeds.validate();
  TrajectoryEnsemble ens;
  ens.z_levels_m.reserve(slopes.size());
  for (const auto& s : slopes) ens.z_levels_m.push_back(s.z_m);
  if (ens.z_levels_m.size() < 2) throw ValidationError("reconstruct: need >= 2 slope planes");
  for (std::size_t j = 1; j < ens.z_levels_m.size(); ++j)
    if (!(ens.z_levels_m[j] > ens.z_levels_m[j - 1]))
      throw ValidationError("reconstruct: slope planes must be z-ordered");

  const std::size_t n_planes = slopes.size();
  std::vector<PchipInterpolant> fns;
  fns.reserve(n_planes);
  std::vector<double> win_lo(n_planes), win_hi(n_planes);
  for (std::size_t j = 0; j < n_planes; ++j) {
    fns.push_back(unmasked_interpolant(slopes[j]));
    win_lo[j] = slopes[j].x_mm.front();
    win_hi[j] = slopes[j].x_mm.back();
  }
  ReconstructionDiagnostics local;
  ReconstructionDiagnostics& diag = diagnostics ? *diagnostics : local;

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
      if (x < fns[j].x_front() || x > fns[j].x_back()) ++diag.out_of_range_steps;
      double dz_mm = (ens.z_levels_m[j + 1] - ens.z_levels_m[j]) * 1000.0;
      double x_next = x + dz_mm * fns[j](x);
      if (x_next < win_lo[j + 1] || x_next > win_hi[j + 1]) {
        truncated = true;
        ens.positions_mm[i][j + 1] = std::nan("");
        continue;
      }
      x = x_next;
      ens.positions_mm[i][j + 1] = x;
    }
    if (truncated) ++ens.truncated_count;
  }
  diag.truncated = ens.truncated_count;
  return ens;
}

}  // namespace weaktraj
