#include "weaktraj/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace weaktraj {

namespace {

std::string join(const std::vector<std::string>& cols) {
  std::string line;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) line += ',';
    line += cols[i];
  }
  return line;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    std::size_t end = line.find(',', pos);
    if (end == std::string::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, end - pos));
    pos = end + 1;
  }
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DataError(path.string() + ": cannot parse number '" + s + "'");
  return v;
}

struct CsvDoc {
  CsvHeader header;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

CsvDoc read_doc(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  CsvDoc doc;
  std::string line;
  bool have_columns = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      std::size_t start = body.find_first_not_of(' ');
      if (start == std::string::npos) continue;
      body = body.substr(start);
      std::size_t eq = body.find('=');
      if (eq != std::string::npos)
        doc.header.emplace_back(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    if (!have_columns) {
      doc.columns = split(line);
      have_columns = true;
      continue;
    }
    doc.rows.push_back(split(line));
  }
  if (!have_columns) throw DataError(path.string() + ": no column header found");
  return doc;
}

void expect_columns(const CsvDoc& doc, const std::vector<std::string>& expected,
                    const std::filesystem::path& path) {
  if (doc.columns != expected)
    throw DataError(path.string() + ": unexpected columns '" + join(doc.columns) +
                    "', expected '" + join(expected) + "'");
}

class Writer {
public:
  explicit Writer(const std::filesystem::path& path) : path_(path), out_(path) {
    if (!out_) throw IoError("cannot write " + path.string());
  }
  void header(const CsvHeader& h) {
    for (const auto& [k, v] : h) out_ << "# " << k << '=' << v << '\n';
  }
  void columns(const std::vector<std::string>& cols) { out_ << join(cols) << '\n'; }
  void row(const std::vector<std::string>& cells) { out_ << join(cells) << '\n'; }
  void close() {
    out_.close();
    if (!out_) throw IoError("write failed for " + path_.string());
  }

private:
  std::filesystem::path path_;
  std::ofstream out_;
};

double header_double(const CsvHeader& h, const std::string& key,
                     const std::filesystem::path& path) {
  std::string v = header_value(h, key);
  if (v.empty()) throw DataError(path.string() + ": missing header '" + key + "'");
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc()) throw DataError(path.string() + ": bad header value for '" + key + "'");
  return out;
}

}  // namespace

std::string header_value(const CsvHeader& header, const std::string& key) {
  for (const auto& [k, v] : header)
    if (k == key) return v;
  return {};
}

bool has_header(const CsvHeader& header, const std::string& key) {
  for (const auto& [k, v] : header)
    if (k == key) return true;
  return false;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_density_csv(const std::filesystem::path& path, const DensityCurve& density,
                       const CsvHeader& extra) {
  Writer w(path);
  CsvHeader h{{"z_m", format_double(density.z_m)}};
  h.insert(h.end(), extra.begin(), extra.end());
  w.header(h);
  w.columns({"x_mm", "density"});
  for (std::size_t i = 0; i < density.values.size(); ++i)
    w.row({format_double(density.grid.x(i)), format_double(density.values[i])});
  w.close();
}

DensityCurve read_density_csv(const std::filesystem::path& path, CsvHeader* header) {
  CsvDoc doc = read_doc(path);
  expect_columns(doc, {"x_mm", "density"}, path);
  if (doc.rows.size() < 2) throw DataError(path.string() + ": need >= 2 density rows");
  DensityCurve d;
  d.z_m = header_double(doc.header, "z_m", path);
  std::vector<double> xs;
  for (const auto& r : doc.rows) {
    xs.push_back(parse_double(r[0], path));
    d.values.push_back(parse_double(r[1], path));
  }
  d.grid = Grid{xs.front(), xs.back(), xs.size()};
  if (header) *header = std::move(doc.header);
  return d;
}

void write_field_csv(const std::filesystem::path& path, const FieldSlice& field,
                     const CsvHeader& extra) {
  Writer w(path);
  CsvHeader h{{"z_m", format_double(field.z_m)}};
  h.insert(h.end(), extra.begin(), extra.end());
  w.header(h);
  w.columns({"x_mm", "re", "im"});
  for (std::size_t i = 0; i < field.amplitude.size(); ++i)
    w.row({format_double(field.grid.x(i)), format_double(field.amplitude[i].real()),
           format_double(field.amplitude[i].imag())});
  w.close();
}

FieldSlice read_field_csv(const std::filesystem::path& path, CsvHeader* header) {
  CsvDoc doc = read_doc(path);
  expect_columns(doc, {"x_mm", "re", "im"}, path);
  if (doc.rows.size() < 2) throw DataError(path.string() + ": need >= 2 field rows");
  FieldSlice f;
  f.z_m = header_double(doc.header, "z_m", path);
  std::vector<double> xs;
  for (const auto& r : doc.rows) {
    xs.push_back(parse_double(r[0], path));
    f.amplitude.emplace_back(parse_double(r[1], path), parse_double(r[2], path));
  }
  f.grid = Grid{xs.front(), xs.back(), xs.size()};
  if (header) *header = std::move(doc.header);
  return f;
}

void write_frame_csv(const std::filesystem::path& path, const PixelImage& img,
                     const CsvHeader& extra) {
  Writer w(path);
  CsvHeader h{{"z_m", format_double(img.z_m)},
              {"pitch_um", format_double(img.pixel_pitch_um)},
              {"magnification", format_double(img.magnification)},
              {"rng", img.rng_id}};
  h.insert(h.end(), extra.begin(), extra.end());
  w.header(h);
  w.columns({"pixel_index", "x_mm", "counts_R", "counts_L"});
  for (std::size_t i = 0; i < img.size(); ++i)
    w.row({std::to_string(i), format_double(img.pixel_centers_mm[i]),
           format_double(img.counts_r[i]), format_double(img.counts_l[i])});
  w.close();
}

PixelImage read_frame_csv(const std::filesystem::path& path, CsvHeader* header) {
  CsvDoc doc = read_doc(path);
  expect_columns(doc, {"pixel_index", "x_mm", "counts_R", "counts_L"}, path);
  if (doc.rows.size() < 2) throw DataError(path.string() + ": need >= 2 pixel rows");
  PixelImage img;
  img.z_m = header_double(doc.header, "z_m", path);
  img.pixel_pitch_um = header_double(doc.header, "pitch_um", path);
  img.magnification = header_double(doc.header, "magnification", path);
  img.rng_id = header_value(doc.header, "rng");
  for (const auto& r : doc.rows) {
    img.pixel_centers_mm.push_back(parse_double(r[1], path));
    img.counts_r.push_back(parse_double(r[2], path));
    img.counts_l.push_back(parse_double(r[3], path));
  }
  if (header) *header = std::move(doc.header);
  return img;
}

namespace {

template <class Curve>
void write_masked_curve(const std::filesystem::path& path, const Curve& curve,
                        const CsvHeader& extra) {
  Writer w(path);
  CsvHeader h{{"z_m", format_double(curve.z_m)}};
  h.insert(h.end(), extra.begin(), extra.end());
  w.header(h);
  w.columns({"x_mm", "value", "mask_flag", "clamp_flag"});
  for (std::size_t i = 0; i < curve.size(); ++i)
    w.row({format_double(curve.x_mm[i]), format_double(curve.value[i]),
           std::to_string(int(curve.masked[i])), std::to_string(int(curve.clamped[i]))});
  w.close();
}

template <class Curve>
Curve read_masked_curve(const std::filesystem::path& path, CsvHeader* header) {
  CsvDoc doc = read_doc(path);
  expect_columns(doc, {"x_mm", "value", "mask_flag", "clamp_flag"}, path);
  Curve c;
  c.z_m = header_double(doc.header, "z_m", path);
  for (const auto& r : doc.rows) {
    c.x_mm.push_back(parse_double(r[0], path));
    c.value.push_back(parse_double(r[1], path));
    c.masked.push_back(std::uint8_t(parse_double(r[2], path) != 0.0));
    c.clamped.push_back(std::uint8_t(parse_double(r[3], path) != 0.0));
  }
  if (header) *header = std::move(doc.header);
  return c;
}

}  // namespace

void write_curve_csv(const std::filesystem::path& path, const SlopeCurve& curve,
                     const CsvHeader& extra) {
  write_masked_curve(path, curve, extra);
}

SlopeCurve read_curve_csv(const std::filesystem::path& path, CsvHeader* header) {
  return read_masked_curve<SlopeCurve>(path, header);
}

void write_kxk_csv(const std::filesystem::path& path, const KxkCurve& curve,
                   const CsvHeader& extra) {
  write_masked_curve(path, curve, extra);
}

KxkCurve read_kxk_csv(const std::filesystem::path& path, CsvHeader* header) {
  return read_masked_curve<KxkCurve>(path, header);
}

void write_ensemble_csv(const std::filesystem::path& path, const TrajectoryEnsemble& ensemble,
                        const CsvHeader& extra) {
  Writer w(path);
  CsvHeader h;
  h.insert(h.end(), extra.begin(), extra.end());
  w.header(h);
  std::vector<std::string> cols{"z_m"};
  for (std::size_t i = 0; i < ensemble.n_trajectories(); ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "traj_%03zu", i);
    cols.push_back(buf);
  }
  w.columns(cols);
  for (std::size_t j = 0; j < ensemble.n_planes(); ++j) {
    std::vector<std::string> row{format_double(ensemble.z_levels_m[j])};
    for (std::size_t i = 0; i < ensemble.n_trajectories(); ++i) {
      double v = ensemble.positions_mm[i][j];
      row.push_back(TrajectoryEnsemble::is_masked(v) ? std::string() : format_double(v));
    }
    w.row(row);
  }
  w.close();
}

TrajectoryEnsemble read_ensemble_csv(const std::filesystem::path& path, CsvHeader* header) {
  CsvDoc doc = read_doc(path);
  if (doc.columns.size() < 2 || doc.columns[0] != "z_m")
    throw DataError(path.string() + ": ensemble CSV must start with a z_m column");
  TrajectoryEnsemble ens;
  const std::size_t n_traj = doc.columns.size() - 1;
  ens.positions_mm.assign(n_traj, {});
  for (const auto& r : doc.rows) {
    if (r.size() != doc.columns.size())
      throw DataError(path.string() + ": ragged ensemble row");
    ens.z_levels_m.push_back(parse_double(r[0], path));
    for (std::size_t i = 0; i < n_traj; ++i)
      ens.positions_mm[i].push_back(r[i + 1].empty() ? std::nan("") : parse_double(r[i + 1], path));
  }
  for (const auto& row : ens.positions_mm)
    if (!row.empty() && TrajectoryEnsemble::is_masked(row.back())) ++ens.truncated_count;
  if (header) *header = std::move(doc.header);
  return ens;
}

}  // namespace weaktraj
