#pragma once
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "weaktraj/bohm.hpp"
#include "weaktraj/density.hpp"
#include "weaktraj/sensor.hpp"
#include "weaktraj/wavefield.hpp"
#include "weaktraj/weak_momentum.hpp"

namespace weaktraj {

/// Key=value metadata carried in '#'-prefixed header lines, in file order.
using CsvHeader = std::vector<std::pair<std::string, std::string>>;

std::string header_value(const CsvHeader& header, const std::string& key);
bool has_header(const CsvHeader& header, const std::string& key);

/// Shortest round-trip decimal form of a double (what all writers emit).
std::string format_double(double v);

void write_density_csv(const std::filesystem::path& path, const DensityCurve& density,
                       const CsvHeader& extra = {});
DensityCurve read_density_csv(const std::filesystem::path& path, CsvHeader* header = nullptr);

void write_field_csv(const std::filesystem::path& path, const FieldSlice& field,
                     const CsvHeader& extra = {});
FieldSlice read_field_csv(const std::filesystem::path& path, CsvHeader* header = nullptr);

void write_frame_csv(const std::filesystem::path& path, const PixelImage& img,
                     const CsvHeader& extra = {});
PixelImage read_frame_csv(const std::filesystem::path& path, CsvHeader* header = nullptr);

void write_curve_csv(const std::filesystem::path& path, const SlopeCurve& curve,
                     const CsvHeader& extra = {});
SlopeCurve read_curve_csv(const std::filesystem::path& path, CsvHeader* header = nullptr);

void write_kxk_csv(const std::filesystem::path& path, const KxkCurve& curve,
                   const CsvHeader& extra = {});
KxkCurve read_kxk_csv(const std::filesystem::path& path, CsvHeader* header = nullptr);

void write_ensemble_csv(const std::filesystem::path& path, const TrajectoryEnsemble& ensemble,
                        const CsvHeader& extra = {});
TrajectoryEnsemble read_ensemble_csv(const std::filesystem::path& path, CsvHeader* header = nullptr);

}  // namespace weaktraj
