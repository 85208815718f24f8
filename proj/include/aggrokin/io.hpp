#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "aggrokin/grid.hpp"

namespace aggrokin::io {

/// Round-trip decimal text for a double ("%.17g"; "nan"/"inf" pass through).
std::string fmt(double x);

/// Row-oriented CSV writer. Cells are numbers or preformatted strings.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void row(std::initializer_list<double> cells);
  void row(std::span<const double> cells);
  /// Leading text columns followed by numbers.
  void row(std::initializer_list<std::string_view> text, std::span<const double> cells);

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// Long-format snapshot table: `t,cell_index,value` (1D) or `t,i,j,value` (2D).
void write_snapshots_csv(const std::filesystem::path& path, std::span<const DensityField> snapshots);
/// Row-major little-endian float64 dump of all snapshots plus a `<path>.json`
/// sidecar with times, grid and caller metadata.
void write_snapshots_binary(const std::filesystem::path& path, std::span<const DensityField> snapshots,
                            const nlohmann::json& meta);

/// Hex SHA-1 of "blob <size>\0<bytes>", as git computes object ids.
std::string git_blob_sha1(std::string_view bytes);
/// Hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

}  // namespace aggrokin::io
