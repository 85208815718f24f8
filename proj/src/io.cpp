#include "aggrokin/io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <openssl/evp.h>

#include "aggrokin/errors.hpp"

namespace aggrokin::io {

namespace {

[[noreturn]] void io_error(const std::string& what) { throw Error(ErrorKind::io, "cli", what); }

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, mode);
  if (!out) io_error("cannot open " + path.string() + " for writing");
  return out;
}

std::string digest_hex(const EVP_MD* md, std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> buf{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), buf.data(), &len, md, nullptr) != 1) io_error("digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s.push_back(hex[buf[i] >> 4]);
    s.push_back(hex[buf[i] & 15]);
  }
  return s;
}

}  // namespace

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(open_out(path)), path_(path) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> cells) { row(std::span<const double>(cells.begin(), cells.size())); }

void CsvWriter::row(std::span<const double> cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << fmt(cells[i]);
  out_ << '\n';
  if (!out_) io_error("write failed on " + path_.string());
}

void CsvWriter::row(std::initializer_list<std::string_view> text, std::span<const double> cells) {
  bool first = true;
  for (auto t : text) {
    out_ << (first ? "" : ",") << t;
    first = false;
  }
  for (double c : cells) {
    out_ << (first ? "" : ",") << fmt(c);
    first = false;
  }
  out_ << '\n';
  if (!out_) io_error("write failed on " + path_.string());
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out << text;
  if (!out) io_error("write failed on " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

void write_snapshots_csv(const std::filesystem::path& path, std::span<const DensityField> snapshots) {
  if (snapshots.empty()) {
    CsvWriter(path, {"t", "cell_index", "value"});
    return;
  }
  const auto& g = snapshots.front().grid;
  if (g.dim == 1) {
    CsvWriter w(path, {"t", "cell_index", "value"});
    for (const auto& s : snapshots)
      for (std::size_t i = 0; i < s.values.size(); ++i) w.row({s.time, static_cast<double>(i), s.values[i]});
  } else {
    CsvWriter w(path, {"t", "i", "j", "value"});
    for (const auto& s : snapshots)
      for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
          w.row({s.time, static_cast<double>(i), static_cast<double>(j), s.values[g.flat(i, j)]});
  }
}

void write_snapshots_binary(const std::filesystem::path& path, std::span<const DensityField> snapshots,
                            const nlohmann::json& meta) {
  static_assert(std::endian::native == std::endian::little, "binary dumps assume a little-endian host");
  auto out = open_out(path, std::ios::out | std::ios::binary);
  nlohmann::json times = nlohmann::json::array();
  for (const auto& s : snapshots) {
    out.write(reinterpret_cast<const char*>(s.values.data()),
              static_cast<std::streamsize>(s.values.size() * sizeof(double)));
    times.push_back(s.time);
  }
  if (!out) io_error("write failed on " + path.string());
  nlohmann::json side = meta;
  side["format"] = "float64-le row-major, one block per snapshot";
  side["snapshots"] = snapshots.size();
  side["times"] = times;
  if (!snapshots.empty()) side["grid"] = snapshots.front().grid.to_json();
  auto sidecar = path;
  sidecar += ".json";
  write_json(sidecar, side);
}

std::string git_blob_sha1(std::string_view bytes) {
  std::string buf = "blob " + std::to_string(bytes.size());
  buf.push_back('\0');
  buf.append(bytes);
  return digest_hex(EVP_sha1(), buf);
}

std::string sha256_hex(std::string_view bytes) { return digest_hex(EVP_sha256(), bytes); }

}  // namespace aggrokin::io
