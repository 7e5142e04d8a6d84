#ifndef HATA_IO_HPP
#define HATA_IO_HPP

#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "hata/error.hpp"
#include "hata/geometry.hpp"
#include "hata/harmonic.hpp"
#include "hata/harmonic_structure.hpp"
#include "hata/spectral.hpp"
#include "hata/trace.hpp"

namespace hata::io {

enum class Format { csv, json };

struct RunConfig {
  Complex alpha = IfsParams::default_alpha();
  double h = 2.0;
  int m = 10;
  std::array<double, 3> boundary{0.0, 0.0, 1.0};
  std::size_t eigen_count = 20;
  std::optional<std::size_t> eigen_index; // 1-based
  std::optional<Format> format;
  std::filesystem::path out_dir = ".";

  /// Throws ConfigError on anything inadmissible.
  void validate() const {
    (void)IfsParams(alpha);
    check_structure_parameter(h);
    if (m < 0 || m > kMaxLevel) throw ConfigError("m must be in [0, " + std::to_string(kMaxLevel) + "]");
    for (double b : boundary)
      if (!std::isfinite(b)) throw ConfigError("boundary values must be finite");
    if (eigen_index && *eigen_index == 0) throw ConfigError("eigen index is 1-based");
  }
};

/// Shortest text that parses back to the same double.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return {buf.data(), res.ptr};
}

/// "hata 0.1.0 alpha=0.5,0.28867513459481287 h=2 m=10"
inline std::string config_echo(const RunConfig& c) {
  return std::string("hata ") + kVersion + " alpha=" + format_double(c.alpha.real()) + "," +
         format_double(c.alpha.imag()) + " h=" + format_double(c.h) + " m=" + std::to_string(c.m);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

inline void write_csv(std::ostream& os, const std::string& echo, const Table& t) {
  os << "# " << echo << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

/// {"config": "...", "columns": [...], "rows": [[...], ...]} with numeric
/// cells kept as numbers.
inline nlohmann::ordered_json table_json(const std::string& echo, const Table& t) {
  nlohmann::ordered_json j;
  j["config"] = echo;
  j["columns"] = t.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& cell : row) {
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec == std::errc() && res.ptr == cell.data() + cell.size() && std::isfinite(v))
        r.push_back(v);
      else if (cell == "true" || cell == "false")
        r.push_back(cell == "true");
      else
        r.push_back(cell);
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

inline Table vertex_function_table(const VertexFunction& u, const VertexGraph& g,
                                   std::optional<std::size_t> eigen_index = std::nullopt) {
  Table t;
  t.columns = {"address", "x", "y", "value"};
  if (eigen_index) t.columns.push_back("eigen_index");
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vertex& v = g.vertices[i];
    std::vector<std::string> row{v.address.to_string(), format_double(v.z.real()), format_double(v.z.imag()),
                                 format_double(u.values.at(i))};
    if (eigen_index) row.push_back(std::to_string(*eigen_index));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Table trace_table(const TraceSeries& s) {
  Table t;
  t.columns = {"x", "value", "birth_level"};
  for (const auto& p : s.points)
    t.rows.push_back({format_double(p.x), format_double(p.value), std::to_string(p.birth_level)});
  return t;
}

inline Table theta_table(const ThetaReport& r) {
  Table t;
  t.columns = {"x_q", "theta", "level", "excluded"};
  for (const auto& e : r.entries)
    t.rows.push_back({format_double(e.x), format_double(e.theta), std::to_string(e.level),
                      e.excluded ? "true" : "false"});
  return t;
}

/// k, lambda, label, paired_k, pair_mismatch, residual; paired columns are
/// empty for rows without a pairing.  k and paired_k are 1-based.
inline Table eigen_table(const SpectralResult& r) {
  Table t;
  t.columns = {"k", "lambda", "label", "paired_k", "pair_mismatch", "residual"};
  for (std::size_t k = 0; k < r.size(); ++k) {
    const char* label = k < r.labels.size() ? to_string(r.labels[k]) : "indeterminate";
    std::string paired;
    std::string mismatch;
    if (k < r.pairing.size() && r.pairing[k]) {
      paired = std::to_string(r.pairing[k]->primary + 1);
      mismatch = format_double(r.pairing[k]->mismatch);
    }
    t.rows.push_back({std::to_string(k + 1), format_double(r.eigenvalues[k]), label, paired, mismatch,
                      format_double(r.residuals[k])});
  }
  return t;
}

inline nlohmann::ordered_json mesh_json(const VertexGraph& g) {
  nlohmann::ordered_json j;
  j["level"] = g.level;
  j["alpha"] = {g.params.alpha().real(), g.params.alpha().imag()};
  j["h"] = g.h;
  j["version"] = kVersion;
  auto verts = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vertex& v = g.vertices[i];
    verts.push_back({{"id", i},
                     {"address", v.address.to_string()},
                     {"x", v.z.real()},
                     {"y", v.z.imag()},
                     {"boundary", v.boundary},
                     {"on01", v.on_unit_interval},
                     {"birth_level", v.birth_level}});
  }
  j["vertices"] = std::move(verts);
  auto edges = nlohmann::ordered_json::array();
  for (const Edge& e : g.edges) edges.push_back({{"u", e.u}, {"v", e.v}, {"conductance", e.conductance}});
  j["edges"] = std::move(edges);
  return j;
}

/// Write `text` to `path`, creating parent directories.
inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

/// Write a table as `<stem>.csv` or `<stem>.json`; returns the path written.
inline std::filesystem::path write_table(const std::filesystem::path& dir, const std::string& stem, Format f,
                                         const std::string& echo, const Table& t) {
  std::ostringstream os;
  std::filesystem::path path;
  if (f == Format::csv) {
    write_csv(os, echo, t);
    path = dir / (stem + ".csv");
  } else {
    os << table_json(echo, t).dump(1) << '\n';
    path = dir / (stem + ".json");
  }
  write_file(path, os.str());
  return path;
}

} // namespace hata::io

#endif // HATA_IO_HPP
