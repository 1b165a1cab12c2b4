#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "rhythm/collective.hpp"
#include "rhythm/pcmatrix.hpp"

// Matrix CSV layout, one row per publication year:
//
//   year,pubs,2015,2016,2017
//   2015,74,23,104,222
//   2016,48,,11,80
//   2017,67,,,36
//
// Citing years run across, cells left of the diagonal are empty. Written
// files use LF line endings and the shortest decimal that reads back exactly.

namespace rhythm {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

inline std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline std::optional<double> to_number(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<int> to_year(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline double count_cell(std::string_view raw, std::size_t line, std::size_t column) {
  const auto cell = trim(raw);
  const auto v = to_number(cell);
  if (!v) throw ParseError("'" + std::string(cell) + "' is not a number", line, column);
  if (*v < 0.0) throw DomainError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                                  ": negative count " + std::string(cell));
  // normalise -0
  return *v == 0.0 ? 0.0 : *v;
}

} // namespace detail

/// Shortest decimal that parses back to exactly `v`.
[[nodiscard]] inline std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

[[nodiscard]] inline PCMatrix parse_matrix(std::string_view text, std::string label = {}) {
  auto lines = detail::split_lines(text);
  while (!lines.empty() && detail::trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw LayoutError("empty matrix file", 0, 0);

  const auto header = detail::split_cells(lines[0]);
  if (header.size() < 3 || detail::trim(header[0]) != "year" || detail::trim(header[1]) != "pubs")
    throw LayoutError("header must read 'year,pubs,<first year>,...'", 1, 0);
  const std::size_t n = header.size() - 2;
  const auto first = detail::to_year(detail::trim(header[2]));
  if (!first) throw ParseError("citing-year column header is not a year", 1, 3);
  for (std::size_t j = 0; j < n; ++j) {
    const auto y = detail::to_year(detail::trim(header[j + 2]));
    if (!y || *y != *first + static_cast<int>(j))
      throw LayoutError("citing years must be consecutive, expected " + std::to_string(*first + static_cast<int>(j)),
                        1, j + 3);
  }
  if (lines.size() - 1 != n)
    throw LayoutError("expected " + std::to_string(n) + " publication rows, found " +
                          std::to_string(lines.size() - 1),
                      0, 0);

  std::vector<double> pubs(n);
  std::vector<std::vector<double>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t line = i + 2;
    const auto cells = detail::split_cells(lines[i + 1]);
    if (cells.size() != n + 2)
      throw LayoutError("row has " + std::to_string(cells.size()) + " cells, header has " +
                            std::to_string(n + 2),
                        line, 0);
    const auto year = detail::to_year(detail::trim(cells[0]));
    if (!year) throw ParseError("publication year is not an integer", line, 1);
    if (*year != *first + static_cast<int>(i))
      throw LayoutError("publication year " + std::to_string(*year) + " out of order, expected " +
                            std::to_string(*first + static_cast<int>(i)),
                        line, 1);
    pubs[i] = detail::count_cell(cells[1], line, 2);
    rows[i].reserve(n - i);
    for (std::size_t j = 0; j < n; ++j) {
      const auto cell = detail::trim(cells[j + 2]);
      if (j < i) {
        if (!cell.empty()) throw LayoutError("cell below the diagonal must be empty", line, j + 3);
        continue;
      }
      if (cell.empty()) throw LayoutError("missing count on or above the diagonal", line, j + 3);
      rows[i].push_back(detail::count_cell(cell, line, j + 3));
    }
  }
  return PCMatrix(*first, std::move(pubs), rows, std::move(label));
}

[[nodiscard]] inline std::string write_matrix(const PCMatrix &m) {
  std::string out = "year,pubs";
  for (std::size_t j = 0; j < m.size(); ++j) out += "," + std::to_string(m.year(j));
  out += '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += std::to_string(m.year(i));
    out += ',';
    out += format_number(m.pubs(i));
    for (std::size_t j = 0; j < m.size(); ++j) {
      out += ',';
      if (j >= i) out += format_number(m.cites(i, j));
    }
    out += '\n';
  }
  return out;
}

/// 64-bit FNV-1a, rendered as 16 hex digits.
[[nodiscard]] inline std::string checksum(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int k = 15; k >= 0; --k, h >>= 4) out[static_cast<std::size_t>(k)] = digits[h & 0xf];
  return out;
}

[[nodiscard]] inline std::string read_text_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

struct MatrixFile {
  std::filesystem::path path;
  PCMatrix matrix;
  std::string source_checksum;
};

/// Reads a matrix CSV; the label defaults to the file stem.
[[nodiscard]] inline MatrixFile read_matrix_file(const std::filesystem::path &path, std::string label = {}) {
  const std::string text = read_text_file(path);
  if (label.empty()) label = path.stem().string();
  try {
    return {path, parse_matrix(text, std::move(label)), checksum(text)};
  } catch (const LayoutError &e) {
    throw LayoutError(e.detail(), e.line(), e.column(), path.string());
  } catch (const ParseError &e) {
    throw ParseError(e.detail(), e.line(), e.column(), path.string());
  } catch (const DomainError &e) {
    throw DomainError(path.string() + ": " + e.what());
  }
}

inline void write_matrix_file(const std::filesystem::path &path, const PCMatrix &m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << write_matrix(m);
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

struct ManifestActor {
  std::string id;
  std::string label;
  std::filesystem::path path;
};

/// Collective described on disk: an optional total matrix plus one matrix per actor.
///
///   [collective]
///   label = SCIM
///   total = scim_total.csv
///   assert_partition = false
///
///   [actor]
///   id = china
///   label = China
///   path = china.csv
///
/// Relative paths are resolved against the manifest's directory.
struct CollectiveManifest {
  std::string label;
  std::optional<std::filesystem::path> total;
  std::vector<ManifestActor> actors;
  bool assert_partition = false;
};

[[nodiscard]] inline CollectiveManifest parse_manifest(std::string_view text,
                                                       const std::filesystem::path &base_dir = {}) {
  enum class Section { none, collective, actor };
  CollectiveManifest manifest;
  Section section = Section::none;
  bool saw_collective = false;
  const auto resolve = [&](std::string_view p) {
    std::filesystem::path path{std::string(p)};
    return path.is_absolute() ? path : base_dir / path;
  };

  const auto lines = detail::split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::size_t line = ln + 1;
    const auto s = detail::trim(lines[ln]);
    if (s.empty() || s.front() == '#' || s.front() == ';') continue;
    if (s.front() == '[') {
      if (s == "[collective]") {
        if (saw_collective) throw ParseError("duplicate [collective] section", line, 0);
        saw_collective = true;
        section = Section::collective;
      } else if (s == "[actor]") {
        section = Section::actor;
        manifest.actors.emplace_back();
      } else {
        throw ParseError("unknown section " + std::string(s), line, 0);
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line, 0);
    const auto key = detail::trim(s.substr(0, eq));
    const auto value = detail::trim(s.substr(eq + 1));
    if (value.empty()) throw ParseError("empty value for '" + std::string(key) + "'", line, 0);

    if (section == Section::collective) {
      if (key == "label") {
        manifest.label = value;
      } else if (key == "total") {
        manifest.total = resolve(value);
      } else if (key == "assert_partition") {
        if (value == "true") manifest.assert_partition = true;
        else if (value == "false") manifest.assert_partition = false;
        else throw ParseError("assert_partition must be true or false", line, 0);
      } else {
        throw ParseError("unknown key '" + std::string(key) + "' in [collective]", line, 0);
      }
    } else if (section == Section::actor) {
      auto &actor = manifest.actors.back();
      if (key == "id") actor.id = value;
      else if (key == "label") actor.label = value;
      else if (key == "path") actor.path = resolve(value);
      else throw ParseError("unknown key '" + std::string(key) + "' in [actor]", line, 0);
    } else {
      throw ParseError("key outside of a section", line, 0);
    }
  }

  if (!saw_collective) throw ParseError("missing [collective] section", 0, 0);
  if (manifest.label.empty()) throw ParseError("[collective] needs a label", 0, 0);
  std::set<std::string> ids;
  for (std::size_t q = 0; q < manifest.actors.size(); ++q) {
    auto &actor = manifest.actors[q];
    if (actor.id.empty()) throw ParseError("actor #" + std::to_string(q + 1) + " has no id", 0, 0);
    if (actor.path.empty()) throw ParseError("actor '" + actor.id + "' has no path", 0, 0);
    if (actor.label.empty()) actor.label = actor.id;
    if (!ids.insert(actor.id).second) throw ParseError("duplicate actor id '" + actor.id + "'", 0, 0);
  }
  if (manifest.actors.empty() && !manifest.total) throw ParseError("manifest names no matrices", 0, 0);
  return manifest;
}

/// Thrown by load_manifest when validation finds errors; carries the full report.
class ValidationFailed : public Error {
public:
  explicit ValidationFailed(ValidationReport report)
      : Error(summary(report)), report_(std::move(report)) {}

  [[nodiscard]] const ValidationReport &report() const noexcept { return report_; }

private:
  static std::string summary(const ValidationReport &r) {
    std::string s = "collective failed validation";
    for (const auto &f : r.findings)
      if (f.severity == Severity::error) s += "\n  " + f.message;
    return s;
  }

  ValidationReport report_;
};

struct LoadedCollective {
  CollectiveManifest manifest;
  Collective collective;
  /// Warnings and infos only; errors are thrown.
  ValidationReport report;
};

[[nodiscard]] inline LoadedCollective load_manifest(const std::filesystem::path &path,
                                                    ValidationOptions options = {}) {
  CollectiveManifest manifest;
  try {
    manifest = parse_manifest(read_text_file(path), path.parent_path());
  } catch (const ParseError &e) {
    throw ParseError(e.detail(), e.line(), e.column(), path.string());
  }
  options.assert_partition = manifest.assert_partition;

  std::optional<PCMatrix> total;
  if (manifest.total) total = read_matrix_file(*manifest.total, manifest.label).matrix;
  std::vector<Constituent> parts;
  parts.reserve(manifest.actors.size());
  for (const auto &actor : manifest.actors)
    parts.push_back({actor.id, actor.label, read_matrix_file(actor.path, actor.label).matrix});

  Collective collective(manifest.label, std::move(total), std::move(parts));
  auto report = validate_collective(collective, options);
  if (!report.ok()) throw ValidationFailed(std::move(report));
  return {std::move(manifest), std::move(collective), std::move(report)};
}

} // namespace rhythm
