#pragma once

// Shared helpers for tests: fixture paths, the printed values of the SCIM
// tables, and a seeded random matrix generator.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "rhythm/all.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return RHYTHM_DATA_DIR; }
inline std::filesystem::path data(const std::string &name) { return data_dir() / name; }

inline rhythm::PCMatrix matrix(const std::string &stem) {
  return rhythm::read_matrix_file(data(stem + ".csv")).matrix;
}

inline rhythm::PCMatrix china() { return matrix("china"); }
inline rhythm::PCMatrix world_without_china() { return matrix("world_without_china"); }
inline rhythm::PCMatrix brazil() { return matrix("brazil"); }
inline rhythm::PCMatrix netherlands() { return matrix("netherlands"); }
inline rhythm::PCMatrix world_without_brazil_netherlands() { return matrix("world_without_brazil_netherlands"); }

inline rhythm::Collective scim() { return rhythm::load_manifest(data("scim.manifest")).collective; }

/// Printed values of the SCIM worked example, keyed by (series, quantity, year);
/// summary indicators use year 0.
class PrintedValues {
public:
  PrintedValues() {
    const auto text = rhythm::read_text_file(data("expected/printed_values.csv"));
    const auto lines = rhythm::detail::split_lines(text);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      const auto cells = rhythm::detail::split_cells(lines[i]);
      const int year = cells[2].empty() ? 0 : *rhythm::detail::to_year(cells[2]);
      values_[{std::string(cells[0]), std::string(cells[1]), year}] = *rhythm::detail::to_number(cells[3]);
    }
  }

  [[nodiscard]] double at(const std::string &series, const std::string &quantity, int year = 0) const {
    return values_.at({series, quantity, year});
  }

  [[nodiscard]] std::vector<std::pair<int, double>> column(const std::string &series, const std::string &quantity) const {
    std::vector<std::pair<int, double>> out;
    for (const auto &[key, v] : values_)
      if (std::get<0>(key) == series && std::get<1>(key) == quantity && std::get<2>(key) != 0)
        out.emplace_back(std::get<2>(key), v);
    return out;
  }

private:
  std::map<std::tuple<std::string, std::string, int>, double> values_;
};

struct RandomMatrixOptions {
  std::size_t min_years = 1;
  std::size_t max_years = 20;
  bool allow_fractional = true;
};

/// Random valid matrix with strictly positive publication counts, so that
/// every age-profile denominator is positive.
inline rhythm::PCMatrix random_matrix(std::mt19937_64 &rng, const RandomMatrixOptions &opt = {}) {
  std::uniform_int_distribution<std::size_t> years(opt.min_years, opt.max_years);
  std::uniform_int_distribution<int> pubs(1, 60);
  std::uniform_int_distribution<int> cites(0, 120);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool fractional = opt.allow_fractional && unit(rng) < 0.3;
  const std::size_t n = years(rng);
  std::vector<double> p(n);
  std::vector<std::vector<double>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = pubs(rng) - (fractional ? unit(rng) * 0.5 : 0.0);
    for (std::size_t j = i; j < n; ++j) {
      double c = unit(rng) < 0.1 ? 0.0 : cites(rng);
      if (fractional) c *= unit(rng);
      rows[i].push_back(c);
    }
  }
  return rhythm::PCMatrix(1990 + static_cast<int>(unit(rng) * 20), std::move(p), rows, "random");
}

/// Scratch directory removed on destruction.
class TempDir {
public:
  TempDir() : path_(std::filesystem::temp_directory_path() / ("rhythm_test_" + std::to_string(::getpid()) + "_" +
                                                 std::to_string(counter_++))) {
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }

  [[nodiscard]] const std::filesystem::path &path() const noexcept { return path_; }

  [[nodiscard]] std::filesystem::path write(const std::string &name, const std::string &content) const {
    std::ofstream(path_ / name, std::ios::binary) << content;
    return path_ / name;
  }

private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

inline double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Output and exit status of a shell command (stderr merged into stdout).
struct CommandResult {
  int status = -1;
  std::string output;
};

inline CommandResult run(const std::string &command) {
  CommandResult result;
  FILE *pipe = popen((command + " 2>&1").c_str(), "r");
  if (pipe == nullptr) return result;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, got);
  const int status = pclose(pipe);
  result.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

/// A table as written by `rhythm ... --format csv`: header, rows keyed by
/// their first cell, and `#name,value` summary rows.
struct CsvTable {
  std::vector<std::string> columns;
  std::map<std::string, std::vector<std::string>> rows;
  std::vector<std::string> order;
  std::map<std::string, std::string> summary;

  [[nodiscard]] std::string cell(const std::string &key, const std::string &column) const {
    for (std::size_t c = 0; c < columns.size(); ++c)
      if (columns[c] == column) return rows.at(key).at(c);
    throw std::out_of_range("no column " + column);
  }

  [[nodiscard]] double number(const std::string &key, const std::string &column) const {
    return rhythm::detail::to_number(cell(key, column)).value();
  }
};

inline CsvTable parse_csv_table(const std::string &text) {
  CsvTable t;
  for (const auto line : rhythm::detail::split_lines(text)) {
    if (line.empty()) continue;
    const auto cells = rhythm::detail::split_cells(line);
    std::vector<std::string> owned(cells.begin(), cells.end());
    if (line.front() == '#') {
      t.summary[owned[0].substr(1)] = owned.size() > 1 ? owned[1] : "";
    } else if (t.columns.empty()) {
      t.columns = std::move(owned);
    } else {
      t.order.push_back(owned[0]);
      t.rows[owned[0]] = std::move(owned);
    }
  }
  return t;
}

/// Number of `<polyline class="series"` elements and the point count of each.
inline std::vector<std::size_t> svg_series_points(const std::string &svg) {
  std::vector<std::size_t> out;
  const std::string tag = "<polyline class=\"series\"";
  for (auto at = svg.find(tag); at != std::string::npos; at = svg.find(tag, at + 1)) {
    const auto open = svg.find("points=\"", at) + 8;
    const auto close = svg.find('"', open);
    std::size_t count = 0;
    bool in_token = false;
    for (std::size_t k = open; k < close; ++k) {
      const bool space = svg[k] == ' ';
      if (!space && !in_token) ++count;
      in_token = !space;
    }
    out.push_back(count);
  }
  return out;
}

inline std::string cli() { return std::string("RHYTHM_NO_COLOR=1 '") + RHYTHM_CLI_PATH + "'"; }

inline std::string quoted(const std::filesystem::path &p) { return "'" + p.string() + "'"; }

} // namespace fixtures
