#pragma once

// Table and chart rendering for rhythm sequences. Numbers are computed at full
// precision upstream and only rounded here, half away from zero.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rhythm/collective.hpp"
#include "rhythm/rhythm.hpp"

namespace rhythm::report {

/// `v` rounded to `decimals` places, ties away from zero, in fixed notation.
[[nodiscard]] inline std::string round_half_away(double v, int decimals) {
  if (decimals < 0) throw ArgumentError("decimal places must be non-negative");
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v < 0 ? "-inf" : "inf");
  // Enough extra digits that the tie decision is taken on the exact binary value.
  char buf[512];
  const auto res = std::to_chars(buf, buf + sizeof buf, std::abs(v), std::chars_format::fixed, decimals + 30);
  std::string digits(buf, res.ptr);
  const auto dot = digits.find('.');
  std::string kept = digits.substr(0, dot);
  std::string frac = digits.substr(dot + 1, static_cast<std::size_t>(decimals));
  const bool round_up = digits[dot + 1 + static_cast<std::size_t>(decimals)] >= '5';
  std::string number = kept + frac;
  if (round_up) {
    std::size_t k = number.size();
    while (k > 0) {
      --k;
      if (number[k] == '9') {
        number[k] = '0';
      } else {
        ++number[k];
        break;
      }
      if (k == 0) number.insert(number.begin(), '1');
    }
  }
  const std::size_t int_len = number.size() - static_cast<std::size_t>(decimals);
  std::string out = number.substr(0, int_len);
  if (decimals > 0) out += "." + number.substr(int_len);
  const bool zero = std::all_of(number.begin(), number.end(), [](char c) { return c == '0'; });
  return (v < 0 && !zero) ? "-" + out : out;
}

/// Counts print as integers when integral, otherwise like any other value.
[[nodiscard]] inline std::string format_count(double v, int decimals) {
  if (v == std::floor(v) && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  return round_half_away(v, decimals);
}

/// Rendering-neutral table: an empty cell means "undefined".
struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<std::string>>> rows;
  std::vector<std::pair<std::string, std::optional<std::string>>> summary;
};

struct TextStyle {
  bool ansi = false;
};

[[nodiscard]] inline std::string render_text(const Table &t, TextStyle style = {}) {
  constexpr const char *undefined = "n/a";
  std::vector<std::size_t> width(t.columns.size());
  for (std::size_t c = 0; c < t.columns.size(); ++c) width[c] = t.columns[c].size();
  for (const auto &row : t.rows)
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c)
      width[c] = std::max(width[c], row[c] ? row[c]->size() : std::string(undefined).size());

  const auto pad = [](const std::string &s, std::size_t w) { return std::string(w - std::min(w, s.size()), ' ') + s; };
  std::string out;
  if (!t.title.empty()) out += (style.ansi ? "\x1b[1m" + t.title + "\x1b[0m" : t.title) + "\n\n";
  std::string header;
  for (std::size_t c = 0; c < t.columns.size(); ++c) header += (c ? "  " : "") + pad(t.columns[c], width[c]);
  out += (style.ansi ? "\x1b[4m" + header + "\x1b[0m" : header) + "\n";
  for (const auto &row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "  " : "") + pad(row[c] ? *row[c] : undefined, width[c]);
    out += "\n";
  }
  if (!t.summary.empty()) out += "\n";
  for (const auto &[name, value] : t.summary) out += name + " = " + (value ? *value : undefined) + "\n";
  return out;
}

/// Plain CSV; summary lines follow the data as `#name,value` comment rows.
[[nodiscard]] inline std::string render_csv(const Table &t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + t.columns[c];
  out += "\n";
  for (const auto &row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + row[c].value_or("");
    out += "\n";
  }
  for (const auto &[name, value] : t.summary) out += "#" + name + "," + value.value_or("") + "\n";
  return out;
}

namespace detail {

inline std::optional<std::string> opt(const std::optional<double> &v, int decimals) {
  if (!v) return std::nullopt;
  return round_half_away(*v, decimals);
}

} // namespace detail

/// Columns year, O, C_k, E, R; row i carries the profile value for age i + 1.
[[nodiscard]] inline Table internal_table(const RhythmSequence &seq, int decimals) {
  Table t;
  t.title = "Internal rhythm of " + seq.observed_source;
  t.columns = {"year", "O", "C_k", "E", "R"};
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto &p = seq.points[i];
    t.rows.push_back({std::to_string(p.year), format_count(p.observed, decimals),
                      round_half_away(seq.profile.values[i], decimals), round_half_away(p.expected, decimals),
                      detail::opt(p.ratio, decimals)});
  }
  t.summary = {{"I1", detail::opt(seq.i1, decimals)}, {"I2", detail::opt(seq.i2, decimals)}};
  return t;
}

[[nodiscard]] inline Table external_table(const RhythmSequence &seq, int decimals) {
  Table t;
  t.title = "External rhythm of " + seq.observed_source + " against " + seq.expectation_source;
  t.columns = {"year", "P", "O", "C_k", "E", "R"};
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto &p = seq.points[i];
    t.rows.push_back({std::to_string(p.year), format_count(p.publications, decimals),
                      format_count(p.observed, decimals), round_half_away(seq.profile.values[i], decimals),
                      round_half_away(p.expected, decimals), detail::opt(p.ratio, decimals)});
  }
  t.summary = {{"I1", detail::opt(seq.i1, decimals)}, {"I2", detail::opt(seq.i2, decimals)}};
  return t;
}

[[nodiscard]] inline Table comparison_table(const ComparisonResult &r, int decimals) {
  const auto &[u, v] = r.actors;
  const auto &su = r.first();
  const auto &sv = r.second();
  Table t;
  t.title = "External rhythms of " + u + " and " + v + " against " + r.baseline_label;
  t.columns = {"year", "C_k", "P_" + u, "O_" + u, "E_" + u, "R_" + u,
               "P_" + v, "O_" + v, "E_" + v, "R_" + v, "winner"};
  for (std::size_t i = 0; i < su.size(); ++i) {
    const auto &a = su.points[i];
    const auto &b = sv.points[i];
    const auto &verdict = r.per_year_winner[i];
    t.rows.push_back({std::to_string(a.year), round_half_away(su.profile.values[i], decimals),
                      format_count(a.publications, decimals), format_count(a.observed, decimals),
                      round_half_away(a.expected, decimals), detail::opt(a.ratio, decimals),
                      format_count(b.publications, decimals), format_count(b.observed, decimals),
                      round_half_away(b.expected, decimals), detail::opt(b.ratio, decimals),
                      verdict.winner.value_or("tie")});
  }
  t.summary = {{"I1_" + u, detail::opt(su.i1, decimals)}, {"I2_" + u, detail::opt(su.i2, decimals)},
               {"I1_" + v, detail::opt(sv.i1, decimals)}, {"I2_" + v, detail::opt(sv.i2, decimals)}};
  return t;
}

/// One row per window: first and last year, I1, I2, then the window's ratios.
[[nodiscard]] inline Table windows_table(const WindowSeries &series, int decimals) {
  Table t;
  t.title = std::to_string(series.window_length) + "-year sliding windows";
  t.columns = {"start", "end", "I1", "I2"};
  for (std::size_t k = 0; k < series.window_length; ++k) t.columns.push_back("R_" + std::to_string(k + 1));
  for (const auto &entry : series.entries) {
    std::vector<std::optional<std::string>> row{
        std::to_string(entry.start_year),
        std::to_string(entry.start_year + static_cast<int>(series.window_length) - 1),
        detail::opt(entry.sequence.i1, decimals), detail::opt(entry.sequence.i2, decimals)};
    for (const auto &p : entry.sequence.points) row.push_back(detail::opt(p.ratio, decimals));
    t.rows.push_back(std::move(row));
  }
  return t;
}

struct ChartSeries {
  std::string label;
  /// (year, ratio); undefined ratios are left out of the line.
  std::vector<std::pair<int, std::optional<double>>> points;
  bool dashed = false;
};

[[nodiscard]] inline ChartSeries chart_series(const RhythmSequence &seq, std::string label, bool dashed = false) {
  ChartSeries s{std::move(label), {}, dashed};
  for (const auto &p : seq.points) s.points.emplace_back(p.year, p.ratio);
  return s;
}

namespace detail {

inline std::string xml_escape(const std::string &s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

inline std::string coord(double v) { return round_half_away(v, 2); }

} // namespace detail

/// Line chart of R against publication year with a reference line at R = 1.
/// The y axis runs from 0 to 10% above the larger of 1 and the largest ratio.
[[nodiscard]] inline std::string render_svg(const std::string &title, const std::vector<ChartSeries> &series) {
  constexpr double width = 720, height = 420;
  constexpr double left = 60, right = 160, top = 40, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  int first = 0, last = 0;
  bool any_year = false;
  double max_ratio = 1.0;
  for (const auto &s : series)
    for (const auto &[year, r] : s.points) {
      first = any_year ? std::min(first, year) : year;
      last = any_year ? std::max(last, year) : year;
      any_year = true;
      if (r) max_ratio = std::max(max_ratio, *r);
    }
  const double y_max = max_ratio * 1.1;
  const auto x_of = [&](int year) {
    return last == first ? left + plot_w / 2 : left + plot_w * (year - first) / static_cast<double>(last - first);
  };
  const auto y_of = [&](double r) { return top + plot_h * (1.0 - r / y_max); };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::coord(width) + "\" height=\"" +
                    detail::coord(height) + "\" viewBox=\"0 0 " + detail::coord(width) + " " +
                    detail::coord(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<title>" + detail::xml_escape(title) + "</title>\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + detail::coord(width) + "\" height=\"" + detail::coord(height) +
         "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + detail::coord(left) + "\" y=\"24\" font-size=\"14\">" + detail::xml_escape(title) +
         "</text>\n";

  // axes
  svg += "<g class=\"axes\" stroke=\"black\">\n";
  svg += "<line class=\"axis\" x1=\"" + detail::coord(left) + "\" y1=\"" + detail::coord(top + plot_h) +
         "\" x2=\"" + detail::coord(left + plot_w) + "\" y2=\"" + detail::coord(top + plot_h) + "\"/>\n";
  svg += "<line class=\"axis\" x1=\"" + detail::coord(left) + "\" y1=\"" + detail::coord(top) + "\" x2=\"" +
         detail::coord(left) + "\" y2=\"" + detail::coord(top + plot_h) + "\"/>\n";
  svg += "</g>\n<g class=\"ticks\">\n";
  if (any_year)
    for (int y = first; y <= last; ++y)
      svg += "<text x=\"" + detail::coord(x_of(y)) + "\" y=\"" + detail::coord(top + plot_h + 18) +
             "\" text-anchor=\"middle\">" + std::to_string(y) + "</text>\n";
  const double step = y_max > 5 ? 1.0 : (y_max > 2 ? 0.5 : 0.25);
  for (double r = 0.0; r <= y_max + 1e-12; r += step)
    svg += "<text x=\"" + detail::coord(left - 8) + "\" y=\"" + detail::coord(y_of(r) + 4) +
           "\" text-anchor=\"end\">" + round_half_away(r, 2) + "</text>\n";
  svg += "</g>\n";
  svg += "<text x=\"" + detail::coord(left + plot_w / 2) + "\" y=\"" + detail::coord(height - 10) +
         "\" text-anchor=\"middle\">publication year</text>\n";
  svg += "<text x=\"16\" y=\"" + detail::coord(top + plot_h / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         detail::coord(top + plot_h / 2) + ")\">R</text>\n";

  svg += "<line class=\"reference\" data-value=\"1\" x1=\"" + detail::coord(left) + "\" y1=\"" +
         detail::coord(y_of(1.0)) + "\" x2=\"" + detail::coord(left + plot_w) + "\" y2=\"" +
         detail::coord(y_of(1.0)) + "\" stroke=\"gray\" stroke-dasharray=\"2,3\"/>\n";

  static constexpr const char *colors[] = {"#1f4e99", "#b03a2e", "#1e8449", "#7d3c98"};
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto &s = series[k];
    std::string points;
    for (const auto &[year, r] : s.points) {
      if (!r) continue;
      points += (points.empty() ? "" : " ") + detail::coord(x_of(year)) + "," + detail::coord(y_of(*r));
    }
    svg += "<polyline class=\"series\" data-label=\"" + detail::xml_escape(s.label) + "\" points=\"" + points +
           "\" fill=\"none\" stroke=\"" + colors[k % 4] + "\" stroke-width=\"2\"" +
           (s.dashed ? " stroke-dasharray=\"3,4\"" : "") + "/>\n";
  }

  svg += "<g class=\"legend\">\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double ly = top + 10 + 20.0 * static_cast<double>(k);
    const double lx = left + plot_w + 16;
    svg += "<line x1=\"" + detail::coord(lx) + "\" y1=\"" + detail::coord(ly) + "\" x2=\"" + detail::coord(lx + 30) +
           "\" y2=\"" + detail::coord(ly) + "\" stroke=\"" + colors[k % 4] + "\" stroke-width=\"2\"" +
           (series[k].dashed ? " stroke-dasharray=\"3,4\"" : "") + "/>\n";
    svg += "<text x=\"" + detail::coord(lx + 38) + "\" y=\"" + detail::coord(ly + 4) + "\">" +
           detail::xml_escape(series[k].label) + "</text>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

} // namespace rhythm::report
