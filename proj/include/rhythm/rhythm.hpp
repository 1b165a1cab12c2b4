#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rhythm/pcmatrix.hpp"

namespace rhythm {

/// One publication year of an R-sequence.
struct RhythmPoint {
  int year = 0;
  double publications = 0.0;
  double observed = 0.0;
  double expected = 0.0;
  /// observed / expected; empty when expected is 0.
  std::optional<double> ratio;
};

enum class RhythmKind { internal, cross };

/// Observed-over-expected citation series for one actor plus its summaries.
///
/// For an internal sequence observed and expected values come from the same
/// matrix. For a cross (external) sequence the observed citations and the
/// publication counts come from one matrix and the age profile used for the
/// expectation comes from another.
struct RhythmSequence {
  RhythmKind kind = RhythmKind::internal;
  std::string observed_source;
  std::string expectation_source;
  std::vector<RhythmPoint> points;
  /// The age profile the expectations were built from.
  CkProfile profile;
  /// Sum of observed over sum of expected.
  std::optional<double> i1;
  /// Mean of the ratios; empty unless every ratio is defined.
  std::optional<double> i2;
  std::vector<int> undefined_years;

  [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
  [[nodiscard]] int first_year() const { return points.empty() ? 0 : points.front().year; }

  [[nodiscard]] const RhythmPoint &at_year(int year) const {
    for (const auto &p : points)
      if (p.year == year) return p;
    throw RangeError("year " + std::to_string(year) + " not in sequence");
  }
};

/// E_i: publications of row i times the cumulative profile over the ages the
/// window still covers for that row (n - i of them).
[[nodiscard]] inline double expected_citations(const PCMatrix &pubs_source, const CkProfile &profile,
                                               std::size_t i) {
  if (profile.size() != pubs_source.size())
    throw AlignmentError("profile of '" + profile.source_label + "' has " +
                         std::to_string(profile.size()) + " ages, '" + pubs_source.label() +
                         "' covers " + std::to_string(pubs_source.size()) + " years");
  const double p = pubs_source.pubs(i);
  double cumulative = 0.0;
  for (std::size_t k = 0; k < pubs_source.size() - i; ++k) cumulative += profile.values[k];
  return p * cumulative;
}

[[nodiscard]] inline std::optional<double> summary_i1(const RhythmSequence &seq) {
  double observed = 0.0;
  double expected = 0.0;
  for (const auto &p : seq.points) {
    observed += p.observed;
    expected += p.expected;
  }
  if (expected <= 0.0) return std::nullopt;
  return observed / expected;
}

/// Average of ratios over all n years. Empty when any ratio is undefined.
[[nodiscard]] inline std::optional<double> summary_i2(const RhythmSequence &seq) {
  if (seq.points.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto &p : seq.points) {
    if (!p.ratio) return std::nullopt;
    sum += *p.ratio;
  }
  return sum / static_cast<double>(seq.points.size());
}

struct LenientMean {
  std::optional<double> mean;
  std::size_t defined_count = 0;
  std::size_t total_count = 0;
};

/// Average over the defined ratios only, with the number that took part.
[[nodiscard]] inline LenientMean summary_i2_lenient(const RhythmSequence &seq) {
  LenientMean out;
  out.total_count = seq.points.size();
  double sum = 0.0;
  for (const auto &p : seq.points) {
    if (!p.ratio) continue;
    sum += *p.ratio;
    ++out.defined_count;
  }
  if (out.defined_count > 0) out.mean = sum / static_cast<double>(out.defined_count);
  return out;
}

namespace detail {

inline RhythmSequence build_sequence(const PCMatrix &observed_source, CkProfile profile, RhythmKind kind,
                                     std::string expectation_label) {
  RhythmSequence seq;
  seq.kind = kind;
  seq.observed_source = observed_source.label();
  seq.expectation_source = std::move(expectation_label);
  seq.points.reserve(observed_source.size());
  for (std::size_t i = 0; i < observed_source.size(); ++i) {
    RhythmPoint pt;
    pt.year = observed_source.year(i);
    pt.publications = observed_source.pubs(i);
    pt.observed = observed_citations(observed_source, i);
    pt.expected = expected_citations(observed_source, profile, i);
    if (pt.expected > 0.0)
      pt.ratio = pt.observed / pt.expected;
    else
      seq.undefined_years.push_back(pt.year);
    seq.points.push_back(pt);
  }
  seq.profile = std::move(profile);
  seq.i1 = summary_i1(seq);
  seq.i2 = summary_i2(seq);
  return seq;
}

} // namespace detail

/// Internal rhythm: the actor judged against its own age profile.
[[nodiscard]] inline RhythmSequence internal_rhythm(const PCMatrix &m) {
  return detail::build_sequence(m, ck_profile(m), RhythmKind::internal, m.label());
}

/// External rhythm of `observed_source` against the age profile of
/// `expectation_source`. Passing the same matrix twice reproduces the
/// internal rhythm value for value.
[[nodiscard]] inline RhythmSequence cross_rhythm(const PCMatrix &observed_source,
                                                 const PCMatrix &expectation_source) {
  require_aligned(observed_source, expectation_source);
  return detail::build_sequence(observed_source, ck_profile(expectation_source), RhythmKind::cross,
                                expectation_source.label());
}

struct WindowEntry {
  int start_year = 0;
  RhythmSequence sequence;
};

/// Rhythm sequences of every w-year sub-matrix, in start-year order.
struct WindowSeries {
  std::size_t window_length = 0;
  std::vector<WindowEntry> entries;
};

namespace detail {

template <typename Compute>
WindowSeries slide(const PCMatrix &m, std::size_t w, Compute &&compute) {
  if (w == 0 || w > m.size())
    throw RangeError("window length " + std::to_string(w) + " must be between 1 and " +
                     std::to_string(m.size()));
  WindowSeries series{w, {}};
  series.entries.reserve(m.size() - w + 1);
  for (std::size_t s = 0; s + w <= m.size(); ++s)
    series.entries.push_back({m.year(s), compute(s)});
  return series;
}

} // namespace detail

/// Internal rhythm of each w-year window; the age profile is rebuilt per window.
[[nodiscard]] inline WindowSeries sliding_windows(const PCMatrix &m, std::size_t w) {
  return detail::slide(m, w, [&](std::size_t s) { return internal_rhythm(submatrix(m, s, w)); });
}

/// External rhythm of each w-year window of `m` against the same window of
/// `expectation_source`.
[[nodiscard]] inline WindowSeries sliding_windows(const PCMatrix &m, std::size_t w,
                                                  const PCMatrix &expectation_source) {
  require_aligned(m, expectation_source);
  return detail::slide(m, w, [&](std::size_t s) {
    return cross_rhythm(submatrix(m, s, w), submatrix(expectation_source, s, w));
  });
}

} // namespace rhythm
