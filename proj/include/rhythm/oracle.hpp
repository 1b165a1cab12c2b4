#pragma once

// Reference implementation working from individual citation events, and a
// seeded generator of synthetic corpora. Nothing here calls into the matrix
// or rhythm arithmetic; the loops are written out so that agreement between
// the two paths means something.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "rhythm/ingest.hpp"
#include "rhythm/pcmatrix.hpp"
#include "rhythm/rhythm.hpp"

namespace rhythm::oracle {

struct CitationEvent {
  int published_year = 0;
  int citing_year = 0;
  double weight = 1.0;
  friend bool operator==(const CitationEvent &, const CitationEvent &) = default;
};

struct EventCorpus {
  std::string label;
  int first_year = 0;
  std::size_t n = 0;
  /// Publication weight of each year, first_year first.
  std::vector<double> publications;
  std::vector<CitationEvent> events;
  friend bool operator==(const EventCorpus &, const EventCorpus &) = default;
};

inline void check_corpus(const EventCorpus &c) {
  if (c.n == 0) throw ArgumentError("corpus must cover at least one year");
  if (c.publications.size() != c.n)
    throw ArgumentError("corpus has " + std::to_string(c.publications.size()) + " publication weights for " +
                        std::to_string(c.n) + " years");
  const int last = c.first_year + static_cast<int>(c.n) - 1;
  for (const double p : c.publications)
    if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("publication weights must be non-negative");
  for (const auto &e : c.events) {
    if (e.published_year < c.first_year || e.citing_year > last || e.citing_year < e.published_year)
      throw DomainError("citation event (" + std::to_string(e.published_year) + ", " +
                        std::to_string(e.citing_year) + ") lies outside the window " +
                        std::to_string(c.first_year) + "-" + std::to_string(last));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) throw DomainError("event weights must be positive");
  }
}

/// Tallies events into a p-c matrix.
[[nodiscard]] inline PCMatrix aggregate(const EventCorpus &c) {
  check_corpus(c);
  std::vector<std::vector<double>> rows(c.n);
  for (std::size_t i = 0; i < c.n; ++i) rows[i].assign(c.n - i, 0.0);
  for (const auto &e : c.events) {
    const auto i = static_cast<std::size_t>(e.published_year - c.first_year);
    const auto j = static_cast<std::size_t>(e.citing_year - c.first_year);
    rows[i][j - i] += e.weight;
  }
  return PCMatrix(c.first_year, c.publications, rows, c.label);
}

/// Re-expresses a matrix as events: integral cells become that many unit
/// events, other cells a single event carrying the cell value.
[[nodiscard]] inline EventCorpus events_from_matrix(const PCMatrix &m) {
  EventCorpus c{m.label(), m.first_year(), m.size(), {m.pubs().begin(), m.pubs().end()}, {}};
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i; j < m.size(); ++j) {
      const double v = m.cites(i, j);
      if (v == 0.0) continue;
      const int py = m.first_year() + static_cast<int>(i);
      const int cy = m.first_year() + static_cast<int>(j);
      if (v == std::floor(v) && v < 1e7) {
        for (long k = 0; k < static_cast<long>(v); ++k) c.events.push_back({py, cy, 1.0});
      } else {
        c.events.push_back({py, cy, v});
      }
    }
  }
  return c;
}

/// Rhythm sequence by literal summation over events. Internal when `reference`
/// is absent; otherwise `observed`'s citations against `reference`'s age profile.
[[nodiscard]] inline RhythmSequence brute_force_rhythm(const EventCorpus &observed,
                                                       const std::optional<EventCorpus> &reference = std::nullopt) {
  check_corpus(observed);
  const EventCorpus &ref = reference ? *reference : observed;
  if (reference) {
    check_corpus(*reference);
    if (reference->first_year != observed.first_year || reference->n != observed.n)
      throw AlignmentError("event corpora cover different windows");
  }
  const std::size_t n = observed.n;

  std::vector<double> age_average(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double cited = 0.0;
    for (const auto &e : ref.events)
      if (static_cast<std::size_t>(e.citing_year - e.published_year) == k) cited += e.weight;
    double papers = 0.0;
    for (std::size_t y = 0; y + k < n; ++y) papers += ref.publications[y];
    if (papers > 0.0) age_average[k] = cited / papers;
    else if (cited > 0.0) throw InconsistentDataError("citations without publications in the reference corpus");
  }

  RhythmSequence seq;
  seq.kind = reference ? RhythmKind::cross : RhythmKind::internal;
  seq.observed_source = observed.label;
  seq.expectation_source = ref.label;
  seq.profile = CkProfile{age_average, ref.label};
  double sum_observed = 0.0;
  double sum_expected = 0.0;
  double sum_ratio = 0.0;
  bool all_defined = true;
  for (std::size_t i = 0; i < n; ++i) {
    const int year = observed.first_year + static_cast<int>(i);
    RhythmPoint pt;
    pt.year = year;
    pt.publications = observed.publications[i];
    for (const auto &e : observed.events)
      if (e.published_year == year) pt.observed += e.weight;
    double reachable = 0.0;
    for (std::size_t k = 0; k < n - i; ++k) reachable += age_average[k];
    pt.expected = observed.publications[i] * reachable;
    if (pt.expected > 0.0) {
      pt.ratio = pt.observed / pt.expected;
      sum_ratio += *pt.ratio;
    } else {
      all_defined = false;
      seq.undefined_years.push_back(year);
    }
    sum_observed += pt.observed;
    sum_expected += pt.expected;
    seq.points.push_back(pt);
  }
  if (sum_expected > 0.0) seq.i1 = sum_observed / sum_expected;
  if (all_defined) seq.i2 = sum_ratio / static_cast<double>(n);
  return seq;
}

/// Expected citations per paper by age: a log-normal bump in age, optionally
/// with rare "hit" publication years whose citations are multiplied.
struct CitationCurve {
  /// Mean citations per paper per year at the peak age.
  double peak_rate = 1.5;
  /// Age (1 = publication year) at which the curve peaks.
  double peak_age = 4.0;
  /// Width of the bump in log-age.
  double spread = 0.8;
  double heavy_tail_probability = 0.0;
  double heavy_tail_boost = 20.0;

  [[nodiscard]] double rate(int age) const {
    const double z = std::log(static_cast<double>(age) / peak_age) / spread;
    return peak_rate * std::exp(-0.5 * z * z);
  }
};

struct GenerateSpec {
  std::size_t n = 10;
  int first_year = 2000;
  int min_pubs = 5;
  int max_pubs = 50;
  CitationCurve curve;
  /// Random real event weights in (0, 1] and fractional publication counts.
  bool fractional = false;
};

/// Deterministic synthetic corpus: equal seeds and specs give equal corpora
/// for a given standard library.
[[nodiscard]] inline EventCorpus generate(std::uint64_t seed, const GenerateSpec &spec) {
  if (spec.n == 0) throw ArgumentError("n must be at least 1");
  if (spec.min_pubs < 0 || spec.max_pubs < spec.min_pubs)
    throw ArgumentError("publication range [" + std::to_string(spec.min_pubs) + ", " +
                        std::to_string(spec.max_pubs) + "] is invalid");
  const auto &cv = spec.curve;
  if (!(cv.peak_rate >= 0.0) || !(cv.peak_age > 0.0) || !(cv.spread > 0.0) ||
      !(cv.heavy_tail_probability >= 0.0 && cv.heavy_tail_probability <= 1.0) || !(cv.heavy_tail_boost >= 1.0))
    throw ArgumentError("citation curve parameters out of range");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pubs_dist(spec.min_pubs, spec.max_pubs);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  EventCorpus c;
  c.label = "synthetic-" + std::to_string(seed);
  c.first_year = spec.first_year;
  c.n = spec.n;
  c.publications.resize(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    double p = pubs_dist(rng);
    if (spec.fractional && p > 0.0) p -= unit(rng) * 0.5;
    c.publications[i] = p;
    const bool hit = unit(rng) < cv.heavy_tail_probability;
    for (std::size_t j = i; j < spec.n; ++j) {
      double mean = p * cv.rate(static_cast<int>(j - i + 1));
      if (hit) mean *= cv.heavy_tail_boost;
      if (mean <= 0.0) continue;
      std::poisson_distribution<long> count_dist(mean);
      const long count = count_dist(rng);
      const int py = spec.first_year + static_cast<int>(i);
      const int cy = spec.first_year + static_cast<int>(j);
      for (long e = 0; e < count; ++e)
        c.events.push_back({py, cy, spec.fractional ? 1.0 - unit(rng) : 1.0});
    }
  }
  return c;
}

/// Event list CSV: header `published_year,citing_year,weight`, one event per line.
[[nodiscard]] inline std::string write_events(const std::vector<CitationEvent> &events) {
  std::string out = "published_year,citing_year,weight\n";
  for (const auto &e : events)
    out += std::to_string(e.published_year) + "," + std::to_string(e.citing_year) + "," +
           format_number(e.weight) + "\n";
  return out;
}

[[nodiscard]] inline std::vector<CitationEvent> parse_events(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || detail::trim(lines[0]) != "published_year,citing_year,weight")
    throw LayoutError("header must read 'published_year,citing_year,weight'", 1, 0);
  std::vector<CitationEvent> events;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (detail::trim(lines[ln]).empty()) continue;
    const auto cells = detail::split_cells(lines[ln]);
    if (cells.size() != 3) throw LayoutError("expected 3 cells", ln + 1, 0);
    const auto py = detail::to_year(detail::trim(cells[0]));
    const auto cy = detail::to_year(detail::trim(cells[1]));
    const auto w = detail::to_number(detail::trim(cells[2]));
    if (!py) throw ParseError("published_year is not an integer", ln + 1, 1);
    if (!cy) throw ParseError("citing_year is not an integer", ln + 1, 2);
    if (!w) throw ParseError("weight is not a number", ln + 1, 3);
    events.push_back({*py, *cy, *w});
  }
  return events;
}

/// Result of comparing main-path sequences with the brute-force path.
struct EquivalenceReport {
  std::size_t comparisons = 0;
  double max_relative_error = 0.0;
  std::vector<std::string> failures;

  [[nodiscard]] bool ok() const noexcept { return failures.empty(); }
};

namespace detail {

inline double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline void compare_value(const std::string &what, const std::optional<double> &main,
                          const std::optional<double> &reference, double tolerance, EquivalenceReport &report) {
  ++report.comparisons;
  if (main.has_value() != reference.has_value()) {
    report.failures.push_back(what + ": defined on one path only");
    return;
  }
  if (!main) return;
  const double err = relative_error(*main, *reference);
  report.max_relative_error = std::max(report.max_relative_error, err);
  if (err > tolerance)
    report.failures.push_back(what + ": " + format_number(*main) + " vs " + format_number(*reference));
}

} // namespace detail

/// Compares every ratio, I1 and I2 of two sequences within a relative tolerance.
inline void compare_sequences(const std::string &context, const RhythmSequence &main,
                              const RhythmSequence &reference, double tolerance, EquivalenceReport &report) {
  if (main.size() != reference.size()) {
    report.failures.push_back(context + ": sequence lengths differ");
    return;
  }
  for (std::size_t i = 0; i < main.size(); ++i)
    detail::compare_value(context + " R_" + std::to_string(main.points[i].year), main.points[i].ratio,
                          reference.points[i].ratio, tolerance, report);
  detail::compare_value(context + " I1", main.i1, reference.i1, tolerance, report);
  detail::compare_value(context + " I2", main.i2, reference.i2, tolerance, report);
}

struct EquivalenceOptions {
  std::uint64_t seed = 1;
  std::size_t trials = 200;
  std::size_t min_years = 1;
  std::size_t max_years = 20;
  double tolerance = 1e-9;
};

/// Generates `trials` pairs of corpora and checks internal and cross rhythms
/// of the main path against the brute-force path.
[[nodiscard]] inline EquivalenceReport run_random_equivalence(const EquivalenceOptions &options) {
  EquivalenceReport report;
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> years(options.min_years, options.max_years);
  std::uniform_int_distribution<int> low_pubs(1, 20);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t t = 0; t < options.trials; ++t) {
    GenerateSpec spec;
    spec.n = years(rng);
    spec.min_pubs = low_pubs(rng);
    spec.max_pubs = spec.min_pubs + 30;
    spec.fractional = coin(rng);
    spec.curve.heavy_tail_probability = coin(rng) ? 0.1 : 0.0;
    const auto b = generate(rng(), spec);
    const auto a = generate(rng(), spec);
    const std::string ctx = "trial " + std::to_string(t);
    try {
      compare_sequences(ctx + " internal", internal_rhythm(aggregate(b)), brute_force_rhythm(b), options.tolerance,
                        report);
      compare_sequences(ctx + " cross", cross_rhythm(aggregate(b), aggregate(a)), brute_force_rhythm(b, a),
                        options.tolerance, report);
    } catch (const Error &e) {
      report.failures.push_back(ctx + ": " + e.what());
    }
  }
  return report;
}

} // namespace rhythm::oracle
