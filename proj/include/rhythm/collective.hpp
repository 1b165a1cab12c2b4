#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rhythm/pcmatrix.hpp"
#include "rhythm/rhythm.hpp"

namespace rhythm {

struct Constituent {
  std::string id;
  std::string label;
  PCMatrix matrix;
};

/// A collective A and its named, disjoint constituents B_q.
///
/// The constituents need not cover all of A: whatever is not named stays
/// inside every complement. When no total is supplied it is rebuilt as the
/// sum of the constituents, which requires them to share one window.
class Collective {
public:
  Collective(std::string label, std::optional<PCMatrix> total, std::vector<Constituent> constituents)
      : label_(std::move(label)), constituents_(std::move(constituents)),
        total_supplied_(total.has_value()), total_(total ? std::move(*total) : sum_of(constituents_)) {
    std::set<std::string> seen;
    for (const auto &c : constituents_) {
      if (c.id.empty()) throw ArgumentError("constituent id must not be empty");
      if (!seen.insert(c.id).second) throw ArgumentError("duplicate constituent id '" + c.id + "'");
    }
    total_ = total_.relabeled(label_);
  }

  [[nodiscard]] const std::string &label() const noexcept { return label_; }
  [[nodiscard]] const PCMatrix &total() const noexcept { return total_; }
  [[nodiscard]] bool total_supplied() const noexcept { return total_supplied_; }
  [[nodiscard]] const std::vector<Constituent> &constituents() const noexcept { return constituents_; }

  [[nodiscard]] bool contains(const std::string &id) const {
    return std::any_of(constituents_.begin(), constituents_.end(),
                       [&](const Constituent &c) { return c.id == id; });
  }

  [[nodiscard]] const Constituent &constituent(const std::string &id) const {
    for (const auto &c : constituents_)
      if (c.id == id) return c;
    std::string known;
    for (const auto &c : constituents_) known += (known.empty() ? "" : ", ") + c.id;
    throw LookupError("unknown actor '" + id + "' in collective '" + label_ + "' (known: " + known + ")");
  }

private:
  static PCMatrix sum_of(const std::vector<Constituent> &parts) {
    if (parts.empty()) throw ArgumentError("a collective without a total needs at least one constituent");
    PCMatrix sum = parts.front().matrix;
    for (std::size_t q = 1; q < parts.size(); ++q) sum = add(sum, parts[q].matrix);
    return sum;
  }

  std::string label_;
  std::vector<Constituent> constituents_;
  bool total_supplied_;
  PCMatrix total_;
};

/// The collective without the named constituents, labeled "A \ {ids}".
[[nodiscard]] inline PCMatrix complement(const Collective &c, const std::vector<std::string> &actor_ids) {
  if (actor_ids.empty()) throw ArgumentError("complement needs at least one actor id");
  std::set<std::string> unique;
  std::string names;
  std::optional<PCMatrix> removed;
  for (const auto &id : actor_ids) {
    const auto &part = c.constituent(id);
    if (!unique.insert(id).second) continue;
    names += (names.empty() ? "" : ", ") + id;
    removed = removed ? add(*removed, part.matrix) : part.matrix;
  }
  return subtract(c.total(), removed->relabeled("{" + names + "}"))
      .relabeled(c.label() + " \\ {" + names + "}");
}

/// External rhythm of one actor against the rest of the collective.
/// R_i above 1 means the actor did better than the collective's average in year i.
[[nodiscard]] inline RhythmSequence actor_vs_collective(const Collective &c, const std::string &id) {
  const auto &part = c.constituent(id);
  return cross_rhythm(part.matrix, complement(c, {id}));
}

/// Per-year verdict of a pairwise comparison; no winner means a tie or an
/// undefined ratio on either side.
struct YearVerdict {
  int year = 0;
  std::optional<std::string> winner;
};

struct ComparisonResult {
  std::string baseline_label;
  /// The two compared actor ids, in the order they were requested.
  std::pair<std::string, std::string> actors;
  std::map<std::string, RhythmSequence> sequences;
  std::vector<YearVerdict> per_year_winner;

  [[nodiscard]] const RhythmSequence &first() const { return sequences.at(actors.first); }
  [[nodiscard]] const RhythmSequence &second() const { return sequences.at(actors.second); }
};

inline constexpr double default_tie_tolerance = 1e-9;

/// Compares two actors against the collective without both of them, so that
/// neither is measured partly against itself and both share one baseline.
[[nodiscard]] inline ComparisonResult actor_vs_actor(const Collective &c, const std::string &u,
                                                     const std::string &v,
                                                     double tie_tolerance = default_tie_tolerance) {
  if (u == v) throw ArgumentError("cannot compare actor '" + u + "' with itself");
  const auto &bu = c.constituent(u);
  const auto &bv = c.constituent(v);
  const PCMatrix baseline = complement(c, {u, v});

  ComparisonResult result;
  result.baseline_label = baseline.label();
  result.actors = {u, v};
  auto su = cross_rhythm(bu.matrix, baseline);
  auto sv = cross_rhythm(bv.matrix, baseline);
  for (std::size_t i = 0; i < su.size(); ++i) {
    YearVerdict verdict{su.points[i].year, std::nullopt};
    const auto &ru = su.points[i].ratio;
    const auto &rv = sv.points[i].ratio;
    if (ru && rv && std::abs(*ru - *rv) > tie_tolerance) verdict.winner = *ru > *rv ? u : v;
    result.per_year_winner.push_back(std::move(verdict));
  }
  result.sequences.emplace(u, std::move(su));
  result.sequences.emplace(v, std::move(sv));
  return result;
}

enum class Severity { info, warning, error };

inline const char *to_string(Severity s) noexcept {
  switch (s) {
  case Severity::info: return "info";
  case Severity::warning: return "warning";
  case Severity::error: return "error";
  }
  return "?";
}

struct Finding {
  Severity severity = Severity::info;
  /// Stable machine-readable tag: alignment, subset, partition, dominance, smallness.
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;

  [[nodiscard]] bool ok() const noexcept { return count(Severity::error) == 0; }

  [[nodiscard]] std::size_t count(Severity s) const noexcept {
    return static_cast<std::size_t>(std::count_if(findings.begin(), findings.end(),
                                                  [s](const Finding &f) { return f.severity == s; }));
  }

  [[nodiscard]] bool has(const std::string &code) const {
    return std::any_of(findings.begin(), findings.end(), [&](const Finding &f) { return f.code == code; });
  }
};

struct ValidationOptions {
  bool assert_partition = false;
  /// A constituent holding more than this share of all publications is flagged.
  double dominance_threshold = 0.8;
  /// A complement with fewer publications than this is flagged.
  double smallness_threshold = 20.0;
};

namespace detail {

inline std::string format_count(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  return std::to_string(v);
}

inline std::string format_percent(double share) {
  const long long tenths = std::llround(share * 1000.0);
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10) + "%";
}

// Appends one finding per cell where `part` exceeds `whole`.
inline void report_excess(const PCMatrix &whole, const PCMatrix &part, const std::string &who,
                          std::vector<Finding> &out) {
  const std::size_t n = whole.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (part.pubs(i) > whole.pubs(i))
      out.push_back({Severity::error, "subset",
                     who + ": publications in " + std::to_string(whole.year(i)) + " exceed the total (" +
                         format_count(part.pubs(i)) + " > " + format_count(whole.pubs(i)) + ")"});
    for (std::size_t j = i; j < n; ++j)
      if (part.cites(i, j) > whole.cites(i, j))
        out.push_back({Severity::error, "subset",
                       who + ": citations at (" + std::to_string(whole.year(i)) + ", " +
                           std::to_string(whole.year(j)) + ") exceed the total (" +
                           format_count(part.cites(i, j)) + " > " + format_count(whole.cites(i, j)) + ")"});
  }
}

} // namespace detail

/// Checks window alignment, containment, optional partition completeness and
/// the dominance/smallness conditions under which a comparison is meaningless.
/// Never throws on bad data; everything is reported as findings.
[[nodiscard]] inline ValidationReport validate_collective(const Collective &c,
                                                          const ValidationOptions &options = {}) {
  ValidationReport report;
  auto &out = report.findings;
  const PCMatrix &total = c.total();

  std::vector<const Constituent *> aligned;
  for (const auto &part : c.constituents()) {
    if (part.matrix.first_year() != total.first_year() || part.matrix.size() != total.size()) {
      out.push_back({Severity::error, "alignment",
                     part.id + ": window " + part.matrix.window_string() + " differs from collective window " +
                         total.window_string()});
      continue;
    }
    aligned.push_back(&part);
  }
  if (aligned.size() != c.constituents().size()) return report;

  for (const auto *part : aligned) detail::report_excess(total, part->matrix, part->id, out);

  // The union of all named constituents must also fit; individually contained
  // parts can still overlap.
  if (aligned.size() > 1 && report.ok()) {
    PCMatrix sum = aligned.front()->matrix;
    for (std::size_t q = 1; q < aligned.size(); ++q) sum = add(sum, aligned[q]->matrix);
    detail::report_excess(total, sum, "union of constituents", out);
  }

  if (options.assert_partition && c.total_supplied() && !aligned.empty()) {
    PCMatrix sum = aligned.front()->matrix;
    for (std::size_t q = 1; q < aligned.size(); ++q) sum = add(sum, aligned[q]->matrix);
    double residual_pubs = 0.0;
    double residual_cites = 0.0;
    for (std::size_t i = 0; i < total.size(); ++i) {
      residual_pubs += std::abs(total.pubs(i) - sum.pubs(i));
      for (std::size_t j = i; j < total.size(); ++j) residual_cites += std::abs(total.cites(i, j) - sum.cites(i, j));
    }
    if (residual_pubs != 0.0 || residual_cites != 0.0)
      out.push_back({Severity::error, "partition",
                     "constituents do not add up to the total: residual of " + detail::format_count(residual_pubs) +
                         " publications and " + detail::format_count(residual_cites) + " citations"});
  }

  const double all_pubs = total_publications(total);
  for (const auto *part : aligned) {
    const double pubs = total_publications(part->matrix);
    if (all_pubs > 0.0 && pubs / all_pubs > options.dominance_threshold)
      out.push_back({Severity::warning, "dominance",
                     part->id + " holds " + detail::format_percent(pubs / all_pubs) +
                         " of all publications; comparing it with the rest is not meaningful"});
    const double rest = all_pubs - pubs;
    if (rest < options.smallness_threshold)
      out.push_back({Severity::warning, "smallness",
                     "collective without " + part->id + " has only " + detail::format_count(rest) +
                         " publications"});
  }
  return report;
}

} // namespace rhythm
