#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rhythm/error.hpp"

namespace rhythm {

/// Calendar year. Kept distinct from row offsets so the two cannot be mixed up.
struct Year {
  int value;
  friend auto operator<=>(const Year &, const Year &) = default;
};

/// Publication-citation matrix over n consecutive years.
///
/// Row i holds the publication count P_i of year first_year + i and the
/// citations C_ij received in year first_year + j, for j >= i. Offsets are
/// 0-based; the calendar year of offset i is year(i). Counts are
/// non-negative reals so fractional counting fits without a separate type.
///
/// Citations are stored packed, row after row, so row(i) is contiguous.
class PCMatrix {
public:
  /// `rows[i]` lists C_ii ... C_i,n-1 and therefore has n - i entries.
  PCMatrix(int first_year, std::vector<double> pubs, const std::vector<std::vector<double>> &rows,
           std::string label = {})
      : first_year_(first_year), pubs_(std::move(pubs)), label_(std::move(label)) {
    const std::size_t n = pubs_.size();
    if (n == 0) throw RangeError("p-c matrix must cover at least one year");
    if (rows.size() != n)
      throw ArgumentError("expected " + std::to_string(n) + " citation rows, got " +
                          std::to_string(rows.size()));
    cites_.reserve(packed_size(n));
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != n - i)
        throw ArgumentError("citation row " + std::to_string(i) + " must have " +
                            std::to_string(n - i) + " entries");
      cites_.insert(cites_.end(), rows[i].begin(), rows[i].end());
    }
    check_values();
  }

  static PCMatrix zeros(int first_year, std::size_t n, std::string label = {}) {
    if (n == 0) throw RangeError("p-c matrix must cover at least one year");
    return PCMatrix(first_year, std::vector<double>(n, 0.0),
                    std::vector<double>(packed_size(n), 0.0), std::move(label));
  }

  [[nodiscard]] int first_year() const noexcept { return first_year_; }
  [[nodiscard]] int last_year() const noexcept { return first_year_ + static_cast<int>(size()) - 1; }
  [[nodiscard]] std::size_t size() const noexcept { return pubs_.size(); }
  [[nodiscard]] const std::string &label() const noexcept { return label_; }

  [[nodiscard]] int year(std::size_t i) const {
    check_offset(i);
    return first_year_ + static_cast<int>(i);
  }

  [[nodiscard]] std::size_t offset(Year y) const {
    if (y.value < first_year_ || y.value > last_year())
      throw RangeError("year " + std::to_string(y.value) + " outside window " + window_string());
    return static_cast<std::size_t>(y.value - first_year_);
  }

  [[nodiscard]] double pubs(std::size_t i) const {
    check_offset(i);
    return pubs_[i];
  }
  [[nodiscard]] std::span<const double> pubs() const noexcept { return pubs_; }

  /// C_ij; requires i <= j < n.
  [[nodiscard]] double cites(std::size_t i, std::size_t j) const {
    check_offset(j);
    if (j < i) throw RangeError("citing year precedes publication year");
    return cites_[packed_index(size(), i, j)];
  }

  /// C_ii ... C_i,n-1.
  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    check_offset(i);
    return std::span<const double>(cites_).subspan(packed_index(size(), i, i), size() - i);
  }

  /// All stored citation cells, row-major over the upper triangle.
  [[nodiscard]] std::span<const double> packed_cites() const noexcept { return cites_; }

  [[nodiscard]] PCMatrix relabeled(std::string label) const {
    PCMatrix copy = *this;
    copy.label_ = std::move(label);
    return copy;
  }

  [[nodiscard]] std::string window_string() const {
    return std::to_string(first_year_) + "-" + std::to_string(last_year());
  }

  /// Same window and identical cell values; labels are ignored.
  [[nodiscard]] bool same_cells(const PCMatrix &other) const noexcept {
    return first_year_ == other.first_year_ && pubs_ == other.pubs_ && cites_ == other.cites_;
  }

  friend bool operator==(const PCMatrix &, const PCMatrix &) = default;

  static constexpr std::size_t packed_size(std::size_t n) noexcept { return n * (n + 1) / 2; }

private:
  friend PCMatrix add(const PCMatrix &, const PCMatrix &);
  friend PCMatrix subtract(const PCMatrix &, const PCMatrix &);
  friend PCMatrix submatrix(const PCMatrix &, std::size_t, std::size_t);
  friend PCMatrix scale(const PCMatrix &, double, double);

  PCMatrix(int first_year, std::vector<double> pubs, std::vector<double> packed, std::string label)
      : first_year_(first_year), pubs_(std::move(pubs)), cites_(std::move(packed)),
        label_(std::move(label)) {
    check_values();
  }

  static constexpr std::size_t packed_index(std::size_t n, std::size_t i, std::size_t j) noexcept {
    // rows 0..i-1 hold n + (n-1) + ... + (n-i+1) cells
    return i * n - i * (i - 1) / 2 + (j - i);
  }

  void check_offset(std::size_t i) const {
    if (i >= size())
      throw RangeError("row offset " + std::to_string(i) + " outside a " + std::to_string(size()) +
                       "-year matrix");
  }

  void check_values() const {
    const auto bad = [](double v) { return !std::isfinite(v) || v < 0.0; };
    for (std::size_t i = 0; i < pubs_.size(); ++i)
      if (bad(pubs_[i]))
        throw DomainError("publication count for year " + std::to_string(first_year_ + static_cast<int>(i)) +
                          " must be a finite non-negative number");
    if (std::any_of(cites_.begin(), cites_.end(), bad))
      throw DomainError("citation counts must be finite non-negative numbers");
  }

  int first_year_ = 0;
  std::vector<double> pubs_;
  std::vector<double> cites_;
  std::string label_;
};

inline void require_aligned(const PCMatrix &a, const PCMatrix &b) {
  if (a.first_year() != b.first_year() || a.size() != b.size())
    throw AlignmentError("year windows differ: '" + a.label() + "' covers " + a.window_string() +
                         ", '" + b.label() + "' covers " + b.window_string());
}

/// O_i: citations received inside the window by the publications of row i.
[[nodiscard]] inline double observed_citations(const PCMatrix &m, std::size_t i) {
  const auto r = m.row(i);
  return std::accumulate(r.begin(), r.end(), 0.0);
}

[[nodiscard]] inline double observed_citations(const PCMatrix &m, Year y) {
  return observed_citations(m, m.offset(y));
}

[[nodiscard]] inline std::vector<double> observed_all(const PCMatrix &m) {
  std::vector<double> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = observed_citations(m, i);
  return out;
}

[[nodiscard]] inline double total_citations(const PCMatrix &m) {
  const auto c = m.packed_cites();
  return std::accumulate(c.begin(), c.end(), 0.0);
}

[[nodiscard]] inline double total_publications(const PCMatrix &m) {
  const auto p = m.pubs();
  return std::accumulate(p.begin(), p.end(), 0.0);
}

/// Average citations per paper by age. values[k] is the mean number of
/// citations a paper receives k years after its publication year, so
/// values[0] covers the publication year itself.
struct CkProfile {
  std::vector<double> values;
  std::string source_label;

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
  [[nodiscard]] double operator[](std::size_t k) const { return values.at(k); }
  friend bool operator==(const CkProfile &, const CkProfile &) = default;
};

/// Age profile of `m`. For age k the average runs over the n - k publication
/// years whose window still reaches that age. A window with no publications
/// and no citations yields 0; citations without publications throw.
[[nodiscard]] inline CkProfile ck_profile(const PCMatrix &m) {
  const std::size_t n = m.size();
  CkProfile profile{std::vector<double>(n, 0.0), m.label()};
  for (std::size_t k = 0; k < n; ++k) {
    double cited = 0.0;
    double papers = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) {
      cited += m.cites(i, i + k);
      papers += m.pubs(i);
    }
    if (papers > 0.0) {
      profile.values[k] = cited / papers;
    } else if (cited > 0.0) {
      throw InconsistentDataError("'" + m.label() + "': " + std::to_string(cited) +
                                  " citations at age " + std::to_string(k + 1) +
                                  " but no publications in years " + std::to_string(m.first_year()) +
                                  "-" + std::to_string(m.year(n - 1 - k)));
    }
  }
  return profile;
}

inline PCMatrix add(const PCMatrix &a, const PCMatrix &b) {
  require_aligned(a, b);
  std::vector<double> pubs(a.pubs_.size());
  std::transform(a.pubs_.begin(), a.pubs_.end(), b.pubs_.begin(), pubs.begin(), std::plus<>{});
  std::vector<double> cites(a.cites_.size());
  std::transform(a.cites_.begin(), a.cites_.end(), b.cites_.begin(), cites.begin(), std::plus<>{});
  return PCMatrix(a.first_year_, std::move(pubs), std::move(cites), a.label_ + " + " + b.label_);
}

/// Elementwise a - b. Throws NotSubsetError naming the first negative cell.
inline PCMatrix subtract(const PCMatrix &a, const PCMatrix &b) {
  require_aligned(a, b);
  const std::size_t n = a.size();
  std::vector<double> pubs(n);
  for (std::size_t i = 0; i < n; ++i) {
    pubs[i] = a.pubs_[i] - b.pubs_[i];
    if (pubs[i] < 0.0)
      throw NotSubsetError("'" + b.label_ + "' has more publications than '" + a.label_ +
                           "' in " + std::to_string(a.year(i)));
  }
  std::vector<double> cites(a.cites_.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const std::size_t p = PCMatrix::packed_index(n, i, j);
      cites[p] = a.cites_[p] - b.cites_[p];
      if (cites[p] < 0.0)
        throw NotSubsetError("'" + b.label_ + "' has more citations than '" + a.label_ + "' at (" +
                             std::to_string(a.year(i)) + ", " + std::to_string(a.year(j)) + ")");
    }
  }
  return PCMatrix(a.first_year_, std::move(pubs), std::move(cites), a.label_ + " - " + b.label_);
}

/// The w-year square sub-matrix starting at row offset `start`: publication
/// years and citing years both restricted to start .. start + w - 1.
inline PCMatrix submatrix(const PCMatrix &m, std::size_t start, std::size_t w) {
  if (w == 0 || start + w > m.size())
    throw RangeError("window of " + std::to_string(w) + " years at offset " + std::to_string(start) +
                     " does not fit a " + std::to_string(m.size()) + "-year matrix");
  std::vector<double> pubs(m.pubs_.begin() + static_cast<std::ptrdiff_t>(start),
                           m.pubs_.begin() + static_cast<std::ptrdiff_t>(start + w));
  std::vector<double> cites;
  cites.reserve(PCMatrix::packed_size(w));
  for (std::size_t i = start; i < start + w; ++i)
    for (std::size_t j = i; j < start + w; ++j) cites.push_back(m.cites(i, j));
  return PCMatrix(m.year(start), std::move(pubs), std::move(cites), m.label_);
}

/// Multiplies every citation cell by `citation_factor` and every publication
/// count by `publication_factor`.
inline PCMatrix scale(const PCMatrix &m, double citation_factor, double publication_factor) {
  if (!(citation_factor >= 0.0) || !(publication_factor >= 0.0))
    throw DomainError("scale factors must be non-negative");
  std::vector<double> pubs = m.pubs_;
  for (double &p : pubs) p *= publication_factor;
  std::vector<double> cites = m.cites_;
  for (double &c : cites) c *= citation_factor;
  return PCMatrix(m.first_year_, std::move(pubs), std::move(cites), m.label_);
}

} // namespace rhythm
