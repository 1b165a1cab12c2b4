// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "fixtures.hpp"

using namespace rhythm;

namespace {

/// Collects the first few reasons a criterion failed.
class Check {
public:
  void expect(bool ok, const std::string &what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ << (failures_ > 1 ? "; " : "") << what;
  }

  void near(double got, double want, double tol, const std::string &what) {
    std::ostringstream s;
    s.precision(10);
    s << what << " = " << got << ", expected " << want << " +/- " << tol;
    expect(std::abs(got - want) <= tol, s.str());
  }

  void rel(double got, double want, double tol, const std::string &what) {
    std::ostringstream s;
    s.precision(17);
    s << what << ": " << got << " vs " << want;
    expect(fixtures::relative_error(got, want) <= tol, s.str());
  }

  [[nodiscard]] bool ok() const { return failures_ == 0; }
  [[nodiscard]] std::string notes() const {
    return notes_.str() + (failures_ > 3 ? " (+" + std::to_string(failures_ - 3) + " more)" : "");
  }

private:
  int failures_ = 0;
  std::ostringstream notes_;
};

const fixtures::PrintedValues &printed() {
  static const fixtures::PrintedValues v;
  return v;
}

void ratios_match(Check &c, const RhythmSequence &seq, const std::string &series) {
  for (const auto &[year, r] : printed().column(series, "R")) {
    const auto &p = seq.at_year(year);
    c.expect(p.ratio.has_value(), series + " R_" + std::to_string(year) + " undefined");
    if (p.ratio) c.near(*p.ratio, r, 0.002, series + " R_" + std::to_string(year));
  }
  c.expect(printed().column(series, "R").size() == 10, series + ": expected ten printed ratios");
}

void criterion1(Check &c) {
  const auto seq = internal_rhythm(fixtures::china());
  ratios_match(c, seq, "china_internal");
  c.near(*seq.i2, 1.036, 0.002, "I2");
  c.near(*seq.i1, 1.0, 1e-9, "I1");
}

void criterion2(Check &c) {
  const auto seq = internal_rhythm(fixtures::world_without_china());
  ratios_match(c, seq, "world_without_china_internal");
  c.near(*seq.i2, 1.060, 0.002, "I2");
}

void criterion3(Check &c) {
  const auto seq = actor_vs_collective(fixtures::scim(), "china");
  ratios_match(c, seq, "china_external");
  c.near(*seq.i1, 0.9542, 0.0005, "I1");
  c.near(*seq.i2, 0.9997, 0.0005, "I2");
  c.near(seq.at_year(2015).expected, 2730.114, 0.05, "E_2015");
}

void criterion4(Check &c) {
  const struct {
    const char *stem;
    double i2;
  } cases[] = {{"brazil", 1.092}, {"netherlands", 0.873}, {"world_without_brazil_netherlands", 1.058}};
  for (const auto &k : cases) {
    const auto seq = internal_rhythm(fixtures::matrix(k.stem));
    ratios_match(c, seq, std::string(k.stem) + "_internal");
    c.near(*seq.i2, k.i2, 0.002, std::string(k.stem) + " I2");
  }
  const auto nl = internal_rhythm(fixtures::netherlands());
  c.near(*nl.at_year(2017).ratio, 2.406, 0.002, "NL R_2017");
  c.near(*nl.at_year(2022).ratio, 0.163, 0.002, "NL R_2022");
}

void criterion5(Check &c) {
  const auto r = actor_vs_actor(fixtures::scim(), "brazil", "netherlands");
  ratios_match(c, r.first(), "brazil_external");
  ratios_match(c, r.second(), "netherlands_external");
  c.near(*r.first().i1, 0.856, 0.002, "Brazil I1");
  c.near(*r.first().i2, 0.888, 0.002, "Brazil I2");
  c.near(*r.second().i1, 2.307, 0.002, "NL I1");
  c.near(*r.second().i2, 1.858, 0.002, "NL I2");
  c.near(*r.second().at_year(2017).ratio, 6.311, 0.002, "NL R_2017");
  const auto &verdict = r.per_year_winner.at(2017 - r.first().first_year());
  c.expect(verdict.year == 2017 && verdict.winner == "netherlands", "winner(2017) is not netherlands");
}

void criterion6(Check &c) {
  const auto lhs = add(fixtures::china(), fixtures::world_without_china());
  const auto rhs = add(add(fixtures::brazil(), fixtures::netherlands()), fixtures::world_without_brazil_netherlands());
  c.expect(lhs.same_cells(rhs), "china + world_without_china differs from brazil + netherlands + world_without_brazil_netherlands");
  const auto scim = fixtures::scim();
  c.expect(scim.total().same_cells(lhs), "scim_total.csv differs from china + world_without_china");
  c.expect(complement(scim, {"brazil", "netherlands"}).same_cells(fixtures::world_without_brazil_netherlands()),
           "complement(SCIM, {Brazil, NL}) differs from world_without_brazil_netherlands.csv");
  c.expect(complement(scim, {"china"}).same_cells(fixtures::world_without_china()),
           "complement(SCIM, {China}) differs from world_without_china.csv");
}

void criterion7(Check &c) {
  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> factor(0.01, 100.0);
  for (int t = 0; t < 1000; ++t) {
    const auto m = fixtures::random_matrix(rng);
    const auto other = [&] {
      // A reference matrix on the same window.
      auto r = fixtures::random_matrix(rng, {m.size(), m.size(), true});
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < r.size(); ++i) rows.emplace_back(r.row(i).begin(), r.row(i).end());
      return PCMatrix(m.first_year(), std::vector<double>(r.pubs().begin(), r.pubs().end()), rows, "reference");
    }();
    const std::string ctx = "trial " + std::to_string(t);

    const auto in = internal_rhythm(m);
    double o = 0.0, e = 0.0;
    for (const auto &p : in.points) {
      o += p.observed;
      e += p.expected;
    }
    c.rel(o, e, 1e-9, ctx + " sum O vs sum E");

    const auto self = cross_rhythm(m, m);
    for (std::size_t i = 0; i < m.size(); ++i) {
      c.expect(self.points[i].ratio.has_value() == in.points[i].ratio.has_value(), ctx + " definedness");
      if (in.points[i].ratio) c.rel(*self.points[i].ratio, *in.points[i].ratio, 1e-12, ctx + " cross(m,m)");
    }

    const double fc = factor(rng), fp = factor(rng);
    const auto by_c = internal_rhythm(scale(m, fc, 1.0));
    const auto by_p = internal_rhythm(scale(m, 1.0, fp));
    const auto ext = cross_rhythm(m, other);
    const auto ext_scaled = cross_rhythm(scale(m, fc, 1.0), other);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (in.points[i].ratio) {
        c.rel(*by_c.points[i].ratio, *in.points[i].ratio, 1e-9, ctx + " citation scale");
        c.rel(*by_p.points[i].ratio, *in.points[i].ratio, 1e-9, ctx + " publication scale");
      }
      if (ext.points[i].ratio) c.rel(*ext_scaled.points[i].ratio, fc * *ext.points[i].ratio, 1e-9, ctx + " linearity");
    }
  }
}

void criterion8(Check &c) {
  oracle::EquivalenceOptions options;
  options.seed = 7;
  options.trials = 200;
  options.tolerance = 1e-9;
  const auto report = oracle::run_random_equivalence(options);
  c.expect(report.comparisons > 0, "no comparisons made");
  for (const auto &f : report.failures) c.expect(false, f);
}

void criterion9(Check &c) {
  for (const auto *stem : {"china", "world_without_china", "brazil", "netherlands", "world_without_brazil_netherlands",
                           "scim_total"}) {
    const auto text = read_text_file(fixtures::data(std::string(stem) + ".csv"));
    const auto m = parse_matrix(text, stem);
    c.expect(write_matrix(m) == text, std::string(stem) + ": write(parse(text)) != text");
    c.expect(parse_matrix(write_matrix(m), stem) == m, std::string(stem) + ": parse(write(m)) != m");
  }
  std::mt19937_64 rng(99);
  for (int t = 0; t < 1000; ++t) {
    const auto m = fixtures::random_matrix(rng);
    c.expect(parse_matrix(write_matrix(m), m.label()) == m, "random matrix " + std::to_string(t) + " round trip");
  }
  for (const auto *stem : {"china", "world_without_china", "brazil", "netherlands", "world_without_brazil_netherlands"}) {
    const auto m = fixtures::matrix(stem);
    const auto column = printed().column(stem, "O");
    c.expect(column.size() == 10, std::string(stem) + ": expected ten printed O values");
    for (const auto &[year, o] : column)
      c.expect(observed_citations(m, Year{year}) == o, std::string(stem) + " O_" + std::to_string(year));
  }
}

void criterion10(Check &c) {
  using fixtures::cli;
  using fixtures::quoted;
  const auto manifest = quoted(fixtures::data("scim.manifest"));

  const auto ext = fixtures::run(cli() + " external " + manifest + " --actor china --format csv");
  c.expect(ext.status == 0, "external exited with " + std::to_string(ext.status) + ": " + ext.output);
  if (ext.status == 0) {
    const auto t = fixtures::parse_csv_table(ext.output);
    c.expect(t.order.size() == 10, "external csv does not have ten rows");
    for (const char *q : {"P", "O", "R"})
      for (const auto &[year, v] : printed().column("china_external", q))
        c.near(t.number(std::to_string(year), q), v, 0.0005, std::string("csv ") + q + "_" + std::to_string(year));
    c.near(t.number("2015", "E"), 2730.114, 0.0005, "csv E_2015");
  }

  const auto cmp = fixtures::run(cli() + " compare " + manifest + " --a brazil --b netherlands --format svg");
  c.expect(cmp.status == 0, "compare exited with " + std::to_string(cmp.status) + ": " + cmp.output);
  const auto series = fixtures::svg_series_points(cmp.output);
  c.expect(series == std::vector<std::size_t>{10, 10}, "svg does not hold two series of ten points");
  c.expect(cmp.output.find("<line class=\"reference\" data-value=\"1\"") != std::string::npos,
           "svg has no reference line at R = 1");
}

} // namespace

int main() {
  const std::pair<const char *, std::function<void(Check &)>> criteria[] = {
      {"golden China internal", criterion1},
      {"golden SCIM without China internal", criterion2},
      {"golden China external", criterion3},
      {"golden Brazil, Netherlands, SCIM minus both internal", criterion4},
      {"golden pairwise external Brazil vs Netherlands", criterion5},
      {"partition consistency of the fixtures", criterion6},
      {"property suite over 1000 random matrices", criterion7},
      {"oracle equivalence over 200 random corpora", criterion8},
      {"ingestion round trip and printed O columns", criterion9},
      {"CLI csv and svg contract", criterion10},
  };
  int failed = 0;
  int number = 0;
  for (const auto &[name, run] : criteria) {
    ++number;
    Check c;
    try {
      run(c);
    } catch (const std::exception &e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << (c.ok() ? "PASS" : "FAIL") << " " << number << " " << name;
    if (!c.ok()) std::cout << ": " << c.notes();
    std::cout << "\n";
    failed += c.ok() ? 0 : 1;
  }
  std::cout << (10 - failed) << "/10 criteria passed\n";
  return failed == 0 ? 0 : 1;
}
