// rhythm: command-line front end for internal and external rhythm indicators.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <unistd.h>

#include <CLI11.hpp>

#include "rhythm/all.hpp"

namespace {

namespace fs = std::filesystem;
using namespace rhythm;

enum class Format { text, csv, svg };

struct Output {
  Format format = Format::text;
  std::string path; // empty: standard output
  int decimals = 3;
};

void add_output_options(CLI::App *cmd, Output &out) {
  const std::map<std::string, Format> formats{{"text", Format::text}, {"csv", Format::csv}, {"svg", Format::svg}};
  cmd->add_option("--format", out.format, "Output format")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  cmd->add_option("--out", out.path, "Write to this file instead of standard output");
  cmd->add_option("--decimals", out.decimals, "Decimal places in tables")->check(CLI::NonNegativeNumber);
}

bool use_color(const Output &out) {
  return out.path.empty() && out.format == Format::text && std::getenv("RHYTHM_NO_COLOR") == nullptr &&
         isatty(fileno(stdout)) != 0;
}

void emit(const Output &out, const std::string &content) {
  if (out.path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream file(out.path, std::ios::binary);
  if (!file) throw IoError("cannot write '" + out.path + "'");
  file << content;
}

std::string render(const Output &out, const report::Table &table) {
  if (out.format == Format::csv) return report::render_csv(table);
  return report::render_text(table, {use_color(out)});
}

int cmd_validate(const fs::path &manifest_path, const ValidationOptions &thresholds) {
  const auto manifest = parse_manifest(read_text_file(manifest_path), manifest_path.parent_path());
  std::optional<PCMatrix> total;
  if (manifest.total) total = read_matrix_file(*manifest.total, manifest.label).matrix;
  std::vector<Constituent> parts;
  for (const auto &actor : manifest.actors)
    parts.push_back({actor.id, actor.label, read_matrix_file(actor.path, actor.label).matrix});
  const Collective collective(manifest.label, std::move(total), std::move(parts));

  auto options = thresholds;
  options.assert_partition = manifest.assert_partition;
  const auto report = validate_collective(collective, options);

  std::cout << collective.label() << ": " << collective.constituents().size() << " constituents, window "
            << collective.total().first_year() << "-" << collective.total().last_year() << "\n";
  for (const auto &f : report.findings) std::cout << to_string(f.severity) << " [" << f.code << "] " << f.message << "\n";
  std::cout << report.count(Severity::error) << " error(s), " << report.count(Severity::warning) << " warning(s)\n";
  return report.ok() ? 0 : 1;
}

int cmd_internal(const fs::path &matrix_path, const Output &out) {
  const auto file = read_matrix_file(matrix_path);
  const auto seq = internal_rhythm(file.matrix);
  if (out.format == Format::svg)
    emit(out, report::render_svg("Internal rhythm of " + seq.observed_source,
                                 {report::chart_series(seq, seq.observed_source)}));
  else
    emit(out, render(out, report::internal_table(seq, out.decimals)));
  return 0;
}

int cmd_external(const fs::path &manifest_path, const std::string &actor, const Output &out) {
  const auto loaded = load_manifest(manifest_path);
  const auto &part = loaded.collective.constituent(actor);
  const auto seq = actor_vs_collective(loaded.collective, actor);
  for (const auto &f : loaded.report.findings) std::cerr << to_string(f.severity) << ": " << f.message << "\n";
  if (out.format == Format::svg)
    emit(out, report::render_svg(part.label + "'s external rhythm sequence", {report::chart_series(seq, part.label)}));
  else
    emit(out, render(out, report::external_table(seq, out.decimals)));
  return 0;
}

int cmd_compare(const fs::path &manifest_path, const std::string &u, const std::string &v, double tie_tolerance,
                const Output &out) {
  const auto loaded = load_manifest(manifest_path);
  const auto result = actor_vs_actor(loaded.collective, u, v, tie_tolerance);
  for (const auto &f : loaded.report.findings) std::cerr << to_string(f.severity) << ": " << f.message << "\n";
  if (out.format == Format::svg) {
    const auto &lu = loaded.collective.constituent(u).label;
    const auto &lv = loaded.collective.constituent(v).label;
    emit(out, report::render_svg("External rhythm sequences of " + lu + " and " + lv,
                                 {report::chart_series(result.first(), lu, true),
                                  report::chart_series(result.second(), lv, false)}));
  } else {
    emit(out, render(out, report::comparison_table(result, out.decimals)));
  }
  return 0;
}

int cmd_windows(const fs::path &matrix_path, std::size_t width, const Output &out) {
  if (out.format == Format::svg) throw ArgumentError("windows supports text and csv output only");
  const auto file = read_matrix_file(matrix_path);
  const auto series = sliding_windows(file.matrix, width);
  emit(out, render(out, report::windows_table(series, out.decimals)));
  return 0;
}

bool looks_like_matrix(const std::string &text) { return text.rfind("year,pubs", 0) == 0; }

int cmd_oracle_check(const fs::path &input, std::uint64_t seed, std::size_t trials) {
  constexpr double tolerance = 1e-9;
  oracle::EquivalenceReport result;
  const std::string text = read_text_file(input);
  if (looks_like_matrix(text)) {
    const auto m = read_matrix_file(input).matrix;
    oracle::compare_sequences(m.label() + " internal", internal_rhythm(m),
                              oracle::brute_force_rhythm(oracle::events_from_matrix(m)), tolerance, result);
  } else {
    const auto loaded = load_manifest(input);
    const auto &c = loaded.collective;
    for (const auto &part : c.constituents()) {
      const auto events = oracle::events_from_matrix(part.matrix);
      oracle::compare_sequences(part.id + " internal", internal_rhythm(part.matrix), oracle::brute_force_rhythm(events),
                                tolerance, result);
      oracle::compare_sequences(part.id + " external", actor_vs_collective(c, part.id),
                                oracle::brute_force_rhythm(events, oracle::events_from_matrix(complement(c, {part.id}))),
                                tolerance, result);
    }
  }
  const std::size_t data_checks = result.comparisons;

  oracle::EquivalenceOptions options;
  options.seed = seed;
  options.trials = trials;
  options.tolerance = tolerance;
  const auto random = oracle::run_random_equivalence(options);
  result.comparisons += random.comparisons;
  result.max_relative_error = std::max(result.max_relative_error, random.max_relative_error);
  result.failures.insert(result.failures.end(), random.failures.begin(), random.failures.end());

  std::cout << "data checks: " << data_checks << ", random trials: " << trials << " (seed " << seed
            << "), comparisons: " << result.comparisons << "\n";
  std::cout << "max relative error: " << result.max_relative_error << "\n";
  for (const auto &f : result.failures) std::cout << "MISMATCH " << f << "\n";
  std::cout << (result.ok() ? "oracle agrees" : "oracle disagrees") << "\n";
  return result.ok() ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Internal and external rhythm indicators from publication-citation matrices", "rhythm"};
  app.require_subcommand(1);

  std::string manifest_path;
  std::string matrix_path;
  Output out;

  ValidationOptions thresholds;
  auto *validate = app.add_subcommand("validate", "Check a collective manifest");
  validate->add_option("manifest", manifest_path, "Collective manifest")->required();
  validate->add_option("--dominance", thresholds.dominance_threshold, "Publication share that counts as dominant");
  validate->add_option("--smallness", thresholds.smallness_threshold, "Smallest acceptable complement size");

  auto *internal = app.add_subcommand("internal", "Internal rhythm of one matrix");
  internal->add_option("matrix", matrix_path, "Matrix CSV")->required();
  add_output_options(internal, out);

  std::string actor;
  auto *external = app.add_subcommand("external", "External rhythm of an actor against the rest of its collective");
  external->add_option("manifest", manifest_path, "Collective manifest")->required();
  external->add_option("--actor", actor, "Actor id")->required();
  add_output_options(external, out);

  std::string actor_a, actor_b;
  double tie_tolerance = default_tie_tolerance;
  auto *compare = app.add_subcommand("compare", "Compare two actors against the collective without both");
  compare->add_option("manifest", manifest_path, "Collective manifest")->required();
  compare->add_option("--a", actor_a, "First actor id")->required();
  compare->add_option("--b", actor_b, "Second actor id")->required();
  compare->add_option("--tie-tolerance", tie_tolerance, "Ratios closer than this are a tie")
      ->check(CLI::NonNegativeNumber);
  add_output_options(compare, out);

  long width = 0;
  auto *windows = app.add_subcommand("windows", "Internal rhythm over sliding windows");
  windows->add_option("matrix", matrix_path, "Matrix CSV")->required();
  windows->add_option("--width", width, "Window length in years")->required();
  add_output_options(windows, out);

  std::string oracle_input;
  std::uint64_t seed = 1;
  std::size_t trials = 200;
  auto *oracle_check = app.add_subcommand("oracle-check", "Cross-check the main path against the brute-force oracle");
  oracle_check->add_option("input", oracle_input, "Manifest or matrix CSV")->required();
  oracle_check->add_option("--seed", seed, "Seed for random corpora");
  oracle_check->add_option("--trials", trials, "Number of random corpus pairs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(manifest_path, thresholds);
    if (*internal) return cmd_internal(matrix_path, out);
    if (*external) return cmd_external(manifest_path, actor, out);
    if (*compare) return cmd_compare(manifest_path, actor_a, actor_b, tie_tolerance, out);
    if (*windows) {
      if (width < 1) throw RangeError("--width must be at least 1");
      return cmd_windows(matrix_path, static_cast<std::size_t>(width), out);
    }
    if (*oracle_check) return cmd_oracle_check(oracle_input, seed, trials);
  } catch (const ValidationFailed &e) {
    std::cerr << "rhythm: " << e.what() << "\n";
    return 1;
  } catch (const rhythm::Error &e) {
    std::cerr << "rhythm: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
