// normality-lab: run normality criteria on holomorphic families.
//
//   normality-lab check --config <path> [--out <path>] [--csv <path>]
//   normality-lab corpus list
//   normality-lab corpus run <name> [--indices A..B]
//   normality-lab metrics selftest
//
// Exit codes: 0 success, 1 validation error, 2 evaluation error.

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "normality/normality.hpp"

namespace {

using normality::lab::json;

constexpr int kExitValidation = 1;
constexpr int kExitEvaluation = 2;

normality::lab::IndexRange parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw normality::ValidationError("--indices", "expected A..B");
  normality::lab::IndexRange r;
  auto parse_int = [&](std::string_view s, int& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw normality::ValidationError("--indices", "expected integers in A..B");
  };
  parse_int(std::string_view(text).substr(0, dots), r.first);
  parse_int(std::string_view(text).substr(dots + 2), r.last);
  if (r.first < 1 || r.last < r.first) throw normality::ValidationError("--indices", "range must satisfy 1 <= A <= B");
  return r;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw normality::ValidationError(path, "cannot open for writing");
  out << text;
}

void emit(const json& doc, const std::string& out_path, const std::string& csv_path) {
  const std::string text = doc.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_text(out_path, text);
  if (!csv_path.empty()) write_text(csv_path, normality::lab::report_csv(doc));
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw normality::ValidationError(path, "cannot open config file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw normality::ValidationError(path, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical normality criteria for families of zero-free holomorphic functions"};
  app.require_subcommand(1);

  std::string config_path, out_path, csv_path, corpus_name, indices_text;
  bool no_timing = false;

  auto* check = app.add_subcommand("check", "Run the criteria listed in a JSON config");
  check->add_option("--config", config_path, "Config file")->required();
  check->add_option("--out", out_path, "Write the JSON report here instead of stdout");
  check->add_option("--csv", csv_path, "Write per-index values as CSV");
  check->add_flag("--no-timing", no_timing, "Report timing_ms as 0 for byte-stable output");

  auto* corpus = app.add_subcommand("corpus", "Reference families with known normality");
  corpus->require_subcommand(1);
  auto* corpus_list = corpus->add_subcommand("list", "List corpus entries");
  auto* corpus_run = corpus->add_subcommand("run", "Run the default criteria on a corpus entry");
  corpus_run->add_option("name", corpus_name, "Corpus entry name")->required();
  corpus_run->add_option("--indices", indices_text, "Index range A..B (default 1..40)");
  corpus_run->add_option("--out", out_path, "Write the JSON report here instead of stdout");
  corpus_run->add_option("--csv", csv_path, "Write per-index values as CSV");
  corpus_run->add_flag("--no-timing", no_timing, "Report timing_ms as 0 for byte-stable output");

  auto* metrics = app.add_subcommand("metrics", "Sphere metric utilities");
  metrics->require_subcommand(1);
  auto* selftest = metrics->add_subcommand("selftest", "Run the seeded chordal/spherical invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  const normality::lab::RunOptions opts{!no_timing};
  try {
    if (*check) {
      const auto cfg = normality::lab::config_from_json(read_json_file(config_path));
      emit(normality::lab::run_config(cfg, opts), out_path, csv_path);
    } else if (*corpus_list) {
      json list = json::array();
      for (const auto& e : normality::lab::corpus_list()) {
        json center = json::array();
        for (const auto& c : e.center) center.push_back({c.real(), c.imag()});
        list.push_back({{"name", e.name},
                        {"family", e.family},
                        {"n", e.n},
                        {"ball", {{"center", center}, {"radius", e.radius}}},
                        {"normal", e.truth.normal},
                        {"limit_class", e.truth.limit ? json(normality::criteria::to_string(*e.truth.limit))
                                                      : json(nullptr)},
                        {"notes", e.truth.notes}});
      }
      std::cout << list.dump(2) << "\n";
    } else if (*corpus_run) {
      const auto& entry = normality::lab::corpus_lookup(corpus_name);
      const auto range = indices_text.empty() ? normality::lab::IndexRange{1, 40} : parse_range(indices_text);
      emit(normality::lab::run_config(normality::lab::corpus_config(entry, range), opts), out_path, csv_path);
    } else if (*selftest) {
      bool all = true;
      for (const auto& r : normality::metrics::metrics_selftest()) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
        all = all && r.passed;
      }
      return all ? 0 : kExitEvaluation;
    }
  } catch (const normality::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const normality::ParseError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const normality::Error& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return kExitEvaluation;
  }
  return 0;
}
