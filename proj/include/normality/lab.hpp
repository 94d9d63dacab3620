#pragma once

// Run configuration, the reference corpus of families with known normality,
// and JSON/CSV report serialization used by the normality-lab tool.
//
// Config document:
//   {
//     "family": "z1^j", "n": 1,
//     "indices": {"first": 1, "last": 40},
//     "ball": {"center": [[0.75, 0.0]], "radius": 0.15},
//     "grid": {"points_per_axis": 21, "directions_count": 4, "seed": 7},
//     "criteria": ["mandelbrojt", "marty", "montel", "levi_lower", "classify_limit"],
//     "c": 0.1,                                   // required by levi_lower
//     "tolerances": {"unit": 1e-9, "limit": 1e-3}  // optional
//   }
// A center coordinate is either a real number or a [re, im] pair.
//
// Report document: {config_echo, reports: [{criterion, indices, values,
// trend, verdict}], timing_ms}. Infinite values are written as "inf".

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "normality/criteria.hpp"
#include "normality/error.hpp"
#include "normality/expr.hpp"
#include "normality/geometry.hpp"
#include "normality/mandelbrojt.hpp"

namespace normality::lab {

using json = nlohmann::json;

inline const std::vector<std::string>& known_criteria() {
  static const std::vector<std::string> names{"mandelbrojt", "marty", "montel", "levi_lower", "classify_limit"};
  return names;
}

struct IndexRange {
  int first = 1;
  int last = 40;

  std::vector<int> expand() const {
    std::vector<int> out;
    for (int j = first; j <= last; ++j) out.push_back(j);
    return out;
  }
};

struct RunConfig {
  std::string family;
  int n = 1;
  IndexRange indices;
  CPoint center;
  double radius = 1.0;
  GridSpec grid;
  std::vector<std::string> criteria;
  std::optional<double> c;
  double tol_unit = mandelbrojt::kDefaultUnitTolerance;
  double tol_limit = criteria::kDefaultLimitTolerance;
};

/// Checks the invariants of a config; throws ValidationError naming the field.
inline void validate(const RunConfig& cfg) {
  if (cfg.n < 1) throw ValidationError("n", "dimension must be positive");
  if (cfg.indices.first < 1) throw ValidationError("indices.first", "indices must be positive");
  if (cfg.indices.last < cfg.indices.first) throw ValidationError("indices", "index range is empty");
  if (static_cast<int>(cfg.center.size()) != cfg.n)
    throw ValidationError("ball.center", "expected " + std::to_string(cfg.n) + " coordinates");
  if (!(cfg.radius > 0.0) || !std::isfinite(cfg.radius)) throw ValidationError("ball.radius", "must be positive");
  if (cfg.grid.points_per_axis < 3 || cfg.grid.points_per_axis % 2 == 0)
    throw ValidationError("grid.points_per_axis", "must be odd and at least 3");
  if (cfg.grid.directions_count < 1) throw ValidationError("grid.directions_count", "must be positive");
  if (cfg.criteria.empty()) throw ValidationError("criteria", "at least one criterion is required");
  for (std::size_t k = 0; k < cfg.criteria.size(); ++k) {
    const auto& known = known_criteria();
    if (std::find(known.begin(), known.end(), cfg.criteria[k]) == known.end())
      throw ValidationError("criteria[" + std::to_string(k) + "]", "unknown criterion '" + cfg.criteria[k] + "'");
    if (cfg.criteria[k] == "levi_lower" && !(cfg.c && *cfg.c > 0.0))
      throw ValidationError("c", "levi_lower needs a positive lower bound c");
  }
  if (!(cfg.tol_unit >= 0.0)) throw ValidationError("tolerances.unit", "must be non-negative");
  if (!(cfg.tol_limit > 0.0)) throw ValidationError("tolerances.limit", "must be positive");
  try {
    expr::parse_family(cfg.family, cfg.n);
  } catch (const ParseError& e) {
    throw ValidationError("family", e.what());
  }
}

namespace detail {

template <typename T>
T get_field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw ValidationError(path, "missing field");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(path, "wrong type");
  }
}

inline Complex parse_coordinate(const json& c, const std::string& path) {
  if (c.is_number()) return {c.get<double>(), 0.0};
  if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number())
    return {c[0].get<double>(), c[1].get<double>()};
  throw ValidationError(path, "coordinate must be a number or a [re, im] pair");
}

inline json value_to_json(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

inline std::string format_value(double v) {
  if (std::isinf(v)) return "inf";
  return json(v).dump();
}

}  // namespace detail

inline RunConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("$", "config must be a JSON object");
  RunConfig cfg;
  cfg.family = detail::get_field<std::string>(doc, "family", "family");
  cfg.n = detail::get_field<int>(doc, "n", "n");

  const json indices = doc.contains("indices") ? doc.at("indices") : json();
  if (!indices.is_object()) throw ValidationError("indices", "expected {\"first\": A, \"last\": B}");
  cfg.indices.first = detail::get_field<int>(indices, "first", "indices.first");
  cfg.indices.last = detail::get_field<int>(indices, "last", "indices.last");

  const json ball = doc.contains("ball") ? doc.at("ball") : json();
  if (!ball.is_object()) throw ValidationError("ball", "expected {\"center\": [...], \"radius\": r}");
  if (!ball.contains("center") || !ball.at("center").is_array())
    throw ValidationError("ball.center", "expected an array of coordinates");
  const auto& center = ball.at("center");
  for (std::size_t k = 0; k < center.size(); ++k)
    cfg.center.push_back(detail::parse_coordinate(center[k], "ball.center[" + std::to_string(k) + "]"));
  cfg.radius = detail::get_field<double>(ball, "radius", "ball.radius");

  if (doc.contains("grid")) {
    const auto& grid = doc.at("grid");
    if (!grid.is_object()) throw ValidationError("grid", "expected an object");
    if (grid.contains("points_per_axis"))
      cfg.grid.points_per_axis = detail::get_field<int>(grid, "points_per_axis", "grid.points_per_axis");
    if (grid.contains("directions_count"))
      cfg.grid.directions_count = detail::get_field<int>(grid, "directions_count", "grid.directions_count");
    if (grid.contains("seed")) cfg.grid.seed = detail::get_field<std::uint64_t>(grid, "seed", "grid.seed");
  }

  if (!doc.contains("criteria") || !doc.at("criteria").is_array())
    throw ValidationError("criteria", "expected an array of criterion names");
  const auto& crit = doc.at("criteria");
  for (std::size_t k = 0; k < crit.size(); ++k) {
    if (!crit[k].is_string()) throw ValidationError("criteria[" + std::to_string(k) + "]", "expected a string");
    cfg.criteria.push_back(crit[k].get<std::string>());
  }

  if (doc.contains("c") && !doc.at("c").is_null()) cfg.c = detail::get_field<double>(doc, "c", "c");
  if (doc.contains("tolerances")) {
    const auto& tol = doc.at("tolerances");
    if (!tol.is_object()) throw ValidationError("tolerances", "expected an object");
    if (tol.contains("unit")) cfg.tol_unit = detail::get_field<double>(tol, "unit", "tolerances.unit");
    if (tol.contains("limit")) cfg.tol_limit = detail::get_field<double>(tol, "limit", "tolerances.limit");
  }
  validate(cfg);
  return cfg;
}

inline json config_to_json(const RunConfig& cfg) {
  json center = json::array();
  for (const auto& c : cfg.center) center.push_back({c.real(), c.imag()});
  json doc{
      {"family", cfg.family},
      {"n", cfg.n},
      {"indices", {{"first", cfg.indices.first}, {"last", cfg.indices.last}}},
      {"ball", {{"center", center}, {"radius", cfg.radius}}},
      {"grid",
       {{"points_per_axis", cfg.grid.points_per_axis},
        {"directions_count", cfg.grid.directions_count},
        {"seed", cfg.grid.seed}}},
      {"criteria", cfg.criteria},
      {"tolerances", {{"unit", cfg.tol_unit}, {"limit", cfg.tol_limit}}},
  };
  doc["c"] = cfg.c ? json(*cfg.c) : json(nullptr);
  return doc;
}

inline json report_to_json(const criteria::CriterionReport& r) {
  json values = json::array();
  for (double v : r.values) values.push_back(detail::value_to_json(v));
  return {{"criterion", r.criterion},
          {"indices", r.indices},
          {"values", values},
          {"trend", criteria::to_string(r.trend.trend)},
          {"trend_slope", r.trend.slope},
          {"verdict", r.outcome}};
}

/// Runs one criterion by name.
inline criteria::CriterionReport run_criterion(const std::string& name, const FamilyExpr& f,
                                               const std::vector<int>& indices, const Ball& ball,
                                               const RunConfig& cfg) {
  if (name == "mandelbrojt") return criteria::mandelbrojt_check(f, indices, ball, cfg.grid, cfg.tol_unit);
  if (name == "marty") return criteria::marty_check(f, indices, ball, cfg.grid);
  if (name == "montel") return criteria::montel_check(f, indices, ball, cfg.grid);
  if (name == "levi_lower") return criteria::levi_lower_check(f, indices, ball, cfg.grid, cfg.c.value_or(0.0));
  if (name == "classify_limit") return criteria::classify_limit_report(f, indices, ball, cfg.grid, cfg.tol_limit);
  throw ValidationError("criteria", "unknown criterion '" + name + "'");
}

struct RunOptions {
  bool record_timing = true;
};

/// Executes every requested criterion and returns the report document.
/// Throws ValidationError for bad configs and EvalError for evaluation
/// failures (with the offending index and point).
inline json run_config(const RunConfig& cfg, const RunOptions& opts = {}) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  const FamilyExpr f = expr::parse_family(cfg.family, cfg.n);
  const Ball ball(cfg.center, cfg.radius);
  const auto indices = cfg.indices.expand();

  json reports = json::array();
  for (const auto& name : cfg.criteria) reports.push_back(report_to_json(run_criterion(name, f, indices, ball, cfg)));

  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return {{"config_echo", config_to_json(cfg)},
          {"reports", reports},
          {"timing_ms", opts.record_timing ? elapsed : 0.0}};
}

/// CSV sidecar: header "index,criterion,value,is_infinite".
inline std::string report_csv(const json& doc) {
  std::ostringstream os;
  os << "index,criterion,value,is_infinite\n";
  for (const auto& r : doc.at("reports")) {
    const auto& idx = r.at("indices");
    const auto& vals = r.at("values");
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const bool inf = vals[k].is_string();
      os << idx[k].get<int>() << ',' << r.at("criterion").get<std::string>() << ','
         << (inf ? std::string("inf") : detail::format_value(vals[k].get<double>())) << ','
         << (inf ? "true" : "false") << '\n';
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Corpus

struct GroundTruth {
  bool normal = true;
  std::optional<criteria::LimitClass> limit;
  std::string notes;
};

struct CorpusEntry {
  std::string name;
  std::string family;
  int n = 1;
  CPoint center;
  double radius = 1.0;
  GroundTruth truth;
  bool core = true;  // false for auxiliary entries outside the reference set

  Ball ball() const { return Ball(center, radius); }
  FamilyExpr parsed() const { return expr::parse_family(family, n); }
};

/// Default sampling for corpus runs: 21 points per axis in C, 13 in C^2.
inline GridSpec default_grid(int n) {
  GridSpec g;
  g.points_per_axis = n == 1 ? 21 : 13;
  g.directions_count = 4;
  g.seed = 7;
  return g;
}

namespace detail {

// Registration check: parses and is zero-free on a coarse grid of the ball
// for j = 1..40.
inline void verify_entry(const CorpusEntry& e) {
  const FamilyExpr f = e.parsed();
  GridSpec coarse = default_grid(e.n);
  coarse.points_per_axis = e.n == 1 ? 11 : 7;
  const auto pts = sample_ball(e.ball(), coarse);
  for (int j = 1; j <= 40; ++j) mandelbrojt::modulus_stats(f, j, pts);
}

inline std::vector<CorpusEntry> build_corpus() {
  using criteria::LimitClass;
  std::vector<CorpusEntry> c{
      {"Z_POW_J", "z1^j", 1, {{0.75, 0.0}}, 0.15,
       {true, std::nullopt,
        "bounded by 1 and zero-free on the annulus 1/2 < |z| < 1; modulus ratios unbounded, log-modulus ratios "
        "bounded"}},
      {"EXP_JZ", "exp(j*z1)", 1, {{0.0, 0.0}}, 0.5,
       {false, LimitClass::NoLocallyUniformLimit, "|f_j| = e^(j Re z) splits at Re z = 0"}},
      {"SHRINK", "(z1+2)/j", 1, {{0.0, 0.0}}, 1.0,
       {true, LimitClass::ToZero, "converges uniformly to 0; sup |f_j| = 3/j"}},
      {"CONSTJ", "j", 1, {{0.0, 0.0}}, 1.0, {true, LimitClass::ToInfinity, "constants diverging to infinity"}},
      {"EXP_JZ2", "exp(j*(z1+z2))", 2, {{0.0, 0.0}, {0.0, 0.0}}, 0.4,
       {false, std::nullopt, "two-variable analogue of EXP_JZ"}},
      {"SHIFT_LIMIT", "2 + z1/j", 1, {{0.0, 0.0}}, 1.0,
       {true, LimitClass::ZeroFreeLimit, "converges uniformly to the zero-free constant 2"},
       false},
  };
  for (const auto& e : c) verify_entry(e);
  return c;
}

}  // namespace detail

inline const std::vector<CorpusEntry>& corpus_list() {
  static const std::vector<CorpusEntry> corpus = detail::build_corpus();
  return corpus;
}

/// The five reference families, without auxiliary entries.
inline const std::vector<CorpusEntry>& core_corpus() {
  static const std::vector<CorpusEntry> core = [] {
    std::vector<CorpusEntry> out;
    for (const auto& e : corpus_list())
      if (e.core) out.push_back(e);
    return out;
  }();
  return core;
}

inline const CorpusEntry& corpus_lookup(std::string_view name) {
  for (const auto& e : corpus_list())
    if (e.name == name) return e;
  throw ValidationError("corpus", "unknown corpus entry '" + std::string(name) + "'");
}

inline RunConfig corpus_config(const CorpusEntry& e, IndexRange indices = {1, 40}) {
  RunConfig cfg;
  cfg.family = e.family;
  cfg.n = e.n;
  cfg.indices = indices;
  cfg.center = e.center;
  cfg.radius = e.radius;
  cfg.grid = default_grid(e.n);
  cfg.criteria = {"mandelbrojt", "marty", "montel", "classify_limit"};
  return cfg;
}

// ---------------------------------------------------------------------------
// Modulus ratios of the powers z^j

struct RatioSups {
  int index = 0;
  double mod_ratio_sup = 0.0;  // max over pairs |z|^j / |w|^j
  double log_ratio_sup = 0.0;  // max over pairs ln|z|^j / ln|w|^j
};

/// For f_j = z^j on a ball in C avoiding |z| = 0 and |z| = 1, the brute-force
/// maxima over all ordered grid pairs of |z|^j/|w|^j and ln|z|^j/ln|w|^j.
inline std::vector<RatioSups> power_ratio_sups(std::span<const int> indices, const Ball& b, const GridSpec& g) {
  if (b.dim() != 1) throw DomainError("power_ratio_sups works in one variable");
  const auto pts = sample_ball(b, g);
  std::vector<double> mods;
  mods.reserve(pts.size());
  for (const auto& p : pts) {
    const double m = std::abs(p[0]);
    if (m == 0.0 || std::abs(std::log(m)) < mandelbrojt::kDefaultUnitTolerance)
      throw DomainError("ball must avoid |z| = 0 and |z| = 1");
    mods.push_back(m);
  }
  const bool inside = mods.front() < 1.0;
  for (double m : mods)
    if ((m < 1.0) != inside) throw DomainError("ball must avoid |z| = 0 and |z| = 1");

  std::vector<RatioSups> out;
  for (int j : indices) {
    RatioSups r{j, 0.0, -std::numeric_limits<double>::infinity()};
    std::vector<double> powered(mods.size()), logs(mods.size());
    for (std::size_t k = 0; k < mods.size(); ++k) {
      powered[k] = std::pow(mods[k], j);
      logs[k] = j * std::log(mods[k]);
    }
    for (std::size_t a = 0; a < mods.size(); ++a)
      for (std::size_t c = 0; c < mods.size(); ++c) {
        r.mod_ratio_sup = std::max(r.mod_ratio_sup, powered[a] / powered[c]);
        r.log_ratio_sup = std::max(r.log_ratio_sup, logs[a] / logs[c]);
      }
    out.push_back(r);
  }
  return out;
}

}  // namespace normality::lab
