#pragma once

// Normality checks for integer-indexed families {f_j} on one sampled ball.
//
// Boundedness of an infinite family cannot be decided from finitely many
// members, so each check reports the per-index quantity and a trend read
// off the tail of the sequence. Verdicts follow the trend:
//
//   mandelbrojt, marty   Bounded -> Normal, Growing -> NotNormal
//   montel               Bounded -> Normal, otherwise Inconclusive
//   levi_lower           every inf >= c -> Normal, otherwise Inconclusive
//
// The first two are characterizations of normality; the last two are only
// sufficient conditions.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "normality/error.hpp"
#include "normality/expr.hpp"
#include "normality/geometry.hpp"
#include "normality/levi.hpp"
#include "normality/mandelbrojt.hpp"

namespace normality::criteria {

enum class Trend { Bounded, Growing, Inconclusive };
enum class Verdict { Normal, NotNormal, Inconclusive };
enum class LimitClass { ToZero, ZeroFreeLimit, ToInfinity, NoLocallyUniformLimit };
enum class HurwitzOutcome { ZeroFree, IdenticallyZero, Violation };

inline std::string_view to_string(Trend t) {
  switch (t) {
    case Trend::Bounded: return "Bounded";
    case Trend::Growing: return "Growing";
    case Trend::Inconclusive: return "Inconclusive";
  }
  return "";
}

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Normal: return "Normal";
    case Verdict::NotNormal: return "NotNormal";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "";
}

inline std::string_view to_string(LimitClass c) {
  switch (c) {
    case LimitClass::ToZero: return "ToZero";
    case LimitClass::ZeroFreeLimit: return "ZeroFreeLimit";
    case LimitClass::ToInfinity: return "ToInfinity";
    case LimitClass::NoLocallyUniformLimit: return "NoLocallyUniformLimit";
  }
  return "";
}

inline std::string_view to_string(HurwitzOutcome h) {
  switch (h) {
    case HurwitzOutcome::ZeroFree: return "ZeroFree";
    case HurwitzOutcome::IdenticallyZero: return "IdenticallyZero";
    case HurwitzOutcome::Violation: return "Violation";
  }
  return "";
}

struct TrendFit {
  Trend trend = Trend::Inconclusive;
  double slope = 0.0;         // least-squares slope of ln(value) against j over the upper half
  bool had_infinite = false;  // some entries were +inf and were left out of the fit
};

struct CriterionReport {
  std::string criterion;
  std::vector<int> indices;
  std::vector<double> values;  // +inf where the quantity is infinite
  TrendFit trend;
  Verdict verdict = Verdict::Inconclusive;
  std::string outcome;  // verdict name, or the limit class for classify_limit
  GridSpec grid;
  Ball ball;
};

// Trend gates.
inline constexpr double kGrowingSlope = 0.05;
inline constexpr double kGrowingTailOverHead = 3.0;
inline constexpr double kBoundedSlope = 0.01;
inline constexpr double kBoundedTailOverMedian = 1.5 * 3.0;
inline constexpr int kMinTrendPoints = 4;
// Floor for ln() of zero values (e.g. the Levi form of a constant).
inline constexpr double kLogFloor = 1e-300;

/// Trend of a finite prefix of a sequence. Infinite entries are dropped and
/// flagged. A line is fitted to (j, ln value) over the upper half of the
/// remaining entries. Growing needs slope > 0.05 and a tail maximum above
/// 3x the head maximum; Bounded needs slope < 0.01 and a tail maximum at
/// most 4.5x the overall median.
inline TrendFit trend_classify(std::span<const double> values, std::span<const int> indices) {
  if (values.size() != indices.size()) throw DomainError("trend_classify: values and indices differ in length");
  TrendFit fit;
  std::vector<std::pair<double, double>> pts;  // (j, value)
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (std::isinf(values[k])) {
      fit.had_infinite = true;
      continue;
    }
    pts.emplace_back(static_cast<double>(indices[k]), values[k]);
  }
  if (static_cast<int>(pts.size()) < kMinTrendPoints) return fit;

  const std::size_t half = pts.size() / 2;
  std::span<const std::pair<double, double>> head(pts.data(), half);
  std::span<const std::pair<double, double>> tail(pts.data() + half, pts.size() - half);

  double mx = 0.0, my = 0.0;
  for (auto [x, y] : tail) {
    mx += x;
    my += std::log(std::max(y, kLogFloor));
  }
  mx /= static_cast<double>(tail.size());
  my /= static_cast<double>(tail.size());
  double sxy = 0.0, sxx = 0.0;
  for (auto [x, y] : tail) {
    sxy += (x - mx) * (std::log(std::max(y, kLogFloor)) - my);
    sxx += (x - mx) * (x - mx);
  }
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;

  auto max_of = [](auto range) {
    double m = -std::numeric_limits<double>::infinity();
    for (auto [x, y] : range) m = std::max(m, y);
    return m;
  };
  const double head_max = max_of(head);
  const double tail_max = max_of(tail);
  std::vector<double> sorted;
  sorted.reserve(pts.size());
  for (auto [x, y] : pts) sorted.push_back(y);
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  if (fit.slope > kGrowingSlope && tail_max > kGrowingTailOverHead * head_max)
    fit.trend = Trend::Growing;
  else if (fit.slope < kBoundedSlope && tail_max <= kBoundedTailOverMedian * median)
    fit.trend = Trend::Bounded;
  return fit;
}

namespace detail {

inline void check_inputs(const FamilyExpr& f, std::span<const int> indices, const Ball& b, const GridSpec& g) {
  if (indices.empty()) throw DomainError("at least one index is required");
  for (int j : indices)
    if (j < 1) throw DomainError("indices must be positive");
  if (b.dim() != f.dim()) throw DomainError("ball dimension does not match the family");
  g.validate();
}

inline CriterionReport make_report(std::string name, std::span<const int> indices, std::vector<double> values,
                                   const Ball& b, const GridSpec& g) {
  CriterionReport r{std::move(name), {indices.begin(), indices.end()}, std::move(values), {}, Verdict::Inconclusive,
                    {}, g, b};
  r.trend = trend_classify(r.values, r.indices);
  return r;
}

inline void characterization_verdict(CriterionReport& r) {
  r.verdict = r.trend.trend == Trend::Bounded   ? Verdict::Normal
              : r.trend.trend == Trend::Growing ? Verdict::NotNormal
                                                : Verdict::Inconclusive;
  r.outcome = to_string(r.verdict);
}

}  // namespace detail

/// L(f_j, B) per index; Normal iff the sequence is bounded.
inline CriterionReport mandelbrojt_check(const FamilyExpr& f, std::span<const int> indices, const Ball& b,
                                         const GridSpec& g,
                                         double tol_unit = mandelbrojt::kDefaultUnitTolerance) {
  detail::check_inputs(f, indices, b, g);
  const auto pts = sample_ball(b, g);
  std::vector<double> values;
  values.reserve(indices.size());
  for (int j : indices) values.push_back(mandelbrojt::l_quantity(mandelbrojt::modulus_stats(f, j, pts, tol_unit)));
  auto r = detail::make_report("mandelbrojt", indices, std::move(values), b, g);
  detail::characterization_verdict(r);
  return r;
}

/// Grid supremum of the Levi form of log(1+|f_j|^2) per index.
inline CriterionReport marty_check(const FamilyExpr& f, std::span<const int> indices, const Ball& b,
                                   const GridSpec& g) {
  detail::check_inputs(f, indices, b, g);
  const auto pts = sample_ball(b, g);
  const auto dirs = sample_directions(f.dim(), g);
  std::vector<double> values;
  values.reserve(indices.size());
  for (int j : indices) values.push_back(levi::levi_extrema(f, j, pts, dirs).sup);
  auto r = detail::make_report("marty", indices, std::move(values), b, g);
  detail::characterization_verdict(r);
  return r;
}

/// Grid maximum of |f_j| per index. Local boundedness is sufficient for
/// normality but not necessary, so growth is Inconclusive.
inline CriterionReport montel_check(const FamilyExpr& f, std::span<const int> indices, const Ball& b,
                                    const GridSpec& g) {
  detail::check_inputs(f, indices, b, g);
  const auto pts = sample_ball(b, g);
  std::vector<double> values;
  values.reserve(indices.size());
  for (int j : indices) {
    double mx = 0.0;
    for (const auto& p : pts) mx = std::max(mx, std::abs(eval(f, j, p)));
    values.push_back(mx);
  }
  auto r = detail::make_report("montel", indices, std::move(values), b, g);
  r.verdict = r.trend.trend == Trend::Bounded ? Verdict::Normal : Verdict::Inconclusive;
  r.outcome = to_string(r.verdict);
  return r;
}

inline constexpr double kLeviLowerSlack = 1e-9;

/// Grid infimum of the Levi form per index; Normal when every infimum
/// reaches the uniform lower bound c.
inline CriterionReport levi_lower_check(const FamilyExpr& f, std::span<const int> indices, const Ball& b,
                                        const GridSpec& g, double c) {
  if (!(c > 0.0)) throw DomainError("levi_lower_check needs c > 0");
  detail::check_inputs(f, indices, b, g);
  const auto pts = sample_ball(b, g);
  const auto dirs = sample_directions(f.dim(), g);
  std::vector<double> values;
  values.reserve(indices.size());
  for (int j : indices) values.push_back(levi::levi_extrema(f, j, pts, dirs).inf);
  const bool all_above = std::all_of(values.begin(), values.end(), [c](double v) { return v >= c - kLeviLowerSlack; });
  auto r = detail::make_report("levi_lower", indices, std::move(values), b, g);
  r.verdict = all_above ? Verdict::Normal : Verdict::Inconclusive;
  r.outcome = to_string(r.verdict);
  return r;
}

/// IdenticallyZero if every |value| < tol, ZeroFree if every |value| > tol,
/// otherwise Violation: a locally uniform limit of zero-free functions has
/// either no zeros or is identically zero.
inline HurwitzOutcome hurwitz_check(std::span<const Complex> limit_values, double tol) {
  if (limit_values.empty()) throw DomainError("hurwitz_check needs at least one value");
  bool small = false, large = false;
  for (const auto& v : limit_values) {
    const double a = std::abs(v);
    if (a < tol) small = true;
    else if (a > tol) large = true;
    else return HurwitzOutcome::Violation;
  }
  if (small && !large) return HurwitzOutcome::IdenticallyZero;
  if (large && !small) return HurwitzOutcome::ZeroFree;
  return HurwitzOutcome::Violation;
}

inline constexpr double kDefaultLimitTolerance = 1e-3;
inline constexpr int kMinTailLength = 5;
// |f| < 1/2 and |f| > 2 are the small/large regimes on either side of the
// unit circle in the limit trichotomy.
inline constexpr double kSmallModulus = 0.5;
inline constexpr double kLargeModulus = 2.0;

struct LimitAssessment {
  LimitClass cls = LimitClass::NoLocallyUniformLimit;
  std::vector<double> max_mod;  // per index
  std::vector<double> min_mod;  // per index
  std::size_t tail_begin = 0;   // first tail position in the index list
  double max_tail_increment = 0.0;
  /// Estimated limit on the grid: extrapolation linear in 1/j from the
  /// first and last tail members; the last member itself when it is already
  /// within tolerance of zero and the extrapolation is not.
  std::vector<Complex> limit_values;
};

namespace detail {

inline std::vector<Complex> extrapolate(const std::vector<Complex>& early, int j_early, const std::vector<Complex>& late,
                                        int j_late) {
  std::vector<Complex> out(late.size());
  if (j_late == j_early) return late;
  const double a = static_cast<double>(j_late), b = static_cast<double>(j_early);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (a * late[k] - b * early[k]) / (a - b);
  return out;
}

inline double sup_abs(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

inline double inf_abs(const std::vector<Complex>& v) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : v) m = std::min(m, std::abs(c));
  return m;
}

}  // namespace detail

/// Classifies the tail behaviour of {f_j} on the ball. The tail is the last
/// quarter of the indices (at least five, or all of them if fewer).
///   ToZero:        sup|f_j| non-increasing over the tail, below 1/2 at the
///                  last index, and the limit estimate is within tol of 0.
///   ToInfinity:    the same for 1/f_j, with inf|f_j| above 2.
///   ZeroFreeLimit: sup-norm increments between consecutive tail members
///                  below tol, and the limit estimate bounded away from 0.
inline LimitAssessment assess_limit(const FamilyExpr& f, std::span<const int> indices, const Ball& b,
                                    const GridSpec& g, double tol = kDefaultLimitTolerance) {
  detail::check_inputs(f, indices, b, g);
  if (!(tol > 0.0)) throw DomainError("limit tolerance must be positive");
  const auto pts = sample_ball(b, g);
  const std::size_t count = indices.size();
  std::size_t tail_len = std::max<std::size_t>(count / 4, kMinTailLength);
  tail_len = std::min(tail_len, count);

  LimitAssessment a;
  a.tail_begin = count - tail_len;
  std::vector<std::vector<Complex>> tail_vals;
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<Complex> vals;
    vals.reserve(pts.size());
    for (const auto& p : pts) vals.push_back(eval(f, indices[k], p));
    a.max_mod.push_back(detail::sup_abs(vals));
    a.min_mod.push_back(detail::inf_abs(vals));
    if (k >= a.tail_begin) tail_vals.push_back(std::move(vals));
  }

  for (std::size_t k = 1; k < tail_vals.size(); ++k) {
    double inc = 0.0;
    for (std::size_t p = 0; p < pts.size(); ++p) inc = std::max(inc, std::abs(tail_vals[k][p] - tail_vals[k - 1][p]));
    a.max_tail_increment = std::max(a.max_tail_increment, inc);
  }

  const int j_first = indices[a.tail_begin];
  const int j_last = indices[count - 1];
  const auto& first = tail_vals.front();
  const auto& last = tail_vals.back();
  auto estimate = detail::extrapolate(first, j_first, last, j_last);

  auto non_increasing = [&](const std::vector<double>& s) {
    for (std::size_t k = a.tail_begin + 1; k < count; ++k)
      if (s[k] > s[k - 1] * (1.0 + 1e-12)) return false;
    return true;
  };
  auto non_decreasing = [&](const std::vector<double>& s) {
    for (std::size_t k = a.tail_begin + 1; k < count; ++k)
      if (s[k] < s[k - 1] * (1.0 - 1e-12)) return false;
    return true;
  };

  const double last_max = a.max_mod.back();
  const double last_min = a.min_mod.back();

  if (non_increasing(a.max_mod) && last_max < kSmallModulus) {
    if (detail::sup_abs(estimate) < tol) {
      a.cls = LimitClass::ToZero;
      a.limit_values = std::move(estimate);
      return a;
    }
    if (last_max < tol) {
      a.cls = LimitClass::ToZero;
      a.limit_values = last;
      return a;
    }
  }

  if (non_decreasing(a.min_mod) && last_min > kLargeModulus) {
    std::vector<Complex> inv_first(first.size()), inv_last(last.size());
    for (std::size_t p = 0; p < first.size(); ++p) {
      inv_first[p] = 1.0 / first[p];
      inv_last[p] = 1.0 / last[p];
    }
    const auto inv_estimate = detail::extrapolate(inv_first, j_first, inv_last, j_last);
    if (detail::sup_abs(inv_estimate) < tol || 1.0 / last_min < tol) {
      a.cls = LimitClass::ToInfinity;
      a.limit_values.clear();
      return a;
    }
  }

  if (tail_vals.size() >= 2 && a.max_tail_increment < tol && detail::inf_abs(estimate) > tol) {
    a.cls = LimitClass::ZeroFreeLimit;
    a.limit_values = std::move(estimate);
    return a;
  }

  a.cls = LimitClass::NoLocallyUniformLimit;
  a.limit_values = std::move(estimate);
  return a;
}

inline LimitClass classify_limit(const FamilyExpr& f, std::span<const int> indices, const Ball& b, const GridSpec& g,
                                 double tol = kDefaultLimitTolerance) {
  return assess_limit(f, indices, b, g, tol).cls;
}

/// Report form of classify_limit: per-index sup|f_j| with the limit class
/// as the outcome.
inline CriterionReport classify_limit_report(const FamilyExpr& f, std::span<const int> indices, const Ball& b,
                                             const GridSpec& g, double tol = kDefaultLimitTolerance) {
  auto a = assess_limit(f, indices, b, g, tol);
  auto r = detail::make_report("classify_limit", indices, std::move(a.max_mod), b, g);
  r.verdict = Verdict::Inconclusive;
  r.outcome = to_string(a.cls);
  return r;
}

}  // namespace normality::criteria
