#pragma once

// Modulus-ratio quantities of a zero-free function on a sampled ball:
//
//   m(f, D)  = sup ln|f(z)| / ln|f(w)|   (infinite when |f| = 1 somewhere in D)
//   m'(f, D) = sup |f(z)| / |f(w)|
//   L(f, D)  = min(m, m')
//
// On a connected D with |f| != 1, ln|f| has constant sign, so both sups over
// ordered pairs reduce to ratios of extremes. A sign change of ln|f| between
// samples forces |f| = 1 somewhere in between.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <string>

#include "normality/error.hpp"
#include "normality/expr.hpp"
#include "normality/geometry.hpp"

namespace normality::mandelbrojt {

/// Non-negative extended real.
class ExtReal {
public:
  static ExtReal finite(double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("ExtReal finite value must be a non-negative real");
    return ExtReal(v);
  }
  static ExtReal infinity() { return ExtReal(std::numeric_limits<double>::infinity()); }

  bool is_infinite() const { return std::isinf(v_); }
  /// The finite value, or +inf.
  double value() const { return v_; }

  friend ExtReal min(const ExtReal& a, const ExtReal& b) { return a.v_ <= b.v_ ? a : b; }
  friend bool operator==(const ExtReal&, const ExtReal&) = default;

private:
  explicit ExtReal(double v) : v_(v) {}
  double v_;
};

inline constexpr double kDefaultUnitTolerance = 1e-9;
inline constexpr double kVanishingModulus = 1e-280;

struct ModulusStats {
  double min_mod = 0.0;
  double max_mod = 0.0;
  double min_logmod_abs = 0.0;
  double max_logmod_abs = 0.0;
  bool unit_crossing = false;
};

inline std::string describe_point(std::span<const Complex> z) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (k) os << ", ";
    os << z[k].real() << (z[k].imag() < 0 ? "-" : "+") << std::abs(z[k].imag()) << 'i';
  }
  os << ')';
  return os.str();
}

inline ModulusStats modulus_stats(const FamilyExpr& f, int j, std::span<const CPoint> pts,
                                  double tol_unit = kDefaultUnitTolerance) {
  if (pts.empty()) throw DomainError("modulus_stats needs at least one sample point");
  ModulusStats s;
  s.min_mod = std::numeric_limits<double>::infinity();
  s.min_logmod_abs = std::numeric_limits<double>::infinity();
  bool negative = false;
  bool positive = false;
  for (const auto& p : pts) {
    const double mod = std::abs(eval(f, j, p));
    if (!(mod >= kVanishingModulus))
      throw EvalError("function vanishes on sample: j=" + std::to_string(j) + " at " + describe_point(p));
    if (!std::isfinite(mod))
      throw EvalError("function overflows on sample: j=" + std::to_string(j) + " at " + describe_point(p));
    const double lg = std::log(mod);
    s.min_mod = std::min(s.min_mod, mod);
    s.max_mod = std::max(s.max_mod, mod);
    s.min_logmod_abs = std::min(s.min_logmod_abs, std::abs(lg));
    s.max_logmod_abs = std::max(s.max_logmod_abs, std::abs(lg));
    if (std::abs(lg) <= tol_unit) s.unit_crossing = true;
    if (lg < 0.0) negative = true;
    if (lg > 0.0) positive = true;
  }
  if (negative && positive) s.unit_crossing = true;
  return s;
}

inline ExtReal m_quantity(const ModulusStats& s) {
  if (s.unit_crossing) return ExtReal::infinity();
  return ExtReal::finite(s.max_logmod_abs / s.min_logmod_abs);
}

inline double m_prime(const ModulusStats& s) { return s.max_mod / s.min_mod; }

inline double l_quantity(const ModulusStats& s) { return min(m_quantity(s), ExtReal::finite(m_prime(s))).value(); }

struct MQuantities {
  ExtReal m = ExtReal::infinity();
  double m_prime = 1.0;
  double L = 1.0;
  ModulusStats stats;
};

inline MQuantities quantities(const FamilyExpr& f, int j, std::span<const CPoint> pts,
                              double tol_unit = kDefaultUnitTolerance) {
  MQuantities q;
  q.stats = modulus_stats(f, j, pts, tol_unit);
  q.m = m_quantity(q.stats);
  q.m_prime = m_prime(q.stats);
  q.L = l_quantity(q.stats);
  return q;
}

/// Ball Harnack constant ((1 + rho) / (1 - rho))^(2n): for u > 0 harmonic on
/// B(z0, R) in R^(2n), sup u / inf u over B(z0, rho R) is at most this.
inline double harnack_constant(int n, double rho) {
  if (n < 1) throw DomainError("dimension must be positive");
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("harnack_constant needs 0 <= rho < 1");
  return std::pow((1.0 + rho) / (1.0 - rho), 2 * n);
}

}  // namespace normality::mandelbrojt
