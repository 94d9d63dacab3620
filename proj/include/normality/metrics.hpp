#pragma once

// Chordal and spherical distances on the Riemann sphere.
//
// The sphere has diameter 1, so chordal distance lies in [0, 1] and the
// spherical (great-circle) distance is arcsin of the chordal one, in [0, pi/2].

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>

#include "normality/error.hpp"
#include "normality/expr.hpp"

namespace normality::metrics {

/// A point of the extended plane: finite complex number or infinity.
class SphereValue {
public:
  SphereValue(Complex w) : w_(w), infinite_(false) {}  // NOLINT(google-explicit-constructor)
  SphereValue(double w) : w_(w, 0.0), infinite_(false) {}  // NOLINT(google-explicit-constructor)

  static SphereValue infinity() { return SphereValue(); }

  bool is_infinite() const { return infinite_; }
  const Complex& finite() const { return w_; }
  double modulus() const { return infinite_ ? INFINITY : std::abs(w_); }

private:
  SphereValue() : w_(0.0, 0.0), infinite_(true) {}
  Complex w_;
  bool infinite_;
};

inline const double kOneOverSqrt10 = 1.0 / std::sqrt(10.0);

namespace detail {

inline double chordal_finite(Complex a, Complex b) {
  double ma = std::abs(a);
  double mb = std::abs(b);
  if (ma > 1.0 && mb > 1.0) return chordal_finite(1.0 / a, 1.0 / b);  // chi is invariant under w -> 1/w
  if (mb > 1.0) {
    std::swap(a, b);
    std::swap(ma, mb);
  }
  if (ma > 1.0) {
    // |a - b| / (sqrt(1+|a|^2) sqrt(1+|b|^2)) with |a| factored out.
    return std::abs(1.0 - b / a) / (std::hypot(1.0, 1.0 / ma) * std::hypot(1.0, mb));
  }
  return std::abs(a - b) / (std::hypot(1.0, ma) * std::hypot(1.0, mb));
}

}  // namespace detail

/// Chordal distance chi(w1, w2).
inline double chordal(const SphereValue& w1, const SphereValue& w2) {
  if (w1.is_infinite() && w2.is_infinite()) return 0.0;
  if (w1.is_infinite()) return 1.0 / std::hypot(1.0, w2.modulus());
  if (w2.is_infinite()) return 1.0 / std::hypot(1.0, w1.modulus());
  return std::clamp(detail::chordal_finite(w1.finite(), w2.finite()), 0.0, 1.0);
}

/// Spherical distance delta = arcsin(chi).
inline double spherical(const SphereValue& w1, const SphereValue& w2) { return std::asin(chordal(w1, w2)); }

/// (1 - t) / sqrt(2 + 2 t^2) on [0, 1]; chordal distance from the unit
/// circle to the circle of radius 1/t.
inline double g_profile(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("g_profile is defined on [0, 1]");
  return (1.0 - t) / std::sqrt(2.0 + 2.0 * t * t);
}

enum class Separation { Holds, Fails, PreconditionNotMet };

/// Values on opposite sides of the annulus 1 <= |w| <= 2 (or 1/2 <= |w| <= 1)
/// are at least 1/sqrt(10) apart chordally.
inline Separation separation_check(const SphereValue& w1, const SphereValue& w2) {
  const double a = w1.modulus();
  const double b = w2.modulus();
  const bool outward = a <= 1.0 && b >= 2.0;
  const bool inward = a >= 1.0 && b <= 0.5;
  if (!outward && !inward) return Separation::PreconditionNotMet;
  return chordal(w1, w2) >= kOneOverSqrt10 - 1e-12 ? Separation::Holds : Separation::Fails;
}

}  // namespace normality::metrics
