#pragma once

// Levi form of u = log(1 + |f|^2) for holomorphic f, the spherical
// derivative of line restrictions, and grid extrema of the Levi form.
//
// For holomorphic f the complex Hessian of u collapses to a rank-one form:
//
//   d^2 u / dz_mu dconj(z_nu) = (d_mu f) conj(d_nu f) / (1 + |f|^2)^2
//
// so L_z(u, v) = |<grad f, v>|^2 / (1 + |f|^2)^2, which is also the squared
// spherical derivative of f restricted to the line through z along v.
// `levi_form_fd` evaluates the same quantity by a finite-difference
// Laplacian along that line and serves as an independent check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "normality/expr.hpp"
#include "normality/geometry.hpp"
#include "normality/metrics.hpp"

namespace normality::levi {

/// |d| / (1 + |w|^2), without overflow for large |w|.
inline double spherical_ratio(Complex w, Complex d) {
  const double a = std::abs(w);
  const double b = std::abs(d);
  if (a > 1.0) return (b / a) / (a + 1.0 / a);
  return b / (1.0 + a * a);
}

inline double spherical_derivative(const LineJet& h) { return spherical_ratio(h.value, h.derivative); }

/// h#(lambda) = |h'(lambda)| / (1 + |h(lambda)|^2).
inline double spherical_derivative(const LineRestriction& h, Complex lambda) {
  return spherical_derivative(h.jet(lambda));
}

namespace detail {

inline double levi_from_jet(const expr::detail::Jet& jet, std::span<const Complex> v) {
  Complex directional{0.0, 0.0};
  for (std::size_t k = 0; k < v.size(); ++k) directional += jet.grad[k] * v[k];
  const double s = spherical_ratio(jet.value, directional);
  return s * s;
}

}  // namespace detail

/// L_z(log(1+|f_j|^2), v). `v` need not be a unit vector; the form is
/// Hermitian, so scaling v by c scales the result by |c|^2.
inline double levi_form(const FamilyExpr& f, int j, std::span<const Complex> z, std::span<const Complex> v) {
  if (v.size() != z.size()) throw DomainError("direction dimension mismatch");
  return detail::levi_from_jet(eval_with_grad(f, j, z), v);
}

inline double levi_form(const FamilyExpr& f, int j, std::span<const Complex> z, const Direction& v) {
  return levi_form(f, j, z, std::span<const Complex>(v.v()));
}

/// Five-point Laplacian of log(1+|f|^2) along the complex line z + lambda v,
/// divided by 4: the d^2/dlambda dconj(lambda) of u at lambda = 0.
inline double levi_form_fd(const FamilyExpr& f, int j, std::span<const Complex> z, std::span<const Complex> v,
                           double t) {
  if (v.size() != z.size()) throw DomainError("direction dimension mismatch");
  if (!(t > 0.0)) throw DomainError("finite-difference step must be positive");
  const Complex f0 = eval(f, j, z);
  const double denom = 1.0 + std::norm(f0);
  // u(p) - u(z) = log1p((|f(p)|^2 - |f0|^2) / (1 + |f0|^2)); the difference of
  // squared moduli is formed as Re(conj(fp - f0) (fp + f0)) to limit cancellation.
  auto du = [&](Complex step) {
    CPoint p(z.begin(), z.end());
    for (std::size_t k = 0; k < p.size(); ++k) p[k] += step * v[k];
    const Complex fp = eval(f, j, p);
    return std::log1p(std::real(std::conj(fp - f0) * (fp + f0)) / denom);
  };
  const double sum = du({t, 0.0}) + du({-t, 0.0}) + du({0.0, t}) + du({0.0, -t});
  return sum / (4.0 * t * t);
}

inline double levi_form_fd(const FamilyExpr& f, int j, std::span<const Complex> z, const Direction& v,
                           double t = 1e-4) {
  return levi_form_fd(f, j, z, std::span<const Complex>(v.v()), t);
}

struct Extrema {
  double inf = 0.0;
  double sup = 0.0;
};

/// Minimum and maximum of the Levi form over pts x dirs.
inline Extrema levi_extrema(const FamilyExpr& f, int j, std::span<const CPoint> pts,
                            std::span<const Direction> dirs) {
  if (pts.empty() || dirs.empty()) throw DomainError("levi_extrema needs at least one point and one direction");
  Extrema e{std::numeric_limits<double>::infinity(), 0.0};
  for (const auto& p : pts) {
    const auto jet = eval_with_grad(f, j, p);
    for (const auto& d : dirs) {
      const double value = detail::levi_from_jet(jet, d.v());
      e.inf = std::min(e.inf, value);
      e.sup = std::max(e.sup, value);
    }
  }
  return e;
}

struct IncrementBound {
  double lhs = 0.0;  // spherical distance between f(z0) and f(z1)
  double rhs = 0.0;  // |z1 - z0| * max sqrt(Levi form) along the segment
};

/// Spherical increment of f_j over the segment [z0, z1] against the bound
/// from the largest spherical derivative sampled at `steps` equispaced
/// points (endpoints included).
inline IncrementBound spherical_increment_bound(const FamilyExpr& f, int j, const CPoint& z0, const CPoint& z1,
                                                int steps) {
  if (steps < 1) throw DomainError("steps must be positive");
  if (z0.size() != z1.size()) throw DomainError("segment endpoints differ in dimension");
  const Complex f0 = eval(f, j, z0);
  const Complex f1 = eval(f, j, z1);
  IncrementBound out;
  out.lhs = metrics::spherical(f0, f1);
  const double length = distance(z0, z1);
  if (length == 0.0) return out;

  CPoint dir(z0.size());
  for (std::size_t k = 0; k < dir.size(); ++k) dir[k] = (z1[k] - z0[k]) / length;
  double peak = 0.0;
  CPoint p(z0.size());
  for (int s = 0; s < steps; ++s) {
    const double t = steps == 1 ? 0.5 : static_cast<double>(s) / (steps - 1);
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = z0[k] + t * (z1[k] - z0[k]);
    peak = std::max(peak, levi_form(f, j, p, dir));
  }
  out.rhs = std::sqrt(peak) * length;
  return out;
}

}  // namespace normality::levi
