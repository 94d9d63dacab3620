#pragma once

// Closed balls in C^n, deterministic sample grids, unit directions and
// restriction of a family member to a complex line.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "normality/error.hpp"
#include "normality/expr.hpp"

namespace normality {

/// Closed ball B(center, radius) in C^n.
class Ball {
public:
  Ball(CPoint center, double radius) : center_(std::move(center)), radius_(radius) {
    if (!(radius_ > 0.0) || !std::isfinite(radius_)) throw DomainError("ball radius must be positive");
    if (center_.empty()) throw DomainError("ball center must have positive dimension");
  }

  const CPoint& center() const { return center_; }
  double radius() const { return radius_; }
  int dim() const { return static_cast<int>(center_.size()); }

private:
  CPoint center_;
  double radius_;
};

struct GridSpec {
  int points_per_axis = 21;
  int directions_count = 4;
  std::uint64_t seed = 7;

  void validate() const {
    if (points_per_axis < 3 || points_per_axis % 2 == 0)
      throw DomainError("points_per_axis must be odd and at least 3");
    if (directions_count < 1) throw DomainError("directions_count must be positive");
  }
};

/// Unit vector in C^n.
class Direction {
public:
  /// Normalizes `v`; throws on the zero vector.
  static Direction normalized(CPoint v) {
    double norm = 0.0;
    for (const auto& c : v) norm += std::norm(c);
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) throw DomainError("direction must be non-zero");
    for (auto& c : v) c /= norm;
    return Direction(std::move(v));
  }

  const CPoint& v() const { return v_; }
  int dim() const { return static_cast<int>(v_.size()); }
  const Complex& operator[](std::size_t k) const { return v_[k]; }

private:
  explicit Direction(CPoint v) : v_(std::move(v)) {}
  CPoint v_;
};

inline double norm(std::span<const Complex> z) {
  double s = 0.0;
  for (const auto& c : z) s += std::norm(c);
  return std::sqrt(s);
}

inline double distance(std::span<const Complex> a, std::span<const Complex> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::norm(a[k] - b[k]);
  return std::sqrt(s);
}

/// Box grid over the bounding cube of `b` with `points_per_axis` samples per
/// real axis, filtered to the closed ball. Ordered lexicographically in the
/// axis indices (Re z1, Im z1, Re z2, ...), first axis slowest. Because the
/// sample count is odd the center is always a grid point.
inline std::vector<CPoint> sample_ball(const Ball& b, const GridSpec& g) {
  g.validate();
  const std::size_t axes = 2 * static_cast<std::size_t>(b.dim());
  const int m = g.points_per_axis;
  const int half = m / 2;
  const double r = b.radius();
  // Offsets k*r/half for k in [-half, half]: exact at 0 and at +-r.
  std::vector<double> offsets(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) offsets[static_cast<std::size_t>(k)] = r * (k - half) / half;

  std::vector<CPoint> pts;
  std::vector<int> idx(axes, 0);
  CPoint p(static_cast<std::size_t>(b.dim()));
  for (;;) {
    // Squared offsets summed in integer lattice units avoid rounding at the boundary.
    long long lattice = 0;
    for (std::size_t a = 0; a < axes; ++a) {
      long long d = idx[a] - half;
      lattice += d * d;
    }
    if (lattice <= static_cast<long long>(half) * half) {
      for (std::size_t c = 0; c < p.size(); ++c) {
        const Complex& z0 = b.center()[c];
        p[c] = {z0.real() + offsets[static_cast<std::size_t>(idx[2 * c])],
                z0.imag() + offsets[static_cast<std::size_t>(idx[2 * c + 1])]};
      }
      pts.push_back(p);
    }
    std::size_t a = axes;
    while (a > 0) {
      --a;
      if (++idx[a] < m) break;
      idx[a] = 0;
      if (a == 0) return pts;
    }
  }
}

/// The first min(n, count) coordinate axes, then seeded normalized complex
/// Gaussian vectors.
inline std::vector<Direction> sample_directions(int n, const GridSpec& g) {
  if (n < 1) throw DomainError("dimension must be positive");
  g.validate();
  std::vector<Direction> dirs;
  dirs.reserve(static_cast<std::size_t>(g.directions_count));
  for (int k = 0; k < n && static_cast<int>(dirs.size()) < g.directions_count; ++k) {
    CPoint e(static_cast<std::size_t>(n));
    e[static_cast<std::size_t>(k)] = 1.0;
    dirs.push_back(Direction::normalized(std::move(e)));
  }
  std::mt19937_64 rng(g.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (static_cast<int>(dirs.size()) < g.directions_count) {
    CPoint v(static_cast<std::size_t>(n));
    for (auto& c : v) {
      double re = gauss(rng);
      double im = gauss(rng);
      c = {re, im};
    }
    if (norm(v) == 0.0) continue;
    dirs.push_back(Direction::normalized(std::move(v)));
  }
  return dirs;
}

/// h(lambda) and h'(lambda) for a one-variable holomorphic function.
struct LineJet {
  Complex value;
  Complex derivative;
};

/// h(lambda) = f_j(z0 + lambda v) with exact derivative sum_mu (d_mu f) v_mu.
class LineRestriction {
public:
  LineRestriction(FamilyExpr f, int j, CPoint z0, CPoint v)
      : f_(std::move(f)), j_(j), z0_(std::move(z0)), v_(std::move(v)) {
    if (static_cast<int>(z0_.size()) != f_.dim() || static_cast<int>(v_.size()) != f_.dim())
      throw DomainError("line base point and direction must match the family dimension");
  }

  CPoint point_at(Complex lambda) const {
    CPoint z(z0_.size());
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = z0_[k] + lambda * v_[k];
    return z;
  }

  Complex value(Complex lambda) const { return eval(f_, j_, point_at(lambda)); }

  LineJet jet(Complex lambda) const {
    auto jet = eval_with_grad(f_, j_, point_at(lambda));
    Complex d{0.0, 0.0};
    for (std::size_t k = 0; k < v_.size(); ++k) d += jet.grad[k] * v_[k];
    return {jet.value, d};
  }

  Complex derivative(Complex lambda) const { return jet(lambda).derivative; }

private:
  FamilyExpr f_;
  int j_;
  CPoint z0_;
  CPoint v_;
};

inline LineRestriction restrict_to_line(const FamilyExpr& f, int j, const CPoint& z0, const Direction& v) {
  return LineRestriction(f, j, z0, v.v());
}

}  // namespace normality
