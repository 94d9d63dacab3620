#pragma once

// Seeded invariant sweep over the sphere metrics. Used by
// `normality-lab metrics selftest` and by the acceptance suite.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "normality/metrics.hpp"

namespace normality::metrics {

struct SelfTestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

// Log-uniform modulus in [10^lo, 10^hi], uniform argument.
inline Complex random_value(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> exponent(lo, hi);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  return std::polar(std::pow(10.0, exponent(rng)), angle(rng));
}

inline Complex random_in_annulus(std::mt19937_64& rng, double r_min, double r_max) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  // Area-uniform radius in [r_min, r_max].
  const double r = std::sqrt(r_min * r_min + unit(rng) * (r_max * r_max - r_min * r_min));
  return std::polar(r, angle(rng));
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

inline std::vector<SelfTestResult> metrics_selftest(std::uint64_t seed = 20240101, int samples = 10000) {
  std::vector<SelfTestResult> out;
  std::mt19937_64 rng(seed);

  {
    const double c = chordal(1.0, 2.0);
    const double g = g_profile(0.5);
    const double err = std::max(std::abs(c - kOneOverSqrt10), std::abs(g - kOneOverSqrt10));
    out.push_back({"chordal(1,2) = g(1/2) = 1/sqrt(10)", err < 1e-12, "max error " + detail::fmt(err)});
  }

  {
    bool ok = true;
    int bad = -1;
    double prev = g_profile(0.0);
    for (int k = 1; k < 1000; ++k) {
      const double cur = g_profile(static_cast<double>(k) / 999.0);
      if (!(cur < prev)) {
        ok = false;
        bad = k;
        break;
      }
      prev = cur;
    }
    out.push_back({"g strictly decreasing on a 1000-point grid of [0,1]", ok,
                   ok ? "ok" : "first failure at grid point " + std::to_string(bad)});
  }

  {
    int failures = 0;
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
      const SphereValue a = detail::random_value(rng, -4.0, 4.0);
      const SphereValue b = detail::random_value(rng, -4.0, 4.0);
      const double chi = chordal(a, b);
      const double delta = spherical(a, b);
      const double excess = std::max(chi - delta, delta - std::numbers::pi / 2.0 * chi);
      worst = std::max(worst, excess);
      if (excess > 1e-12) ++failures;
    }
    out.push_back({"sandwich chi <= delta <= (pi/2) chi", failures == 0,
                   std::to_string(failures) + " failures, worst excess " + detail::fmt(worst)});
  }

  {
    int failures = 0;
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
      const SphereValue a = detail::random_value(rng, -4.0, 4.0);
      const SphereValue b = detail::random_value(rng, -4.0, 4.0);
      const SphereValue c = detail::random_value(rng, -4.0, 4.0);
      const double excess = chordal(a, c) - chordal(a, b) - chordal(b, c);
      worst = std::max(worst, excess);
      if (excess > 1e-12) ++failures;
    }
    out.push_back({"chordal triangle inequality", failures == 0,
                   std::to_string(failures) + " failures, worst excess " + detail::fmt(worst)});
  }

  {
    int failures = 0;
    double closest = 1.0;
    for (int s = 0; s < samples; ++s) {
      SphereValue a = 0.0, b = 0.0;
      if (s % 2 == 0) {
        a = detail::random_in_annulus(rng, 0.0, 1.0);
        b = 2.0 / std::conj(detail::random_in_annulus(rng, 0.0, 1.0));  // |b| >= 2
      } else {
        a = 1.0 / std::conj(detail::random_in_annulus(rng, 0.0, 1.0));  // |a| >= 1
        b = detail::random_in_annulus(rng, 0.0, 0.5);
      }
      if (!std::isfinite(a.modulus()) || !std::isfinite(b.modulus())) continue;
      closest = std::min(closest, chordal(a, b));
      if (separation_check(a, b) != Separation::Holds) ++failures;
    }
    out.push_back({"separation chi >= 1/sqrt(10) across the annulus", failures == 0,
                   std::to_string(failures) + " failures, closest pair " + detail::fmt(closest)});
  }

  return out;
}

}  // namespace normality::metrics
