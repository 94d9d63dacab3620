#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "normality/lab.hpp"
#include "normality/levi.hpp"
#include "support/oracles.hpp"

namespace nl = normality;
using nl::Complex;
using nl::levi::levi_form;
using nl::levi::levi_form_fd;

namespace {

nl::Direction axis1() { return nl::Direction::normalized({1.0}); }

}  // namespace

TEST(SphericalDerivative, Examples) {
  auto id = nl::restrict_to_line(nl::expr::parse_family("z1", 1), 1, {0.0}, axis1());
  EXPECT_EQ(nl::levi::spherical_derivative(id, 0.0), 1.0);

  auto c = nl::restrict_to_line(nl::expr::parse_family("7", 1), 1, {0.0}, axis1());
  EXPECT_EQ(nl::levi::spherical_derivative(c, Complex(0.2, 0.1)), 0.0);

  auto e = nl::restrict_to_line(nl::expr::parse_family("exp(2*z1)", 1), 1, {0.0}, axis1());
  EXPECT_NEAR(nl::levi::spherical_derivative(e, 0.0), 1.0, 1e-15);
  const double eps = 1e-5;
  const Complex fd = (e.value(eps) - e.value(-eps)) / (2 * eps);
  EXPECT_NEAR(std::abs(fd) / 2.0, 1.0, 1e-9);
}

TEST(SphericalDerivative, LargeValuesDoNotOverflow) {
  auto e = nl::restrict_to_line(nl::expr::parse_family("exp(j*z1)", 1), 400, {0.0}, axis1());
  const double s = nl::levi::spherical_derivative(e, 1.5);  // |h| = e^600
  EXPECT_TRUE(std::isfinite(s));
  EXPECT_GE(s, 0.0);
  EXPECT_LT(s, 1e-200);
}

TEST(LeviForm, Examples) {
  EXPECT_EQ(levi_form(nl::expr::parse_family("z1", 1), 1, nl::CPoint{0.0}, axis1()), 1.0);
  auto c = nl::expr::parse_family("2 + i", 2);
  EXPECT_EQ(levi_form(c, 3, nl::CPoint{0.3, 0.1}, nl::Direction::normalized({1.0, 1.0})), 0.0);
  auto e = nl::expr::parse_family("exp(j*z1)", 1);
  EXPECT_NEAR(levi_form(e, 3, nl::CPoint{0.0}, axis1()), 2.25, 1e-14);
  EXPECT_NEAR(levi_form_fd(e, 3, nl::CPoint{0.0}, axis1(), 1e-4), 2.25, 1e-6);
}

TEST(LeviFormFd, Examples) {
  auto id = nl::expr::parse_family("z1", 1);
  EXPECT_NEAR(levi_form_fd(id, 1, nl::CPoint{0.0}, axis1(), 1e-4), 1.0, 1e-6);
  auto c = nl::expr::parse_family("3", 1);
  EXPECT_EQ(levi_form_fd(c, 1, nl::CPoint{0.5}, axis1(), 1e-4), 0.0);
  auto sq = nl::expr::parse_family("z1^2", 1);
  const double closed = levi_form(sq, 1, nl::CPoint{1.0}, axis1());
  EXPECT_NEAR(closed, 1.0, 1e-15);  // |2z|^2 / (1+|z|^4)^2 at z = 1
  EXPECT_LT(std::abs(levi_form_fd(sq, 1, nl::CPoint{1.0}, axis1(), 1e-4) - closed) / closed, 1e-5);
}

TEST(LeviForm, ClosedFormMatchesStencilOnCorpus) {
  std::mt19937_64 rng(2024);
  const auto& corpus = nl::lab::core_corpus();
  double worst = 0.0;
  for (int s = 0; s < 200; ++s) {
    const auto& e = corpus[static_cast<std::size_t>(s) % corpus.size()];
    const auto f = e.parsed();
    const int j = 1 + static_cast<int>(rng() % 8);
    const auto z = nl::testing::random_in_ball(rng, e.ball());
    const auto v = nl::Direction::normalized(nl::testing::random_unit(rng, e.n));
    const double closed = levi_form(f, j, z, v);
    const double fd = levi_form_fd(f, j, z, v, 1e-4);
    const double rel = std::abs(closed - fd) / std::max(closed, 1e-8);
    worst = std::max(worst, rel);
    EXPECT_LT(rel, 1e-5) << e.name << " j=" << j;
  }
  RecordProperty("worst_relative_error", std::to_string(worst));
}

// Small Levi values next to an O(1) constant: evaluation rounding of f limits
// the stencil to roughly 1e-5 relative accuracy at t = 1e-4.
TEST(LeviForm, StencilOnShiftedFamilyAtPrecisionFloor) {
  std::mt19937_64 rng(2025);
  const auto& e = nl::lab::corpus_lookup("SHIFT_LIMIT");
  const auto f = e.parsed();
  for (int s = 0; s < 50; ++s) {
    const int j = 1 + static_cast<int>(rng() % 8);
    const auto z = nl::testing::random_in_ball(rng, e.ball());
    const auto v = nl::Direction::normalized(nl::testing::random_unit(rng, e.n));
    const double closed = levi_form(f, j, z, v);
    EXPECT_LT(std::abs(closed - levi_form_fd(f, j, z, v, 1e-4)) / closed, 1e-4) << "j=" << j;
  }
}

TEST(LeviForm, EqualsSquaredSphericalDerivativeOfLineRestriction) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-0.25, 0.25);
  for (int s = 0; s < 200; ++s) {
    const int n = 1 + s % 3;
    nl::testing::ExprGenerator gen(rng(), n);
    const auto f = nl::expr::parse_family(gen.next(), n);
    const int j = 1 + s % 8;
    nl::CPoint z0(static_cast<std::size_t>(n));
    for (auto& c : z0) c = {u(rng), u(rng)};
    const auto v = nl::Direction::normalized(nl::testing::random_unit(rng, n));
    const Complex lambda(u(rng), u(rng));
    const double sharp = nl::levi::spherical_derivative(nl::restrict_to_line(f, j, z0, v), lambda);
    auto h = nl::restrict_to_line(f, j, z0, v);
    const double levi = levi_form(f, j, h.point_at(lambda), v);
    EXPECT_LE(std::abs(sharp * sharp - levi), 1e-10 * std::max(levi, 1e-300));
  }
}

TEST(LeviForm, HermitianScaling) {
  auto f = nl::expr::parse_family("exp(j*(z1+2*z2)) + z1*z2", 2);
  const nl::CPoint z{Complex(0.1, 0.2), Complex(-0.3, 0.05)};
  const nl::CPoint v{Complex(0.6, 0.0), Complex(0.0, 0.8)};
  const Complex c(1.7, -2.3);
  const nl::CPoint cv{c * v[0], c * v[1]};
  const double base = levi_form(f, 2, z, v);
  EXPECT_NEAR(levi_form(f, 2, z, cv), std::norm(c) * base, 1e-12 * std::norm(c) * base);
}

TEST(LeviExtrema, ConstantFamily) {
  auto f = nl::expr::parse_family("2", 1);
  const auto pts = nl::sample_ball(nl::Ball({0.0}, 1.0), {5, 1, 0});
  const auto dirs = nl::sample_directions(1, {5, 3, 1});
  auto e = nl::levi::levi_extrema(f, 1, pts, dirs);
  EXPECT_EQ(e.inf, 0.0);
  EXPECT_EQ(e.sup, 0.0);
}

TEST(LeviExtrema, IdentityPeaksAtSmallestModulus) {
  auto f = nl::expr::parse_family("z1", 1);
  const nl::Ball b({Complex(0.3, 0.1)}, 0.6);
  const auto pts = nl::sample_ball(b, {11, 1, 0});
  const auto dirs = nl::sample_directions(1, {11, 3, 1});
  double min_mod = 1e9, max_mod = 0;
  for (const auto& p : pts) {
    min_mod = std::min(min_mod, std::abs(p[0]));
    max_mod = std::max(max_mod, std::abs(p[0]));
  }
  auto e = nl::levi::levi_extrema(f, 1, pts, dirs);
  EXPECT_LE(e.sup, 1.0);
  EXPECT_NEAR(e.sup, 1.0 / std::pow(1.0 + min_mod * min_mod, 2), 1e-14);
  EXPECT_NEAR(e.inf, 1.0 / std::pow(1.0 + max_mod * max_mod, 2), 1e-14);
}

TEST(LeviExtrema, ExponentialPeaksOnImaginaryAxis) {
  auto f = nl::expr::parse_family("exp(j*z1)", 1);
  const auto pts = nl::sample_ball(nl::Ball({0.0}, 0.5), {21, 1, 0});
  auto e = nl::levi::levi_extrema(f, 4, pts, nl::sample_directions(1, {21, 1, 0}));
  EXPECT_NEAR(e.sup, 4.0, 1e-13);  // j^2/4 at Re z = 0
  const double x = 0.5;
  EXPECT_NEAR(e.inf, 16.0 * std::exp(8.0 * x) / std::pow(1.0 + std::exp(8.0 * x), 2), 1e-13);
}

TEST(LeviExtrema, EmptyInputsRejected) {
  auto f = nl::expr::parse_family("z1", 1);
  std::vector<nl::CPoint> none;
  EXPECT_THROW(nl::levi::levi_extrema(f, 1, none, nl::sample_directions(1, {3, 1, 0})), nl::DomainError);
}

TEST(SphericalIncrementBound, Examples) {
  auto id = nl::expr::parse_family("z1", 1);
  auto zero = nl::levi::spherical_increment_bound(id, 1, {0.2}, {0.2}, 16);
  EXPECT_EQ(zero.lhs, 0.0);
  EXPECT_EQ(zero.rhs, 0.0);

  auto c = nl::levi::spherical_increment_bound(nl::expr::parse_family("5", 1), 1, {0.0}, {0.5}, 16);
  EXPECT_EQ(c.lhs, 0.0);
  EXPECT_EQ(c.rhs, 0.0);

  auto b = nl::levi::spherical_increment_bound(id, 1, {0.0}, {0.1}, 16);
  EXPECT_NEAR(b.lhs, std::asin(0.1 / std::sqrt(1.01)), 1e-15);
  EXPECT_NEAR(b.rhs, 0.1, 1e-15);
  EXPECT_LE(b.lhs, b.rhs);
}

TEST(SphericalIncrementBound, HoldsOnRandomCorpusSegments) {
  std::mt19937_64 rng(5);
  const auto& corpus = nl::lab::corpus_list();
  for (int s = 0; s < 100; ++s) {
    const auto& e = corpus[static_cast<std::size_t>(s) % corpus.size()];
    const auto f = e.parsed();
    const int j = 1 + static_cast<int>(rng() % 12);
    const auto z0 = nl::testing::random_in_ball(rng, e.ball());
    const auto z1 = nl::testing::random_in_ball(rng, e.ball());
    auto b = nl::levi::spherical_increment_bound(f, j, z0, z1, 256);
    EXPECT_LE(b.lhs, b.rhs * (1 + 1e-3) + 1e-9) << e.name << " j=" << j;
  }
}
