// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and runtime budgets are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "normality/normality.hpp"
#include "support/oracles.hpp"

namespace nl = normality;
namespace nc = normality::criteria;
namespace lab = normality::lab;
using nl::Complex;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::vector<int> range(int a, int b) {
  std::vector<int> v;
  for (int j = a; j <= b; ++j) v.push_back(j);
  return v;
}

int failures = 0;

void run(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.passed = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.require(secs < budget_s, "runtime " + fmt(secs) + " s exceeds " + fmt(budget_s) + " s");
  if (!out.passed) ++failures;
  std::printf("%s [%2d] %s (%.3f s)%s%s\n", out.passed ? "PASS" : "FAIL", id, name.c_str(), secs,
              out.detail.empty() ? "" : " -- ", out.detail.c_str());
  std::fflush(stdout);
}

Outcome metric_exactness() {
  Outcome o;
  const double target = 1.0 / std::sqrt(10.0);
  const double chi = nl::metrics::chordal(1.0, 2.0);
  const double g = nl::metrics::g_profile(0.5);
  o.require(std::abs(chi - target) < 1e-12, "chi(1,2) = " + fmt(chi));
  o.require(std::abs(g - target) < 1e-12, "g(1/2) = " + fmt(g));
  for (const auto& r : nl::metrics::metrics_selftest()) {
    if (r.name.rfind("separation", 0) == 0 || r.name.rfind("chordal triangle", 0) == 0) continue;
    o.require(r.passed, r.name + ": " + r.detail);
  }
  return o;
}

Outcome separation_bound() {
  Outcome o;
  for (const auto& r : nl::metrics::metrics_selftest())
    if (r.name.rfind("separation", 0) == 0) {
      o.require(r.passed, r.detail);
      o.detail = o.passed ? r.detail : o.detail;
    }
  return o;
}

Outcome levi_oracle() {
  Outcome o;
  std::mt19937_64 rng(2024);
  const auto& corpus = lab::core_corpus();
  double worst = 0.0;
  for (int s = 0; s < 200; ++s) {
    const auto& e = corpus[static_cast<std::size_t>(s) % corpus.size()];
    const auto f = e.parsed();
    const int j = 1 + static_cast<int>(rng() % 8);
    const auto z = nl::testing::random_in_ball(rng, e.ball());
    const auto v = nl::Direction::normalized(nl::testing::random_unit(rng, e.n));
    const double closed = nl::levi::levi_form(f, j, z, v);
    const double fd = nl::levi::levi_form_fd(f, j, z, v, 1e-4);
    worst = std::max(worst, std::abs(closed - fd) / std::max(closed, 1e-8));
  }
  o.require(worst < 1e-5, "worst relative error " + fmt(worst));
  if (o.passed) o.detail = "worst relative error " + fmt(worst);
  return o;
}

Outcome line_identity() {
  Outcome o;
  std::mt19937_64 rng(77);
  const auto& corpus = lab::corpus_list();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < 200; ++s) {
    const auto& e = corpus[static_cast<std::size_t>(s) % corpus.size()];
    const auto f = e.parsed();
    const int j = 1 + static_cast<int>(rng() % 8);
    const auto z0 = nl::testing::random_in_ball(rng, e.ball());
    const auto v = nl::Direction::normalized(nl::testing::random_unit(rng, e.n));
    const Complex lambda = 0.5 * e.radius * Complex(u(rng), u(rng));
    auto h = nl::restrict_to_line(f, j, z0, v);
    const double sharp = nl::levi::spherical_derivative(h, lambda);
    const double levi = nl::levi::levi_form(f, j, h.point_at(lambda), v);
    if (levi > 0.0) worst = std::max(worst, std::abs(sharp * sharp - levi) / levi);
    else o.require(sharp == 0.0, "non-zero spherical derivative where the Levi form vanishes");
  }
  o.require(worst < 1e-10, "worst relative error " + fmt(worst));
  if (o.passed) o.detail = "worst relative error " + fmt(worst);
  return o;
}

Outcome mandelbrojt_closed_form() {
  Outcome o;
  const auto& e = lab::corpus_lookup("Z_POW_J");
  const auto f = e.parsed();
  const auto pts = nl::sample_ball(e.ball(), {21, 4, 7});
  const double m_expected = std::log(0.6) / std::log(0.9);
  double m_first = 0.0;
  for (int j = 1; j <= 40; ++j) {
    const auto s = nl::mandelbrojt::modulus_stats(f, j, pts);
    const auto mods = nl::testing::moduli_on(f, j, pts);
    const double m = nl::mandelbrojt::m_quantity(s).value();
    const double mp = nl::mandelbrojt::m_prime(s);
    if (j == 1) m_first = m;
    o.require(std::abs(m - m_expected) <= 0.05 * m_expected, "m off at j=" + std::to_string(j));
    o.require(std::abs(m - m_first) <= 1e-9 * m_first, "m not constant at j=" + std::to_string(j));
    o.require(std::abs(mp - std::pow(1.5, j)) <= 0.05 * std::pow(1.5, j), "m' off at j=" + std::to_string(j));
    const double m_oracle = nl::testing::pairwise_log_ratio_max(mods);
    const double mp_oracle = nl::testing::pairwise_mod_ratio_max(mods);
    o.require(std::abs(m - m_oracle) <= 1e-12 * m_oracle, "m differs from pairwise oracle at j=" + std::to_string(j));
    o.require(std::abs(mp - mp_oracle) <= 1e-12 * mp_oracle,
              "m' differs from pairwise oracle at j=" + std::to_string(j));
  }
  if (o.passed) o.detail = "m = " + fmt(m_first) + " for every j";
  return o;
}

Outcome corpus_verdicts() {
  Outcome o;
  const std::pair<const char*, nc::Verdict> expected[] = {
      {"Z_POW_J", nc::Verdict::Normal},    {"SHRINK", nc::Verdict::Normal},     {"CONSTJ", nc::Verdict::Normal},
      {"EXP_JZ", nc::Verdict::NotNormal}, {"EXP_JZ2", nc::Verdict::NotNormal},
  };
  std::string summary;
  for (auto [name, verdict] : expected) {
    const auto& e = lab::corpus_lookup(name);
    const nl::GridSpec g{e.n == 1 ? 21 : 13, 4, 7};
    auto r = nc::mandelbrojt_check(e.parsed(), range(1, 40), e.ball(), g);
    o.require(r.verdict == verdict, std::string(name) + " gave " + std::string(nc::to_string(r.verdict)));
    summary += std::string(summary.empty() ? "" : ", ") + name + "=" + std::string(nc::to_string(r.verdict));
  }
  if (o.passed) o.detail = summary;
  return o;
}

Outcome marty_agreement() {
  Outcome o;
  for (const auto& e : lab::corpus_list()) {
    const auto f = e.parsed();
    const auto g = lab::default_grid(e.n);
    auto m = nc::mandelbrojt_check(f, range(1, 40), e.ball(), g);
    auto y = nc::marty_check(f, range(1, 40), e.ball(), g);
    o.require(m.verdict == y.verdict, e.name + ": mandelbrojt " + std::string(nc::to_string(m.verdict)) + " vs marty " +
                                          std::string(nc::to_string(y.verdict)));
    if (e.name == "EXP_JZ") {
      double worst = 0.0;
      for (std::size_t k = 0; k < y.values.size(); ++k) {
        const double j = y.indices[k];
        worst = std::max(worst, std::abs(y.values[k] - j * j / 4.0) / (j * j / 4.0));
      }
      o.require(worst <= 0.10, "EXP_JZ sup Levi deviates from j^2/4 by " + fmt(worst));
      // Log-log growth exponent over the upper half.
      double mx = 0, my = 0, sxx = 0, sxy = 0;
      const std::size_t h = y.values.size() / 2;
      const double cnt = static_cast<double>(y.values.size() - h);
      for (std::size_t k = h; k < y.values.size(); ++k) {
        mx += std::log(y.indices[k]);
        my += std::log(y.values[k]);
      }
      mx /= cnt;
      my /= cnt;
      for (std::size_t k = h; k < y.values.size(); ++k) {
        sxx += std::pow(std::log(y.indices[k]) - mx, 2);
        sxy += (std::log(y.indices[k]) - mx) * (std::log(y.values[k]) - my);
      }
      const double exponent = sxy / sxx;
      o.require(std::abs(exponent - 2.0) <= 0.2, "EXP_JZ growth exponent " + fmt(exponent));
      if (o.passed) o.detail = "EXP_JZ max deviation from j^2/4 " + fmt(worst) + ", exponent " + fmt(exponent);
    }
  }
  return o;
}

Outcome power_ratios() {
  Outcome o;
  const auto& e = lab::corpus_lookup("Z_POW_J");
  const auto idx = range(1, 40);
  const auto r = lab::power_ratio_sups(idx, e.ball(), {21, 4, 7});
  const auto pts = nl::sample_ball(e.ball(), {21, 4, 7});
  double lo = 1e9, hi = 0.0;
  for (const auto& p : pts) {
    lo = std::min(lo, std::abs(p[0]));
    hi = std::max(hi, std::abs(p[0]));
  }
  for (std::size_t k = 0; k < r.size(); ++k) {
    o.require(std::abs(r[k].log_ratio_sup - r[0].log_ratio_sup) <= 1e-12,
              "log ratio varies at j=" + std::to_string(r[k].index));
    if (k > 0) {
      o.require(r[k].mod_ratio_sup > r[k - 1].mod_ratio_sup, "mod ratio not increasing");
      o.require(std::abs(r[k].mod_ratio_sup / r[k - 1].mod_ratio_sup - hi / lo) <= 1e-6,
                "consecutive mod ratio off at j=" + std::to_string(r[k].index));
    }
  }
  if (o.passed)
    o.detail = "log ratio " + fmt(r[0].log_ratio_sup) + " for all j; mod ratio " + fmt(r.back().mod_ratio_sup) +
               " at j=40";
  return o;
}

Outcome limit_trichotomy() {
  Outcome o;
  const auto idx = range(1, 60);
  auto classify = [&](const char* name) {
    const auto& e = lab::corpus_lookup(name);
    return nc::assess_limit(e.parsed(), idx, e.ball(), lab::default_grid(e.n));
  };
  const auto shrink = classify("SHRINK");
  const auto constj = classify("CONSTJ");
  const auto expjz = classify("EXP_JZ");
  o.require(shrink.cls == nc::LimitClass::ToZero, "SHRINK gave " + std::string(nc::to_string(shrink.cls)));
  o.require(constj.cls == nc::LimitClass::ToInfinity, "CONSTJ gave " + std::string(nc::to_string(constj.cls)));
  o.require(expjz.cls == nc::LimitClass::NoLocallyUniformLimit,
            "EXP_JZ gave " + std::string(nc::to_string(expjz.cls)));
  const auto h_shrink = nc::hurwitz_check(shrink.limit_values, nc::kDefaultLimitTolerance);
  o.require(h_shrink == nc::HurwitzOutcome::IdenticallyZero,
            "hurwitz on SHRINK tail gave " + std::string(nc::to_string(h_shrink)));

  const auto synthetic = nl::expr::parse_family("2 + z1/j", 1);
  const auto zf = nc::assess_limit(synthetic, idx, nl::Ball({0.0}, 1.0), lab::default_grid(1));
  o.require(zf.cls == nc::LimitClass::ZeroFreeLimit, "2 + z1/j gave " + std::string(nc::to_string(zf.cls)));
  const auto h_zf = nc::hurwitz_check(zf.limit_values, nc::kDefaultLimitTolerance);
  o.require(h_zf == nc::HurwitzOutcome::ZeroFree, "hurwitz on 2 + z1/j gave " + std::string(nc::to_string(h_zf)));
  return o;
}

Outcome harnack() {
  Outcome o;
  const double c = nl::mandelbrojt::harnack_constant(1, 0.5);
  o.require(std::abs(c - 9.0) < 1e-12, "harnack_constant(1, 1/2) = " + fmt(c));
  const double oracle = nl::testing::poisson_oracle_max_ratio(0.5);
  o.require(oracle <= 9.0 * (1 + 1e-12), "oracle ratio " + fmt(oracle) + " exceeds 9");
  o.require(oracle >= 8.5, "oracle ratio " + fmt(oracle) + " below 8.5");
  if (o.passed) o.detail = "oracle max ratio " + fmt(oracle);
  return o;
}

Outcome determinism() {
  Outcome o;
  auto full = [] {
    std::string all;
    for (const auto& e : lab::corpus_list())
      all += lab::run_config(lab::corpus_config(e), lab::RunOptions{false}).dump(2) + "\n";
    return all;
  };
  const std::string a = full();
  const std::string b = full();
  o.require(a == b, "reports differ between runs");
  if (o.passed) o.detail = std::to_string(a.size()) + " identical bytes";
  return o;
}

}  // namespace

int main() {
  run(1, "metric exactness: chi(1,2) = g(1/2) = 1/sqrt(10), g decreasing, chi <= delta <= (pi/2) chi", 1.0,
      metric_exactness);
  run(2, "separation: chi >= 1/sqrt(10) across the annulus on 10^4 seeded pairs", 1.0, separation_bound);
  run(3, "Levi closed form vs five-point stencil, 200 cases, rel < 1e-5", 5.0, levi_oracle);
  run(4, "line restriction: (h#)^2 = Levi form, 200 cases, rel < 1e-10", 2.0, line_identity);
  run(5, "Z_POW_J: m = ln0.6/ln0.9 within 5%, constant in j; m' = 1.5^j within 5%", 5.0, mandelbrojt_closed_form);
  run(6, "mandelbrojt_check verdicts on the corpus", 20.0, corpus_verdicts);
  run(7, "marty_check agrees with mandelbrojt_check; EXP_JZ sup Levi ~ j^2/4 within 10%", 15.0, marty_agreement);
  run(8, "powers z^j: log ratios constant, modulus ratios grow by max|z|/min|w|", 3.0, power_ratios);
  run(9, "limit classes ToZero / ToInfinity / NoLocallyUniformLimit and hurwitz_check", 3.0, limit_trichotomy);
  run(10, "harnack_constant(1, 1/2) = 9 and Poisson-kernel oracle in [8.5, 9]", 2.0, harnack);
  run(11, "determinism: full corpus reports byte-identical across runs", 20.0, determinism);
  std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
