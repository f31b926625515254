#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "tsgag/inequalities.hpp"

using namespace tsgag;
using tsgag::test::close_rel;
using tsgag::test::random_scenario;

namespace {

double two_weight_c1(double l1, double l2, double p) {
  return (l1 * std::pow(l2, p) + l2 * std::pow(l1, p)) /
         (2.0 * l1 * l2 * std::pow(l1 + l2, p));
}

}  // namespace

TEST_CASE("cross bounds: two-atom equality case") {
  QuadConfig cfg;
  TimeScale ts = TimeScale::build({{}, {{0, 1}, {2, 1}}});
  TSFunction u = TSFunction::from_payloads(ts, {ConstantFn{0.0}, ConstantFn{1.0}});
  SeminormParams prm{0.5, 2.0, nullptr};
  InequalityReport rep = cross_bounds_check(u, prm, ts, cfg, "two-atoms");
  CHECK(rep.lhs == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(rep.rhs == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rep.holds);  // delta0 = diam here, so both bounds are tight
}

TEST_CASE("cross bounds: constant function and random hybrid scenarios") {
  QuadConfig cfg;
  {
    TimeScale ts = TimeScale::build({{{0, 1}}, {{3, 1}}});
    InequalityReport rep = cross_bounds_check(TSFunction::constant(ts, 5.0),
                                              SeminormParams{0.5, 2.0, nullptr}, ts,
                                              cfg, "const");
    CHECK(rep.lhs == 0.0);
    CHECK(rep.rhs == 0.0);
    CHECK(rep.ratio == 0.0);
    CHECK(rep.holds);
  }
  std::mt19937_64 rng(derive_seed("ineq-cross", 0));
  int done = 0;
  while (done < 20) {
    auto sc = random_scenario(rng);
    if (sc.ts.component_count() < 2) continue;
    InequalityReport rep = cross_bounds_check(sc.u, sc.prm, sc.ts, QuadConfig{}, "rand");
    CHECK(rep.holds);
    ++done;
  }
  TimeScale single = TimeScale::build({{{0, 1}}, {}});
  CHECK_THROWS_AS(cross_bounds_check(TSFunction::constant(single, 1.0),
                                     SeminormParams{0.5, 2.0, nullptr}, single,
                                     QuadConfig{}, ""),
                  Error);
}

TEST_CASE("poincare check: closed forms") {
  QuadConfig cfg;
  {
    TimeScale ts = TimeScale::build({{}, {{0, 1}, {1, 1}}});
    TSFunction u = TSFunction::from_payloads(ts, {ConstantFn{0.0}, ConstantFn{1.0}});
    SeminormParams prm{0.3, 2.0, nullptr};  // any alpha: unit distance kernel
    InequalityReport rep = poincare_check(u, prm, ts, 0.5, cfg, "pair");
    CHECK(rep.ratio == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.holds);
    // slightly smaller constant must fail
    InequalityReport bad = poincare_check(u, prm, ts, 0.49, cfg, "pair");
    CHECK(!bad.holds);
  }
  {
    TimeScale ts = TimeScale::build({{{0, 1}}, {}});
    TSFunction u = TSFunction::linear(ts, 1.0, 0.0);
    SeminormParams prm{0.5, 2.0, nullptr};
    InequalityReport rep = poincare_check(u, prm, ts, 1.0, cfg, "linear");
    CHECK(rep.lhs == doctest::Approx(std::sqrt(1.0 / 12.0)).epsilon(1e-8));
    CHECK(rep.rhs == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.ratio == doctest::Approx(std::sqrt(1.0 / 12.0)).epsilon(1e-6));
  }
  {
    // divergent seminorm: infinite right-hand side, vacuously true
    TimeScale ts = TimeScale::build({{{0, 1}}, {}});
    TSFunction u = TSFunction::indicator(ts, 0.0, 0.5);
    SeminormParams prm{0.6, 2.0, nullptr};
    InequalityReport rep = poincare_check(u, prm, ts, 1.0, cfg, "div");
    CHECK(rep.holds);
    CHECK(rep.ratio == 0.0);
    CHECK(std::isinf(rep.rhs));
  }
}

TEST_CASE("discrete poincare constant: two-weight closed form") {
  CHECK(discrete_poincare_constant({1, 1}, 2).value == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(discrete_poincare_constant({1, 1}, 3).value ==
        doctest::Approx(0.125).epsilon(1e-9));
  // closed form with equal weights lambda: 2 lambda^{p+1} / (2 lambda^2 (2 lambda)^p)
  CHECK(discrete_poincare_constant({2, 2}, 2).value ==
        doctest::Approx(two_weight_c1(2, 2, 2)).epsilon(1e-14));
  CHECK(two_weight_c1(2, 2, 2) == doctest::Approx(16.0 / 128.0));

  std::mt19937_64 rng(derive_seed("ineq-discrete", 0));
  std::uniform_real_distribution<double> wd(0.05, 5.0);
  for (int k = 0; k < 100; ++k) {
    const double l1 = wd(rng), l2 = wd(rng);
    const double c1 = discrete_poincare_constant({l1, l2}, 2).value;
    CHECK(std::abs(c1 - two_weight_c1(l1, l2, 2)) < 1e-10);
    // p = 2 closed form collapses to 1/(2(l1+l2)) for any weights
    CHECK(close_rel(c1, 1.0 / (2.0 * (l1 + l2)), 1e-10));
  }

  for (double p : {1.5, 3.0}) {
    for (int k = 0; k < 10; ++k) {
      const double l1 = wd(rng), l2 = wd(rng);
      DiscretePoincareConstant c = discrete_poincare_constant({l1, l2}, p);
      CHECK(c.certified_lower >= two_weight_c1(l1, l2, p) - 1e-8);
      CHECK(c.certified_lower <= 1.0 / (l1 + l2) + 1e-12);  // Jensen cap
    }
  }

  // more than two weights: optimizer stays within [closed-form floor, cap]
  DiscretePoincareConstant c3 = discrete_poincare_constant({1, 1, 1}, 3);
  CHECK(c3.certified_lower > 0);
  CHECK(c3.certified_lower <= 1.0 / 3.0 + 1e-12);

  CHECK_THROWS_AS(discrete_poincare_constant({1.0}, 2), Error);
  try {
    discrete_poincare_constant({1.0}, 2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FewerThanTwoWeights);
  }
}

TEST_CASE("poincare constant estimation") {
  QuadConfig cfg;
  TimeScale pair = TimeScale::build({{}, {{0, 1}, {1, 1}}});
  SeminormParams prm{0.5, 2.0, nullptr};

  PoincareEstimate eig =
      poincare_constant(prm, pair, PoincareMethod::Eigensolve, {}, cfg);
  CHECK(eig.value == doctest::Approx(0.5).epsilon(1e-12));

  PoincareOptions sopts;
  sopts.samples = 25;
  PoincareEstimate samp =
      poincare_constant(prm, pair, PoincareMethod::Sampling, sopts, cfg);
  CHECK(samp.value <= eig.value * (1 + 1e-9));
  CHECK(samp.value > 0);

  SeminormParams p3{0.5, 3.0, nullptr};
  CHECK_THROWS_AS(poincare_constant(p3, pair, PoincareMethod::Eigensolve, {}, cfg),
                  Error);
  PoincareOptions zero;
  zero.samples = 0;
  CHECK_THROWS_AS(poincare_constant(prm, pair, PoincareMethod::Sampling, zero, cfg),
                  Error);
}

TEST_CASE("poincare: pipeline ratios of mesh-aligned functions respect the eigensolve") {
  QuadConfig cfg;
  TimeScale ts = TimeScale::build({{{0, 1}}, {{1.5, 0.5}}});
  SeminormParams prm{0.5, 2.0, nullptr};
  const std::vector<int> cells{8};
  PoincareOptions popts;
  popts.cells_per_interval = cells;
  const double c_p =
      poincare_constant(prm, ts, PoincareMethod::Eigensolve, popts, cfg).value;

  // Random piecewise-linear functions with knots on the mesh lie in the
  // Galerkin space, so their full-pipeline ratio (quadrature seminorm and
  // norms, no matrices) must sit under the spectral constant.
  std::mt19937_64 rng(derive_seed("ineq-poincare-pipeline", 0));
  std::uniform_real_distribution<double> vd(-1.5, 1.5);
  double max_ratio = 0;
  for (int trial = 0; trial < 15; ++trial) {
    SamplesFn s;
    for (int i = 0; i <= 8; ++i) {
      s.grid.push_back(i / 8.0);
      s.values.push_back(vd(rng));
    }
    TSFunction u = TSFunction::from_payloads(ts, {s, ConstantFn{vd(rng)}});
    InequalityReport rep = poincare_check(u, prm, ts, c_p * 1.05, cfg, "pipeline");
    CHECK(rep.holds);
    if (std::isfinite(rep.ratio)) max_ratio = std::max(max_ratio, rep.ratio);
  }
  CHECK(max_ratio <= c_p * 1.05);
  CHECK(max_ratio > 0.2 * c_p);  // the draws are not degenerate
}

TEST_CASE("coercivity") {
  QuadConfig cfg;
  TimeScale ts = TimeScale::build({{{0, 1}}, {}});
  SeminormParams prm{0.5, 2.0, nullptr};
  {
    TSFunction u = TSFunction::constant(ts, 1.0);
    InequalityReport rep = coercivity_check(u, prm, ts, 1.0, cfg, "const");
    CHECK(rep.lhs == doctest::Approx(1.0));
    CHECK(rep.rhs == doctest::Approx(1.0));
    CHECK(rep.holds);
  }
  {
    TSFunction u = TSFunction::linear(ts, 1.0, 0.0);
    const double c_p = 1.0;  // anything >= the true constant
    InequalityReport rep =
        coercivity_check(u, prm, ts, std::max(c_p, 1.0), cfg, "linear");
    CHECK(rep.holds);
  }
  {
    TSFunction u = TSFunction::constant(ts, 0.0);
    InequalityReport rep = coercivity_check(u, prm, ts, 2.0, cfg, "zero");
    CHECK(rep.lhs == 0.0);
    CHECK(rep.holds);
  }
}

TEST_CASE("hardy: closed form, domain errors, monotone ratios") {
  QuadConfig cfg;
  TimeScale ts = TimeScale::build({{{0, 1}}, {}});
  TSFunction u = TSFunction::linear(ts, 1.0, 0.0);
  SeminormParams prm{0.5, 2.0, nullptr};

  InequalityReport rep = hardy_check(u, prm, 0.25, 0.0, ts, cfg, "linear");
  CHECK(std::abs(rep.lhs - 7.0 / 30.0) < 1e-6);
  CHECK(rep.rhs == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep.ratio == doctest::Approx(7.0 / 30.0).epsilon(1e-5));
  CHECK(rep.holds);

  InequalityReport zero =
      hardy_check(TSFunction::constant(ts, 4.0), prm, 0.25, 0.0, ts, cfg, "const");
  CHECK(zero.lhs == doctest::Approx(0.0));
  CHECK(zero.holds);

  CHECK_THROWS_AS(hardy_check(u, prm, 0.5, 0.0, ts, cfg, ""), Error);   // beta = alpha
  CHECK_THROWS_AS(hardy_check(u, prm, -0.1, 0.0, ts, cfg, ""), Error);  // beta < 0
  CHECK_THROWS_AS(hardy_check(u, prm, 0.25, 7.0, ts, cfg, ""), Error);  // x0 not in T
  try {
    hardy_check(u, prm, 0.5, 0.0, ts, cfg, "");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BetaOutOfRange);
  }

  // ratio nondecreasing as beta increases toward alpha (weight grows on (0,1))
  double prev = -1;
  for (double beta : {0.05, 0.15, 0.25, 0.35, 0.45}) {
    InequalityReport r = hardy_check(u, prm, beta, 0.0, ts, cfg, "sweep");
    CHECK(r.ratio >= prev - 1e-12);
    prev = r.ratio;
  }
}

TEST_CASE("hardy: weight centered inside the interval") {
  QuadConfig cfg;
  TimeScale ts = TimeScale::build({{{0, 1}}, {}});
  TSFunction u = TSFunction::linear(ts, 1.0, 0.0);
  SeminormParams prm{0.5, 2.0, nullptr};
  // u - mean = t - 1/2 vanishes at x0 = 1/2:
  // lhs = \int_0^1 |t-1/2|^{3/2} dt = (4/5) 2^{-5/2}
  InequalityReport rep = hardy_check(u, prm, 0.25, 0.5, ts, cfg, "interior");
  CHECK(rep.lhs == doctest::Approx(0.8 * std::pow(2.0, -2.5)).epsilon(1e-8));
  CHECK(rep.holds);
}

TEST_CASE("hardy: atom x0 exclusion convention is flagged") {
  QuadConfig cfg;
  TimeScale ts = TimeScale::build({{{1, 2}}, {{0, 1}}});
  std::mt19937_64 rng(derive_seed("ineq-hardy-atom", 0));
  TSFunction u = random_sampled_function(ts, rng);
  SeminormParams prm{0.6, 2.0, nullptr};
  InequalityReport rep = hardy_check(u, prm, 0.25, 0.0, ts, cfg, "atom-x0");
  CHECK(rep.note.find("excluded") != std::string::npos);
  CHECK(std::isfinite(rep.lhs));
}

TEST_CASE("ckn: endpoint collapses and the Hoelder form") {
  QuadConfig cfg;
  TimeScale ts = TimeScale::build({{{0, 1}}, {}});
  TSFunction u = TSFunction::linear(ts, 1.0, 0.0);
  SeminormParams prm{0.5, 2.0, nullptr};

  // theta = 1: identical to the Hardy weighted norm (same code path values)
  InequalityReport endpoint1 = ckn_check(u, prm, 2.0, 1.0, 0.25, 0.0, ts, cfg, "t1");
  InequalityReport hardy = hardy_check(u, prm, 0.25, 0.0, ts, cfg, "t1");
  CHECK(close_rel(std::pow(endpoint1.lhs, prm.p), hardy.lhs, 1e-12));
  CHECK(close_rel(endpoint1.lhs, endpoint1.rhs, 1e-12));
  CHECK(endpoint1.holds);

  // theta = 0: plain q-norm on both sides
  InequalityReport endpoint0 = ckn_check(u, prm, 2.0, 0.0, 0.25, 0.0, ts, cfg, "t0");
  CHECK(close_rel(endpoint0.lhs, endpoint0.rhs, 1e-14));
  CHECK(endpoint0.holds);

  // closed-form instance: lhs <= (7/30)^{1/4} (1/12)^{1/4}
  InequalityReport mid = ckn_check(u, prm, 2.0, 0.5, 0.25, 0.0, ts, cfg, "mid");
  CHECK(mid.holds);
  CHECK(mid.rhs == doctest::Approx(std::pow(7.0 / 30.0, 0.25) *
                                   std::pow(1.0 / 12.0, 0.25)).epsilon(1e-6));
  CHECK(mid.lhs <= mid.rhs * (1 + 1e-9));

  CHECK_THROWS_AS(ckn_check(u, prm, 0.5, 0.5, 0.25, 0.0, ts, cfg, ""), Error);
  CHECK_THROWS_AS(ckn_check(u, prm, 2.0, 1.5, 0.25, 0.0, ts, cfg, ""), Error);
  CHECK_THROWS_AS(ckn_check(u, prm, 2.0, 0.5, 0.75, 0.0, ts, cfg, ""), Error);
}

TEST_CASE("ckn: Hoelder form on random scenarios") {
  QuadConfig cfg;
  cfg.rel_tol = 1e-7;
  std::mt19937_64 rng(derive_seed("ineq-ckn-random", 0));
  int done = 0;
  while (done < 20) {
    auto sc = random_scenario(rng);
    sc.prm.p = std::uniform_real_distribution<double>(1.2, 2.2)(rng);
    sc.prm.alpha = std::uniform_real_distribution<double>(0.3, 0.8)(rng);
    const double beta =
        std::uniform_real_distribution<double>(0.0, 0.9)(rng) * sc.prm.alpha;
    if (beta * sc.prm.p >= 0.9) continue;  // stay subcritical for the weight
    const double theta = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double q = std::uniform_real_distribution<double>(1.0, 3.0)(rng);
    const double x0 = sc.ts.inf();
    InequalityReport rep =
        ckn_check(sc.u, sc.prm, q, theta, beta, x0, sc.ts, cfg, "rand");
    CHECK(rep.holds);
    ++done;
  }
}
