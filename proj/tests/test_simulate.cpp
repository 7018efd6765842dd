#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sharpvar/empirical.hpp"
#include "sharpvar/rng.hpp"
#include "sharpvar/simulate.hpp"
#include "sharpvar/stats.hpp"
#include "sharpvar/variance.hpp"

using namespace sharpvar;

TEST_CASE("population generation respects theta extremes and determinism") {
  DgpParams params;
  params.n = 64;

  params.theta = 0.0;
  const FinitePopulation null_pop = generate_population(params, 1);
  for (std::size_t i = 0; i < null_pop.size(); ++i) {
    CHECK(null_pop.y1[i] == null_pop.y0[i]);
  }

  params.theta = 1.0;
  const FinitePopulation shifted = generate_population(params, 1);
  for (std::size_t i = 0; i < shifted.size(); ++i) {
    // Y(1) = 10 + 0.5 e, with e recoverable from Y(0) = x + e
    const double e = shifted.y0[i] - shifted.x(static_cast<Eigen::Index>(i), 0);
    CHECK(shifted.y1[i] == doctest::Approx(10.0 + 0.5 * e).epsilon(1e-12));
  }

  params.theta = 0.5;
  const FinitePopulation a = generate_population(params, 99);
  const FinitePopulation b = generate_population(params, 99);
  CHECK(a.y1 == b.y1);
  CHECK(a.y0 == b.y0);
  CHECK(a.x == b.x);

  params.theta = 1.5;
  CHECK_THROWS_AS(generate_population(params, 1), std::invalid_argument);
}

TEST_CASE("assignment draws") {
  DesignSpec cre;
  cre.kind = DesignKind::cre;
  cre.n1 = 32;
  const std::vector<int> z = draw_assignment(64, cre, 5);
  int ones = 0;
  for (int v : z) ones += v;
  CHECK(ones == 32);
  CHECK(draw_assignment(64, cre, 5) == z);  // deterministic

  DesignSpec bre;
  bre.kind = DesignKind::bre;
  bre.pi1 = 0.5;
  const std::vector<int> zb = draw_assignment(10000, bre, 12);
  double frac = 0.0;
  for (int v : zb) frac += v;
  frac /= 10000.0;
  CHECK(std::abs(frac - 0.5) < 0.02);

  DesignSpec bad;
  bad.kind = DesignKind::cre;
  bad.n1 = 1;
  CHECK_THROWS_AS(draw_assignment(64, bad, 1), std::invalid_argument);
  bad.kind = DesignKind::bre;
  bad.pi1 = 1.0;
  CHECK_THROWS_AS(draw_assignment(64, bad, 1), std::invalid_argument);
}

TEST_CASE("CRE marginal treatment frequency is uniform across units") {
  const std::size_t n = 12;
  DesignSpec cre;
  cre.kind = DesignKind::cre;
  cre.n1 = 4;
  const std::size_t reps = 10000;
  std::vector<double> freq(n, 0.0);
  for (std::size_t r = 0; r < reps; ++r) {
    const std::vector<int> z = draw_assignment(n, cre, derive_seed(1234, r));
    for (std::size_t i = 0; i < n; ++i) freq[i] += z[i];
  }
  const double expected = 4.0 / 12.0;
  const double se = std::sqrt(expected * (1 - expected) / static_cast<double>(reps));
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::abs(freq[i] / static_cast<double>(reps) - expected) < 3.0 * se);
  }
}

TEST_CASE("formula oracle on a hand-checkable population") {
  // constant effect, intercept-only adjustment, eps = (-1,1,-1,1) per arm
  FinitePopulation pop;
  pop.y0 = {-1, 1, -1, 1};
  pop.y1 = {-1, 1, -1, 1};
  pop.x = Eigen::MatrixXd(4, 1);
  pop.x << 0, 0, 0, 0;  // uninformative; use dim to avoid the singular fit
  DesignSpec design;
  design.kind = DesignKind::cre;
  design.n1 = 2;
  const double v =
      true_variance_oracle(pop, design, EstimatorKind::dim, OracleMode::formula, 0, 0);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("formula oracle is zero for exactly linear potential outcomes") {
  DgpParams params;
  params.n = 50;
  const FinitePopulation base = generate_population(params, 3);
  FinitePopulation pop = base;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const double x = pop.x(static_cast<Eigen::Index>(i), 0);
    pop.y0[i] = 1.0 + 2.0 * x;
    pop.y1[i] = 3.0 - 1.0 * x;
  }
  DesignSpec design;
  design.kind = DesignKind::cre;
  design.n1 = 25;
  const double v =
      true_variance_oracle(pop, design, EstimatorKind::lin, OracleMode::formula, 0, 0);
  CHECK(std::abs(v) < 1e-20);
}

TEST_CASE("formula and monte carlo oracles agree") {
  DgpParams params;
  params.n = 200;
  params.theta = 0.4;
  const FinitePopulation pop = generate_population(params, 17);
  DesignSpec design;
  design.kind = DesignKind::cre;
  design.n1 = 100;
  const double vf =
      true_variance_oracle(pop, design, EstimatorKind::lin, OracleMode::formula, 0, 0);
  const std::size_t reps = 10000;
  const double vm = true_variance_oracle(pop, design, EstimatorKind::lin,
                                         OracleMode::monte_carlo, reps, 23);
  // MC error of a sample variance, approximated with the normal-kurtosis rule
  const double se = vf * std::sqrt(2.0 / static_cast<double>(reps));
  CHECK(std::abs(vm - vf) < 5.0 * se);
}

TEST_CASE("monte_carlo_bias preconditions and determinism") {
  DgpParams params;
  params.n = 60;
  params.theta = 0.0;
  const FinitePopulation pop = generate_population(params, 2);
  DesignSpec design;
  design.kind = DesignKind::cre;
  design.n1 = 30;
  CHECK_THROWS_AS(monte_carlo_bias(pop, design, EstimatorKind::lin, 50, 1),
                  std::invalid_argument);

  const BiasSummary a = monte_carlo_bias(pop, design, EstimatorKind::lin, 100, 11);
  const BiasSummary b = monte_carlo_bias(pop, design, EstimatorKind::lin, 100, 11);
  CHECK(a.mean_sharp == b.mean_sharp);
  CHECK(a.true_variance == b.true_variance);
  CHECK(a.redraws == 0);  // CRE never rejects
}

TEST_CASE("BRE redraws are counted when an arm can degenerate") {
  DgpParams params;
  params.n = 8;
  const FinitePopulation pop = generate_population(params, 4);
  DesignSpec design;
  design.kind = DesignKind::bre;
  design.pi1 = 0.15;  // degenerate treated arms are common at N = 8
  const BiasSummary s = monte_carlo_bias(pop, design, EstimatorKind::dim, 500, 3);
  CHECK(s.redraws > 0);
}

TEST_CASE("per-draw estimator ordering holds inside the sweep") {
  DgpParams params;
  params.n = 80;
  params.theta = 0.5;
  const FinitePopulation pop = generate_population(params, 31);
  DesignSpec design;
  design.kind = DesignKind::cre;
  design.n1 = 40;
  for (std::size_t r = 0; r < 50; ++r) {
    const std::vector<int> z = draw_assignment(80, design, derive_seed(7, r));
    auto [est, adj] = lin_estimate(observe(pop, z));
    const double conv = conventional_variance(adj);
    const double cs = cauchy_schwarz_variance(adj);
    const SharpBounds sb = sharp_variance_bounds(adj);
    CHECK(sb.lower <= sb.upper + 1e-12);
    CHECK(sb.upper <= cs + 1e-12);
    CHECK(cs <= conv + 1e-12);
  }
}

TEST_CASE("oracle cross term lies within the population coupling bounds") {
  for (double theta : {0.0, 0.3, 0.7, 1.0}) {
    DgpParams params;
    params.n = 120;
    params.theta = theta;
    const FinitePopulation pop = generate_population(params, 41);
    const double oracle = oracle_cross_term(pop, EstimatorKind::lin);

    // population marginals of the adjusted outcomes
    const Eigen::RowVectorXd xbar = pop.x.colwise().mean();
    const Eigen::MatrixXd xc = pop.x.rowwise() - xbar;
    const LinearModel m1 = fit_arm_ols(xc, pop.y1);
    const LinearModel m0 = fit_arm_ols(xc, pop.y0);
    std::vector<double> e1(pop.size()), e0(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      e1[i] = pop.y1[i] - m1.predict(xc.row(r));
      e0[i] = pop.y0[i] - m0.predict(xc.row(r));
    }
    const Ecdf g = Ecdf::from_sample(e1);
    const Ecdf f = Ecdf::from_sample(e0);
    CHECK(oracle <= 2.0 * comonotone_cross_moment(g, f) + 1e-10);
    CHECK(oracle >= 2.0 * countermonotone_cross_moment(g, f) - 1e-10);
  }
}

TEST_CASE("theta_sweep output shape and determinism") {
  DgpParams params;
  params.n = 60;
  DesignSpec design;
  design.kind = DesignKind::cre;
  design.n1 = 30;
  const std::vector<double> grid = {0.0, 0.5, 1.0};
  const CrossTermCurve a = theta_sweep(grid, params, design, 20, 5);
  const CrossTermCurve b = theta_sweep(grid, params, design, 20, 5);
  REQUIRE(a.points.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.points[i].theta == grid[i]);
    CHECK(a.points[i].mean_sharp == b.points[i].mean_sharp);
    CHECK(a.points[i].reps == 20);
  }
  // grid points use independent streams: a sub-grid reproduces its points
  const CrossTermCurve head = theta_sweep({0.0}, params, design, 20, 5);
  CHECK(head.points[0].mean_sharp == a.points[0].mean_sharp);

  CHECK_THROWS_AS(theta_sweep({}, params, design, 20, 5), std::invalid_argument);
  CHECK_THROWS_AS(theta_sweep({2.0}, params, design, 20, 5), std::invalid_argument);
}
