#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sharpvar/diagnostics.hpp"
#include "sharpvar/empirical.hpp"
#include "sharpvar/stats.hpp"

using namespace sharpvar;

namespace {

AdjustedSamples make_adj(std::vector<double> eps1, std::vector<double> eps0) {
  AdjustedSamples adj;
  adj.n_t = static_cast<double>(eps1.size());
  adj.n_tbar = static_cast<double>(eps0.size());
  adj.n_total = eps1.size() + eps0.size();
  adj.eps1 = std::move(eps1);
  adj.eps0 = std::move(eps0);
  return adj;
}

}  // namespace

TEST_CASE("qq pairs on identical arms lie on the diagonal") {
  const QqSeries qq = qq_pairs(make_adj({1, 2, 3}, {1, 2, 3}));
  for (std::size_t i = 0; i < qq.probs.size(); ++i) {
    CHECK(qq.q_treated[i] == qq.q_control[i]);
  }
}

TEST_CASE("qq pairs fixture with unequal sizes") {
  const QqSeries qq = qq_pairs(make_adj({-1, 1}, {-1, 0, 1}));
  REQUIRE(qq.probs.size() == 4);
  CHECK(qq.probs[0] == doctest::Approx(1.0 / 3.0));
  CHECK(qq.probs[1] == doctest::Approx(0.5));
  CHECK(qq.probs[2] == doctest::Approx(2.0 / 3.0));
  CHECK(qq.probs[3] == doctest::Approx(1.0));
  CHECK(qq.q_treated[0] == -1.0);
  CHECK(qq.q_control[0] == -1.0);
  CHECK(qq.q_treated[1] == -1.0);
  CHECK(qq.q_control[1] == 0.0);
  CHECK(qq.q_treated[2] == 1.0);
  CHECK(qq.q_control[2] == 0.0);
  CHECK(qq.q_treated[3] == 1.0);
  CHECK(qq.q_control[3] == 1.0);
}

TEST_CASE("qq pairs with explicit grid size") {
  const QqSeries qq = qq_pairs(make_adj({-1, 1, 5}, {0, 2, 7}), 1);
  REQUIRE(qq.probs.size() == 1);
  CHECK(qq.probs[0] == 1.0);
  CHECK(qq.q_treated[0] == 5.0);
  CHECK(qq.q_control[0] == 7.0);
}

TEST_CASE("qq quantile sequences are non-decreasing") {
  std::mt19937 gen(17);
  std::normal_distribution<double> norm;
  std::vector<double> e1(11), e0(8);
  for (auto& v : e1) v = norm(gen);
  for (auto& v : e0) v = norm(gen);
  const QqSeries qq = qq_pairs(make_adj(e1, e0));
  for (std::size_t i = 1; i < qq.probs.size(); ++i) {
    CHECK(qq.q_treated[i] >= qq.q_treated[i - 1]);
    CHECK(qq.q_control[i] >= qq.q_control[i - 1]);
  }
}

TEST_CASE("sorted residual correlation fixtures") {
  CHECK(sorted_residual_correlation(make_adj({1, 2, 3}, {1, 2, 3})) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sorted_residual_correlation(make_adj({-1, 0, 1}, {-1, -1, 2})) ==
        doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
  // affine image of the sorted list has correlation 1
  CHECK(sorted_residual_correlation(make_adj({3, 1, 2}, {7, 3, 5})) ==
        doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(sorted_residual_correlation(make_adj({1, 2}, {1, 2, 3})),
                  std::invalid_argument);
  CHECK_THROWS_AS(sorted_residual_correlation(make_adj({1, 1}, {0, 2})),
                  std::domain_error);
}

TEST_CASE("balanced designs: rho * sqrt(AB) equals the comonotone cross-moment") {
  std::mt19937 gen(29);
  std::normal_distribution<double> norm;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 3 + static_cast<std::size_t>(rep % 10);
    std::vector<double> e1(n), e0(n);
    for (auto& v : e1) v = norm(gen);
    for (auto& v : e0) v = norm(gen);
    // center, as regression residuals are
    const double m1 = sample_mean(e1);
    const double m0 = sample_mean(e0);
    for (auto& v : e1) v -= m1;
    for (auto& v : e0) v -= m0;

    const AdjustedSamples adj = make_adj(e1, e0);
    const double rho = sorted_residual_correlation(adj);
    const Ecdf g = Ecdf::from_sample(e1);
    const Ecdf f = Ecdf::from_sample(e0);
    const double cross = comonotone_cross_moment(g, f);
    const double envelope = std::sqrt(g.second_moment() * f.second_moment());
    CHECK(rho * envelope == doctest::Approx(cross).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("rho equals 1 iff the cauchy-schwarz ratio equals 1") {
  // linearly dependent sorted residuals: CS is tight
  const AdjustedSamples dependent = make_adj({-2, 0, 2}, {-1, 0, 1});
  const VarianceReport r1 = variance_report(dependent, 0.0, 0.05);
  CHECK(sorted_residual_correlation(dependent) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bound_ratios(r1).second == doctest::Approx(1.0).epsilon(1e-12));

  // not linearly dependent: both strictly below 1
  const AdjustedSamples bent = make_adj({-1, 0, 1}, {-1, -1, 2});
  const VarianceReport r2 = variance_report(bent, 0.0, 0.05);
  CHECK(sorted_residual_correlation(bent) < 1.0 - 1e-6);
  CHECK(bound_ratios(r2).second < 1.0 - 1e-6);
}

TEST_CASE("bound ratios") {
  const AdjustedSamples n6 = make_adj({-1, 0, 1}, {-1, -1, 2});
  const VarianceReport r = variance_report(n6, 0.0, 0.05);
  const auto [conv_ratio, cs_ratio] = bound_ratios(r);
  CHECK(cs_ratio == doctest::Approx(0.9378).epsilon(1e-3));
  CHECK(conv_ratio <= cs_ratio);
  CHECK(cs_ratio <= 1.0);

  const AdjustedSamples degenerate = make_adj({-1, 1}, {-1, 1});
  const VarianceReport rd = variance_report(degenerate, 0.0, 0.05);
  const auto [c1, c2] = bound_ratios(rd);
  CHECK(c1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c2 == doctest::Approx(1.0).epsilon(1e-12));

  const VarianceReport zero = variance_report(make_adj({0, 0}, {0, 0}), 0.0, 0.05);
  CHECK_THROWS_AS(bound_ratios(zero), std::domain_error);
}
