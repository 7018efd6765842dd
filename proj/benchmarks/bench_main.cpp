#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sharpvar/adjust.hpp"
#include "sharpvar/empirical.hpp"
#include "sharpvar/variance.hpp"

namespace {

std::vector<double> normal_sample(std::size_t n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> norm;
  std::vector<double> v(n);
  for (auto& x : v) x = norm(gen);
  return v;
}

void bm_comonotone_cross_moment(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = sharpvar::Ecdf::from_sample(normal_sample(n, 1));
  const auto b = sharpvar::Ecdf::from_sample(normal_sample(n + n / 3, 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sharpvar::comonotone_cross_moment(a, b));
  }
}
BENCHMARK(bm_comonotone_cross_moment)->Range(64, 1 << 16);

void bm_sharp_variance_bounds(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  sharpvar::AdjustedSamples adj;
  adj.eps1 = normal_sample(n, 3);
  adj.eps0 = normal_sample(n, 4);
  adj.n_t = static_cast<double>(n);
  adj.n_tbar = static_cast<double>(n);
  adj.n_total = 2 * n;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sharpvar::sharp_variance_bounds(adj));
  }
}
BENCHMARK(bm_sharp_variance_bounds)->Range(64, 1 << 16);

void bm_lin_estimate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937 gen(5);
  std::normal_distribution<double> norm;
  sharpvar::ExperimentData data;
  data.y_obs.resize(n);
  data.z.resize(n);
  data.x.resize(static_cast<Eigen::Index>(n), 3);
  for (std::size_t i = 0; i < n; ++i) {
    data.z[i] = static_cast<int>(i % 2);
    double lin = 0.0;
    for (Eigen::Index j = 0; j < 3; ++j) {
      const double x = norm(gen);
      data.x(static_cast<Eigen::Index>(i), j) = x;
      lin += x;
    }
    data.y_obs[i] = lin + 2.0 * data.z[i] + norm(gen);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(sharpvar::lin_estimate(data));
  }
}
BENCHMARK(bm_lin_estimate)->Range(64, 1 << 14);

}  // namespace

BENCHMARK_MAIN();
