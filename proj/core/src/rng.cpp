#include "sharpvar/rng.hpp"

#include <stdexcept>

#include "sharpvar/stats.hpp"

namespace sharpvar {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(derive_seed(seed, index));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open() {
  double u;
  do {
    u = uniform();
  } while (u == 0.0);
  return u;
}

double Rng::normal() { return normal_quantile(uniform_open()); }

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) {
    throw std::invalid_argument("Rng::below: n must be positive");
  }
  // rejection sampling to avoid modulo bias
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

std::vector<int> Rng::sample_without_replacement(std::size_t n, std::size_t n1) {
  if (n1 > n) {
    throw std::invalid_argument("Rng: sample size exceeds population");
  }
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  // partial Fisher-Yates: the first n1 positions form the sample
  for (std::size_t i = 0; i < n1; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(below(n - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<int> z(n, 0);
  for (std::size_t i = 0; i < n1; ++i) z[idx[i]] = 1;
  return z;
}

}  // namespace sharpvar
