#ifndef SHARPVAR_RNG_HPP
#define SHARPVAR_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace sharpvar {

/// Mixes a master seed with a stream index into an independent sub-seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Deterministic RNG for the simulation harness.
///
/// Wraps std::mt19937_64 (a fixed algorithm pinned by the standard) but
/// generates uniforms and normals itself so outputs do not depend on
/// library-specific distribution implementations. Independent streams are
/// derived from a master seed with a splitmix64 mix, so parallel reps and
/// grid points are order-independent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Substream `index` of master seed `seed`; streams for distinct indices
  /// are statistically independent.
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Uniform on (0, 1), safe to feed through an inverse CDF.
  double uniform_open();

  /// Standard normal via inverse-CDF transform (deterministic across
  /// platforms and standard libraries).
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Binary vector with exactly n1 ones among n entries, uniform over subsets.
  std::vector<int> sample_without_replacement(std::size_t n, std::size_t n1);

 private:
  std::mt19937_64 engine_;
};

}  // namespace sharpvar

#endif  // SHARPVAR_RNG_HPP
