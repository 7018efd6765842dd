#ifndef SHARPVAR_EMPIRICAL_HPP
#define SHARPVAR_EMPIRICAL_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace sharpvar {

/// Exact rational in [0,1]; numerator/denominator with den > 0.
/// Comparisons cross-multiply in 128-bit so i/n_a vs j/n_b ties are exact.
struct Rational {
  std::int64_t num;
  std::int64_t den;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
};

/// Sorted distinct breakpoints {i/n_a} ∪ {j/n_b}, from 0 to 1.
struct ProbabilityGrid {
  std::vector<Rational> breakpoints;
};

ProbabilityGrid merged_probability_grid(std::size_t n_a, std::size_t n_b);

/// Weighted empirical distribution with a left-continuous quantile inverse.
///
/// Atoms are sorted ascending with duplicate values merged (weights summed)
/// and weights normalized to sum 1. When built from an unweighted sample the
/// original sorted sample (with duplicates) is retained so cross-moments can
/// use the exact rational probability grid.
class Ecdf {
 public:
  static Ecdf from_sample(std::vector<double> values);
  static Ecdf from_sample(std::vector<double> values, std::vector<double> weights);

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& cumulative_weights() const { return cum_; }

  bool uniform() const { return !sorted_sample_.empty(); }
  /// Sorted raw sample; only available on the uniform (unweighted) path.
  const std::vector<double>& sorted_sample() const { return sorted_sample_; }

  /// Left-continuous inverse: smallest atom with cumulative weight >= u,
  /// for u in (0, 1].
  double quantile(double u) const;

  double mean() const;
  double second_moment() const;

 private:
  Ecdf() = default;
  std::vector<double> values_;
  std::vector<double> weights_;
  std::vector<double> cum_;
  std::vector<double> sorted_sample_;  // empty unless uniform
};

/// E[G^{-1}(U) F^{-1}(U)], the cross-moment under the comonotone coupling of
/// the two marginals. Uniform-weight inputs go through the exact rational
/// grid; weighted inputs integrate over the union of cumulative-weight
/// breakpoints.
double comonotone_cross_moment(const Ecdf& a, const Ecdf& b);

/// E[G^{-1}(U) F^{-1}(1-U)], the countermonotone coupling.
double countermonotone_cross_moment(const Ecdf& a, const Ecdf& b);

}  // namespace sharpvar

#endif  // SHARPVAR_EMPIRICAL_HPP
