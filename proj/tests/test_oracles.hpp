// Independent oracles used by the unit and acceptance suites. These must not
// share code paths with the implementations they check.
#ifndef SHARPVAR_TEST_ORACLES_HPP
#define SHARPVAR_TEST_ORACLES_HPP

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "sharpvar/empirical.hpp"

namespace sharpvar::testing {

/// Max / min of (1/n) sum a_i b_{pi(i)} over all n! pairings.
inline std::pair<double, double> permutation_cross_moment_range(std::vector<double> a,
                                                                std::vector<double> b) {
  std::vector<std::size_t> perm(b.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[perm[i]];
    s /= static_cast<double>(a.size());
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {lo, hi};
}

/// Integral of Qa(u) Qb(u) (or Qb(1-u) when `reverse`) evaluated cell by
/// cell on the common grid k / lcm(n_a, n_b); every cell is constant for
/// uniform samples, so the sum is exact. Goes through Ecdf::quantile, not
/// the merged-grid summation.
inline double quantile_integral_cross_moment(const Ecdf& a, const Ecdf& b, bool reverse) {
  const std::size_t n_a = a.sorted_sample().size();
  const std::size_t n_b = b.sorted_sample().size();
  const std::size_t l = std::lcm(n_a, n_b);
  double sum = 0.0;
  for (std::size_t k = 1; k <= l; ++k) {
    const double u_a = static_cast<double>(k) / static_cast<double>(l);
    const double u_b =
        reverse ? static_cast<double>(l - k + 1) / static_cast<double>(l) : u_a;
    sum += a.quantile(u_a) * b.quantile(u_b);
  }
  return sum / static_cast<double>(l);
}

}  // namespace sharpvar::testing

#endif  // SHARPVAR_TEST_ORACLES_HPP
