#ifndef SHARPVAR_STATS_HPP
#define SHARPVAR_STATS_HPP

#include <cstddef>
#include <vector>

namespace sharpvar {

/// Inverse of the standard normal CDF (Wichura's AS 241, double precision;
/// absolute error well below 1e-10 on (0,1)).
double normal_quantile(double p);

/// (n-1)-divisor sample variance.
double sample_variance(const std::vector<double>& x);

double sample_mean(const std::vector<double>& x);

/// Pearson correlation; throws if either input has zero variance.
double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sharpvar

#endif  // SHARPVAR_STATS_HPP
