#ifndef SHARPVAR_DIAGNOSTICS_HPP
#define SHARPVAR_DIAGNOSTICS_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "sharpvar/adjust.hpp"
#include "sharpvar/variance.hpp"

namespace sharpvar {

/// Paired quantiles of the two arm ECDFs on a shared probability grid.
struct QqSeries {
  std::vector<double> probs;      // in (0, 1]
  std::vector<double> q_treated;
  std::vector<double> q_control;
};

/// Default grid: merged probability grid of the two realized arm sizes,
/// excluding 0. With grid_size the probs are i/grid_size for i = 1..grid_size.
QqSeries qq_pairs(const AdjustedSamples& adj,
                  std::optional<std::size_t> grid_size = std::nullopt);

/// Pearson correlation of the ascending-sorted arm residuals. Defined for
/// balanced designs only; throws on unequal arm sizes or a zero-variance arm.
double sorted_residual_correlation(const AdjustedSamples& adj);

/// Sharp bound over each looser estimate (values <= 1); throws when the
/// sharp bound is 0.
std::pair<double, double> bound_ratios(const VarianceReport& report);

}  // namespace sharpvar

#endif  // SHARPVAR_DIAGNOSTICS_HPP
