#include "sharpvar/diagnostics.hpp"

#include <algorithm>
#include <stdexcept>

#include "sharpvar/empirical.hpp"
#include "sharpvar/stats.hpp"

namespace sharpvar {

QqSeries qq_pairs(const AdjustedSamples& adj, std::optional<std::size_t> grid_size) {
  adj.validate();
  const Ecdf g = Ecdf::from_sample(adj.eps1);
  const Ecdf f = Ecdf::from_sample(adj.eps0);

  QqSeries out;
  if (grid_size.has_value()) {
    if (*grid_size == 0) {
      throw std::invalid_argument("qq_pairs: grid_size must be positive");
    }
    for (std::size_t i = 1; i <= *grid_size; ++i) {
      out.probs.push_back(static_cast<double>(i) / static_cast<double>(*grid_size));
    }
  } else {
    const ProbabilityGrid grid =
        merged_probability_grid(adj.realized_n_t(), adj.realized_n_tbar());
    for (std::size_t i = 1; i < grid.breakpoints.size(); ++i) {
      out.probs.push_back(grid.breakpoints[i].value());
    }
  }
  for (double p : out.probs) {
    out.q_treated.push_back(g.quantile(p));
    out.q_control.push_back(f.quantile(p));
  }
  return out;
}

double sorted_residual_correlation(const AdjustedSamples& adj) {
  adj.validate();
  if (adj.realized_n_t() != adj.realized_n_tbar()) {
    throw std::invalid_argument(
        "sorted_residual_correlation: defined for balanced designs only");
  }
  std::vector<double> a = adj.eps1;
  std::vector<double> b = adj.eps0;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return pearson_correlation(a, b);
}

std::pair<double, double> bound_ratios(const VarianceReport& report) {
  if (report.v_sharp_upper <= 0.0) {
    throw std::domain_error("bound_ratios: sharp upper bound is zero");
  }
  return {report.v_sharp_upper / report.v_conventional,
          report.v_sharp_upper / report.v_cauchy_schwarz};
}

}  // namespace sharpvar
