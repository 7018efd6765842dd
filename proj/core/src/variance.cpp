#include "sharpvar/variance.hpp"

#include <cmath>
#include <stdexcept>

#include "sharpvar/empirical.hpp"
#include "sharpvar/stats.hpp"

namespace sharpvar {

double mean_square(const std::vector<double>& eps) {
  if (eps.empty()) {
    throw std::invalid_argument("mean_square: empty sample");
  }
  double s = 0.0;
  for (double v : eps) s += v * v;
  return s / static_cast<double>(eps.size());
}

double conventional_variance(const AdjustedSamples& adj, bool df_correct) {
  adj.validate();
  if (!df_correct) {
    return mean_square(adj.eps1) / adj.n_t + mean_square(adj.eps0) / adj.n_tbar;
  }
  const auto n1 = static_cast<double>(adj.realized_n_t());
  const auto n0 = static_cast<double>(adj.realized_n_tbar());
  if (n1 < 2 || n0 < 2) {
    throw std::invalid_argument("conventional_variance: df correction needs >= 2 per arm");
  }
  double ss1 = 0.0, ss0 = 0.0;
  for (double v : adj.eps1) ss1 += v * v;
  for (double v : adj.eps0) ss0 += v * v;
  return ss1 / (n1 * (n1 - 1.0)) + ss0 / (n0 * (n0 - 1.0));
}

double cauchy_schwarz_variance(const AdjustedSamples& adj) {
  adj.validate();
  const double a = mean_square(adj.eps1);
  const double b = mean_square(adj.eps0);
  const auto n = static_cast<double>(adj.n_total);
  return ((n - adj.n_t) / adj.n_t * a + (n - adj.n_tbar) / adj.n_tbar * b +
          2.0 * std::sqrt(a * b)) /
         n;
}

SharpBounds sharp_variance_bounds(const AdjustedSamples& adj) {
  adj.validate();
  const double a = mean_square(adj.eps1);
  const double b = mean_square(adj.eps0);
  const auto n = static_cast<double>(adj.n_total);
  const double identified =
      (n - adj.n_t) / adj.n_t * a + (n - adj.n_tbar) / adj.n_tbar * b;

  const Ecdf g = Ecdf::from_sample(adj.eps1);
  const Ecdf f = Ecdf::from_sample(adj.eps0);

  SharpBounds out;
  out.cross_upper = comonotone_cross_moment(g, f);
  out.cross_lower = countermonotone_cross_moment(g, f);
  out.upper = (identified + 2.0 * out.cross_upper) / n;
  out.raw_lower = (identified + 2.0 * out.cross_lower) / n;
  out.lower = std::max(0.0, out.raw_lower);
  return out;
}

double neyman_dim_variance(const std::vector<double>& y_treated,
                           const std::vector<double>& y_control) {
  if (y_treated.size() < 2 || y_control.size() < 2) {
    throw std::invalid_argument("neyman_dim_variance: need at least 2 per arm");
  }
  return sample_variance(y_treated) / static_cast<double>(y_treated.size()) +
         sample_variance(y_control) / static_cast<double>(y_control.size());
}

ConfidenceInterval wald_interval(double tau_hat, double variance, double alpha) {
  if (variance < 0.0) {
    throw std::invalid_argument("wald_interval: negative variance");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("wald_interval: alpha must lie in (0, 1)");
  }
  const double z = normal_quantile(1.0 - alpha / 2.0);
  const double half = z * std::sqrt(variance);
  return {tau_hat - half, tau_hat + half};
}

VarianceReport variance_report(const AdjustedSamples& adj, double tau_hat, double alpha,
                               bool df_correct) {
  VarianceReport r;
  r.tau_hat = tau_hat;
  r.alpha = alpha;
  r.a_hat = mean_square(adj.eps1);
  r.b_hat = mean_square(adj.eps0);
  r.v_conventional = conventional_variance(adj, df_correct);
  r.v_cauchy_schwarz = cauchy_schwarz_variance(adj);
  const SharpBounds sb = sharp_variance_bounds(adj);
  r.v_sharp_upper = sb.upper;
  r.v_sharp_lower = sb.lower;
  r.v_sharp_lower_raw = sb.raw_lower;
  r.cross_upper = sb.cross_upper;
  r.cross_lower = sb.cross_lower;
  r.ci_conventional = wald_interval(tau_hat, r.v_conventional, alpha);
  r.ci_cauchy_schwarz = wald_interval(tau_hat, r.v_cauchy_schwarz, alpha);
  r.ci_sharp = wald_interval(tau_hat, r.v_sharp_upper, alpha);
  if (r.v_sharp_upper > 0.0) {
    r.ratio_conventional = r.v_conventional / r.v_sharp_upper;
    r.ratio_cauchy_schwarz = r.v_cauchy_schwarz / r.v_sharp_upper;
  }
  return r;
}

}  // namespace sharpvar
