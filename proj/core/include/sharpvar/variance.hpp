#ifndef SHARPVAR_VARIANCE_HPP
#define SHARPVAR_VARIANCE_HPP

#include <vector>

#include "sharpvar/adjust.hpp"

namespace sharpvar {

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct SharpBounds {
  double lower = 0.0;       // clamped at 0
  double upper = 0.0;
  double raw_lower = 0.0;   // unclamped, for diagnostics
  double cross_lower = 0.0;
  double cross_upper = 0.0;
};

/// AM-GM (Neyman-style) estimator: A/n_T + B/n_Tbar with the arm mean
/// squares A, B. With df_correct the divisors become n(n-1) per arm.
double conventional_variance(const AdjustedSamples& adj, bool df_correct = false);

/// Replaces the unidentified cross-term by 2 sqrt(A B).
double cauchy_schwarz_variance(const AdjustedSamples& adj);

/// Plug-in bounds with the cross-term evaluated under the extremal
/// couplings of the two arm ECDFs.
SharpBounds sharp_variance_bounds(const AdjustedSamples& adj);

/// Classical two-sample variance estimator for the difference in means,
/// using (n-1)-divisor sample variances.
double neyman_dim_variance(const std::vector<double>& y_treated,
                           const std::vector<double>& y_control);

/// tau_hat +/- z_{1-alpha/2} sqrt(variance).
ConfidenceInterval wald_interval(double tau_hat, double variance, double alpha);

struct VarianceReport {
  double tau_hat = 0.0;
  double v_conventional = 0.0;
  double v_cauchy_schwarz = 0.0;
  double v_sharp_upper = 0.0;
  double v_sharp_lower = 0.0;
  double v_sharp_lower_raw = 0.0;
  double cross_upper = 0.0;
  double cross_lower = 0.0;
  double a_hat = 0.0;  // mean squared adjusted outcome, treated arm
  double b_hat = 0.0;  // control arm
  double alpha = 0.05;
  ConfidenceInterval ci_conventional;
  ConfidenceInterval ci_cauchy_schwarz;
  ConfidenceInterval ci_sharp;
  // each estimate / v_sharp_upper; 1 by convention when everything is 0
  double ratio_conventional = 1.0;
  double ratio_cauchy_schwarz = 1.0;
};

VarianceReport variance_report(const AdjustedSamples& adj, double tau_hat, double alpha,
                               bool df_correct = false);

/// Mean squared adjusted outcome of one arm.
double mean_square(const std::vector<double>& eps);

}  // namespace sharpvar

#endif  // SHARPVAR_VARIANCE_HPP
