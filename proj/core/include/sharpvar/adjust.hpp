#ifndef SHARPVAR_ADJUST_HPP
#define SHARPVAR_ADJUST_HPP

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace sharpvar {

/// Observed outcomes, binary treatment, and pre-treatment covariates.
struct ExperimentData {
  std::vector<double> y_obs;
  std::vector<int> z;   // 0/1
  Eigen::MatrixXd x;    // N x k, k may be 0

  /// Throws std::invalid_argument on length mismatch, NaN, non-binary
  /// treatment, or fewer than 2 units in either arm.
  void validate() const;

  std::size_t size() const { return y_obs.size(); }
  std::size_t n_treated() const;
  std::size_t n_control() const;
};

struct LinearModel {
  double intercept = 0.0;
  Eigen::VectorXd coefficients;

  double predict(const Eigen::RowVectorXd& x_row) const {
    return intercept + (coefficients.size() > 0 ? x_row * coefficients : 0.0);
  }
};

enum class EstimatorKind { dim, lin, generic };

/// Arm-wise adjusted outcomes plus the design counts that scale the
/// variance estimators. n_t / n_tbar are the deterministic design counts
/// (pi * N for a Bernoulli design); realized counts are the sample sizes.
struct AdjustedSamples {
  std::vector<double> eps1;
  std::vector<double> eps0;
  double n_t = 0.0;
  double n_tbar = 0.0;
  std::size_t n_total = 0;

  std::size_t realized_n_t() const { return eps1.size(); }
  std::size_t realized_n_tbar() const { return eps0.size(); }
  void validate() const;
};

struct PointEstimate {
  double tau_hat = 0.0;
  EstimatorKind kind = EstimatorKind::dim;
};

/// OLS of y on [1, X]. Throws on rank deficiency (relative singular value
/// below 1e-10) or n < k + 1; exact interpolation at n = k + 1 is allowed.
LinearModel fit_arm_ols(const Eigen::MatrixXd& x, const std::vector<double>& y);

/// Difference-in-means; adjusted samples are the arm-demeaned outcomes.
std::pair<PointEstimate, AdjustedSamples> dim_estimate(const ExperimentData& data);

/// Interacted linear adjustment: arm-wise OLS on covariates centered at the
/// full-sample mean; tau_hat is the difference of fitted intercepts, which
/// equals the treatment coefficient of the one-shot interacted regression.
std::pair<PointEstimate, AdjustedSamples> lin_estimate(const ExperimentData& data);

/// Adjusted estimator with caller-supplied inclusion indicators and outcome
/// predictions (covers decorrelation-style schemes).
std::pair<PointEstimate, AdjustedSamples> generic_adjusted_estimate(
    const ExperimentData& data, const std::vector<int>& t_ind,
    const std::vector<int>& tbar_ind, const std::vector<double>& f1_pred,
    const std::vector<double>& f0_pred, double n_t, double n_tbar);

/// Centered stratum indicators: column j holds 1{C_i = j} - pi_j for strata
/// 1..K-1, so post-stratification reduces to linear adjustment.
Eigen::MatrixXd encode_strata(const std::vector<int>& categories);

}  // namespace sharpvar

#endif  // SHARPVAR_ADJUST_HPP
