#ifndef SHARPVAR_SIMULATE_HPP
#define SHARPVAR_SIMULATE_HPP

#include <cstdint>
#include <vector>

#include "sharpvar/adjust.hpp"

namespace sharpvar {

/// Full potential-outcome table; drawn once per study, only the assignment
/// varies across replications.
struct FinitePopulation {
  std::vector<double> y1;
  std::vector<double> y0;
  Eigen::MatrixXd x;

  std::size_t size() const { return y1.size(); }
};

enum class DesignKind { cre, bre };

struct DesignSpec {
  DesignKind kind = DesignKind::cre;
  std::size_t n1 = 0;   // CRE arm size
  double pi1 = 0.5;     // BRE treatment probability

  void validate(std::size_t n) const;
};

struct DgpParams {
  std::size_t n = 1000;
  double theta = 0.5;          // fraction of units with a non-linear effect
  double alpha0 = 0.0;
  double beta0 = 1.0;
  double effect_level = 10.0;
  double effect_noise_scale = 0.5;
};

/// Control outcome alpha0 + beta0 x + e with standard-normal x and e; with
/// probability theta a unit's treated outcome is replaced by
/// effect_level + effect_noise_scale * e (otherwise Y(1) = Y(0)).
FinitePopulation generate_population(const DgpParams& params, std::uint64_t seed);

/// One treatment assignment: exactly n1 ones for a CRE, independent
/// Bernoulli(pi1) for a BRE.
std::vector<int> draw_assignment(std::size_t n, const DesignSpec& design, std::uint64_t seed);

enum class OracleMode { formula, monte_carlo };

/// True sampling variance of the regression-adjusted estimator over the
/// assignment distribution. Formula mode evaluates the population identity
/// with per-arm OLS coefficients fit on all N units; monte_carlo mode is the
/// empirical variance of the estimate over `reps` assignment draws.
double true_variance_oracle(const FinitePopulation& pop, const DesignSpec& design,
                            EstimatorKind estimator, OracleMode mode, std::size_t reps,
                            std::uint64_t seed);

/// Population cross-term (2/N) sum eps(1) eps(0) under per-arm population OLS
/// (intercept-only when `estimator` is dim).
double oracle_cross_term(const FinitePopulation& pop, EstimatorKind estimator);

struct BiasSummary {
  double mean_conventional = 0.0;
  double mean_cauchy_schwarz = 0.0;
  double mean_sharp = 0.0;
  double true_variance = 0.0;
  double bias_conventional = 0.0;
  double bias_cauchy_schwarz = 0.0;
  double bias_sharp = 0.0;
  // standard errors of the estimate means
  double se_conventional = 0.0;
  double se_cauchy_schwarz = 0.0;
  double se_sharp = 0.0;
  double mc_se_true_variance = 0.0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  std::size_t redraws = 0;  // BRE draws rejected for a degenerate arm
};

/// Mean variance estimates over `reps` assignment draws versus a
/// Monte Carlo truth computed on an independent 10x draw budget.
BiasSummary monte_carlo_bias(const FinitePopulation& pop, const DesignSpec& design,
                             EstimatorKind estimator, std::size_t reps, std::uint64_t seed);

struct CrossTermPoint {
  double theta = 0.0;
  double mean_conventional = 0.0;   // A + B, the AM-GM stand-in for the cross-term
  double mean_cauchy_schwarz = 0.0; // 2 sqrt(A B)
  double mean_sharp = 0.0;          // 2 * comonotone cross-moment
  double oracle = 0.0;              // (2/N) sum eps(1) eps(0), full table
  double se_conventional = 0.0;
  double se_cauchy_schwarz = 0.0;
  double se_sharp = 0.0;
  // paired standard errors for the differences between estimates
  double se_sharp_minus_cs = 0.0;
  double se_sharp_minus_conv = 0.0;
  double se_cs_minus_conv = 0.0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
};

struct CrossTermCurve {
  std::vector<CrossTermPoint> points;
};

/// Per theta: one population, `reps` assignment draws, cross-term estimates
/// averaged under the lin estimator. Streams are derived per grid point, so
/// results do not depend on grid order.
CrossTermCurve theta_sweep(const std::vector<double>& theta_grid, const DgpParams& base,
                           const DesignSpec& design, std::size_t reps, std::uint64_t seed);

/// Observed-data view of a population under one assignment.
ExperimentData observe(const FinitePopulation& pop, const std::vector<int>& z);

}  // namespace sharpvar

#endif  // SHARPVAR_SIMULATE_HPP
