#include "sharpvar/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "sharpvar/empirical.hpp"
#include "sharpvar/rng.hpp"
#include "sharpvar/stats.hpp"
#include "sharpvar/variance.hpp"

namespace sharpvar {

void DesignSpec::validate(std::size_t n) const {
  if (kind == DesignKind::cre) {
    if (n1 < 2 || n1 + 2 > n) {
      throw std::invalid_argument("DesignSpec: CRE needs 2 <= n1 <= N - 2");
    }
  } else {
    if (!(pi1 > 0.0 && pi1 < 1.0)) {
      throw std::invalid_argument("DesignSpec: BRE needs pi1 in (0, 1)");
    }
  }
}

namespace {

void validate_params(const DgpParams& p) {
  if (!(p.theta >= 0.0 && p.theta <= 1.0)) {
    throw std::invalid_argument("DgpParams: theta must lie in [0, 1]");
  }
  if (p.n < 8) {
    throw std::invalid_argument("DgpParams: N must be at least 8");
  }
}

}  // namespace

FinitePopulation generate_population(const DgpParams& params, std::uint64_t seed) {
  validate_params(params);
  Rng rng(seed);
  const std::size_t n = params.n;

  FinitePopulation pop;
  pop.y1.resize(n);
  pop.y0.resize(n);
  pop.x.resize(static_cast<Eigen::Index>(n), 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.normal();
    const double e = rng.normal();
    const bool shifted = rng.bernoulli(params.theta);
    pop.x(static_cast<Eigen::Index>(i), 0) = x;
    pop.y0[i] = params.alpha0 + params.beta0 * x + e;
    pop.y1[i] = shifted ? params.effect_level + params.effect_noise_scale * e : pop.y0[i];
  }
  return pop;
}

std::vector<int> draw_assignment(std::size_t n, const DesignSpec& design, std::uint64_t seed) {
  design.validate(n);
  Rng rng(seed);
  if (design.kind == DesignKind::cre) {
    return rng.sample_without_replacement(n, design.n1);
  }
  std::vector<int> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = rng.bernoulli(design.pi1) ? 1 : 0;
  return z;
}

ExperimentData observe(const FinitePopulation& pop, const std::vector<int>& z) {
  ExperimentData data;
  data.z = z;
  data.y_obs.resize(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) {
    data.y_obs[i] = z[i] == 1 ? pop.y1[i] : pop.y0[i];
  }
  data.x = pop.x;
  return data;
}

namespace {

// Redraws until both arms have at least 2 units; only BRE draws can fail.
std::vector<int> draw_valid_assignment(std::size_t n, const DesignSpec& design,
                                       std::uint64_t seed, std::size_t* redraws) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::vector<int> z = draw_assignment(n, design, derive_seed(seed, attempt));
    std::size_t n1 = 0;
    for (int v : z) n1 += static_cast<std::size_t>(v);
    if (n1 >= 2 && n - n1 >= 2) return z;
    if (redraws != nullptr) ++(*redraws);
  }
}

// Design counts for the variance scale factors: realized arm sizes for a
// CRE, pi * N for a BRE.
void apply_design_counts(AdjustedSamples& adj, const DesignSpec& design, std::size_t n) {
  if (design.kind == DesignKind::bre) {
    adj.n_t = design.pi1 * static_cast<double>(n);
    adj.n_tbar = (1.0 - design.pi1) * static_cast<double>(n);
  }
}

std::pair<PointEstimate, AdjustedSamples> run_estimator(const ExperimentData& data,
                                                        EstimatorKind estimator) {
  switch (estimator) {
    case EstimatorKind::dim:
      return dim_estimate(data);
    case EstimatorKind::lin:
      return lin_estimate(data);
    default:
      throw std::invalid_argument("simulate: estimator must be dim or lin");
  }
}

// Population-level adjusted potential outcomes under per-arm OLS fit on all
// N units (intercept-only for dim).
std::pair<std::vector<double>, std::vector<double>> population_residuals(
    const FinitePopulation& pop, EstimatorKind estimator) {
  const std::size_t n = pop.size();
  std::vector<double> eps1(n), eps0(n);
  if (estimator == EstimatorKind::dim) {
    const double m1 = sample_mean(pop.y1);
    const double m0 = sample_mean(pop.y0);
    for (std::size_t i = 0; i < n; ++i) {
      eps1[i] = pop.y1[i] - m1;
      eps0[i] = pop.y0[i] - m0;
    }
    return {eps1, eps0};
  }
  const Eigen::RowVectorXd xbar = pop.x.colwise().mean();
  const Eigen::MatrixXd xc = pop.x.rowwise() - xbar;
  const LinearModel m1 = fit_arm_ols(xc, pop.y1);
  const LinearModel m0 = fit_arm_ols(xc, pop.y0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    eps1[i] = pop.y1[i] - m1.predict(xc.row(r));
    eps0[i] = pop.y0[i] - m0.predict(xc.row(r));
  }
  return {eps1, eps0};
}

}  // namespace

double oracle_cross_term(const FinitePopulation& pop, EstimatorKind estimator) {
  const auto [eps1, eps0] = population_residuals(pop, estimator);
  double c = 0.0;
  for (std::size_t i = 0; i < pop.size(); ++i) c += eps1[i] * eps0[i];
  return 2.0 * c / static_cast<double>(pop.size());
}

double true_variance_oracle(const FinitePopulation& pop, const DesignSpec& design,
                            EstimatorKind estimator, OracleMode mode, std::size_t reps,
                            std::uint64_t seed) {
  const std::size_t n = pop.size();
  design.validate(n);

  if (mode == OracleMode::formula) {
    const auto [eps1, eps0] = population_residuals(pop, estimator);
    double m1 = 0.0, m0 = 0.0, c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      m1 += eps1[i] * eps1[i];
      m0 += eps0[i] * eps0[i];
      c += eps1[i] * eps0[i];
    }
    const auto dn = static_cast<double>(n);
    m1 /= dn;
    m0 /= dn;
    c /= dn;
    double n_t, n_tbar;
    if (design.kind == DesignKind::cre) {
      n_t = static_cast<double>(design.n1);
      n_tbar = dn - n_t;
    } else {
      n_t = design.pi1 * dn;
      n_tbar = dn - n_t;
    }
    return ((dn - n_t) / n_t * m1 + (dn - n_tbar) / n_tbar * m0 + 2.0 * c) / dn;
  }

  if (reps < 2) {
    throw std::invalid_argument("true_variance_oracle: monte_carlo mode needs reps >= 2");
  }
  std::vector<double> taus(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    const std::vector<int> z = draw_valid_assignment(n, design, derive_seed(seed, r), nullptr);
    taus[r] = run_estimator(observe(pop, z), estimator).first.tau_hat;
  }
  return sample_variance(taus);
}

BiasSummary monte_carlo_bias(const FinitePopulation& pop, const DesignSpec& design,
                             EstimatorKind estimator, std::size_t reps, std::uint64_t seed) {
  if (reps < 100) {
    throw std::invalid_argument("monte_carlo_bias: reps must be at least 100");
  }
  const std::size_t n = pop.size();
  design.validate(n);

  std::vector<double> conv(reps), cs(reps), sharp(reps);
  std::size_t redraws = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    const std::vector<int> z =
        draw_valid_assignment(n, design, derive_seed(seed, r), &redraws);
    auto [est, adj] = run_estimator(observe(pop, z), estimator);
    apply_design_counts(adj, design, n);
    conv[r] = conventional_variance(adj, false);
    cs[r] = cauchy_schwarz_variance(adj);
    sharp[r] = sharp_variance_bounds(adj).upper;
  }

  // independent truth with a 10x draw budget
  const std::size_t truth_reps = 10 * reps;
  std::vector<double> taus(truth_reps);
  const std::uint64_t truth_seed = derive_seed(seed, 0x7472757468ULL);
  for (std::size_t r = 0; r < truth_reps; ++r) {
    const std::vector<int> z =
        draw_valid_assignment(n, design, derive_seed(truth_seed, r), nullptr);
    taus[r] = run_estimator(observe(pop, z), estimator).first.tau_hat;
  }
  const double truth = sample_variance(taus);

  // MC error of a sample variance: Var(S^2) = (mu4 - sigma^4 (R-3)/(R-1)) / R
  const double tau_mean = sample_mean(taus);
  double mu4 = 0.0;
  for (double t : taus) {
    const double d = t - tau_mean;
    mu4 += d * d * d * d;
  }
  mu4 /= static_cast<double>(truth_reps);
  const auto big_r = static_cast<double>(truth_reps);
  const double var_s2 =
      (mu4 - truth * truth * (big_r - 3.0) / (big_r - 1.0)) / big_r;

  auto se_of_mean = [reps](const std::vector<double>& x) {
    return std::sqrt(sample_variance(x) / static_cast<double>(reps));
  };

  BiasSummary out;
  out.mean_conventional = sample_mean(conv);
  out.mean_cauchy_schwarz = sample_mean(cs);
  out.mean_sharp = sample_mean(sharp);
  out.true_variance = truth;
  out.bias_conventional = out.mean_conventional - truth;
  out.bias_cauchy_schwarz = out.mean_cauchy_schwarz - truth;
  out.bias_sharp = out.mean_sharp - truth;
  out.se_conventional = se_of_mean(conv);
  out.se_cauchy_schwarz = se_of_mean(cs);
  out.se_sharp = se_of_mean(sharp);
  out.mc_se_true_variance = std::sqrt(std::max(0.0, var_s2));
  out.reps = reps;
  out.seed = seed;
  out.redraws = redraws;
  return out;
}

CrossTermCurve theta_sweep(const std::vector<double>& theta_grid, const DgpParams& base,
                           const DesignSpec& design, std::size_t reps, std::uint64_t seed) {
  if (theta_grid.empty()) {
    throw std::invalid_argument("theta_sweep: empty grid");
  }
  for (double t : theta_grid) {
    if (!(t >= 0.0 && t <= 1.0)) {
      throw std::invalid_argument("theta_sweep: theta values must lie in [0, 1]");
    }
  }
  if (reps < 2) {
    throw std::invalid_argument("theta_sweep: reps must be at least 2");
  }

  CrossTermCurve curve;
  for (std::size_t t = 0; t < theta_grid.size(); ++t) {
    DgpParams params = base;
    params.theta = theta_grid[t];
    const std::uint64_t point_seed = derive_seed(seed, t);
    const FinitePopulation pop = generate_population(params, derive_seed(point_seed, 0));

    std::vector<double> conv(reps), cs(reps), sharp(reps);
    for (std::size_t r = 0; r < reps; ++r) {
      const std::vector<int> z =
          draw_valid_assignment(pop.size(), design, derive_seed(point_seed, r + 1), nullptr);
      auto [est, adj] = lin_estimate(observe(pop, z));
      apply_design_counts(adj, design, pop.size());
      const double a = mean_square(adj.eps1);
      const double b = mean_square(adj.eps0);
      conv[r] = a + b;
      cs[r] = 2.0 * std::sqrt(a * b);
      sharp[r] = 2.0 * comonotone_cross_moment(Ecdf::from_sample(adj.eps1),
                                               Ecdf::from_sample(adj.eps0));
    }

    auto se_of_mean = [reps](const std::vector<double>& x) {
      return std::sqrt(sample_variance(x) / static_cast<double>(reps));
    };
    auto paired_se = [reps, &se_of_mean](const std::vector<double>& x,
                                         const std::vector<double>& y) {
      std::vector<double> d(reps);
      for (std::size_t r = 0; r < reps; ++r) d[r] = x[r] - y[r];
      return se_of_mean(d);
    };

    CrossTermPoint pt;
    pt.theta = theta_grid[t];
    pt.mean_conventional = sample_mean(conv);
    pt.mean_cauchy_schwarz = sample_mean(cs);
    pt.mean_sharp = sample_mean(sharp);
    pt.oracle = oracle_cross_term(pop, EstimatorKind::lin);
    pt.se_conventional = se_of_mean(conv);
    pt.se_cauchy_schwarz = se_of_mean(cs);
    pt.se_sharp = se_of_mean(sharp);
    pt.se_sharp_minus_cs = paired_se(sharp, cs);
    pt.se_sharp_minus_conv = paired_se(sharp, conv);
    pt.se_cs_minus_conv = paired_se(cs, conv);
    pt.reps = reps;
    pt.seed = point_seed;
    curve.points.push_back(pt);
  }
  return curve;
}

}  // namespace sharpvar
