#include "sharpvar/adjust.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "sharpvar/stats.hpp"

namespace sharpvar {

void ExperimentData::validate() const {
  const std::size_t n = y_obs.size();
  if (z.size() != n || (x.size() > 0 && static_cast<std::size_t>(x.rows()) != n)) {
    throw std::invalid_argument("ExperimentData: length mismatch");
  }
  std::size_t n1 = 0, n0 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(y_obs[i])) {
      throw std::invalid_argument("ExperimentData: NaN outcome");
    }
    if (z[i] == 1) {
      ++n1;
    } else if (z[i] == 0) {
      ++n0;
    } else {
      throw std::invalid_argument("ExperimentData: treatment must be 0 or 1");
    }
  }
  if (x.size() > 0 && !x.allFinite()) {
    throw std::invalid_argument("ExperimentData: non-finite covariate");
  }
  if (n1 < 2 || n0 < 2) {
    throw std::invalid_argument("ExperimentData: need at least 2 units per arm");
  }
}

std::size_t ExperimentData::n_treated() const {
  return static_cast<std::size_t>(std::count(z.begin(), z.end(), 1));
}

std::size_t ExperimentData::n_control() const {
  return static_cast<std::size_t>(std::count(z.begin(), z.end(), 0));
}

void AdjustedSamples::validate() const {
  if (eps1.empty() || eps0.empty()) {
    throw std::invalid_argument("AdjustedSamples: empty arm");
  }
  if (n_t <= 0.0 || n_tbar <= 0.0 || n_total < 2) {
    throw std::invalid_argument("AdjustedSamples: invalid design counts");
  }
}

LinearModel fit_arm_ols(const Eigen::MatrixXd& x, const std::vector<double>& y) {
  const auto n = static_cast<Eigen::Index>(y.size());
  const Eigen::Index k = x.size() > 0 ? x.cols() : 0;
  if (k > 0 && x.rows() != n) {
    throw std::invalid_argument("fit_arm_ols: row count mismatch");
  }
  if (n < k + 1) {
    throw std::invalid_argument("fit_arm_ols: need n >= k + 1 observations");
  }

  Eigen::VectorXd yv(n);
  for (Eigen::Index i = 0; i < n; ++i) yv(i) = y[static_cast<std::size_t>(i)];

  LinearModel model;
  if (k == 0) {
    model.intercept = yv.mean();
    model.coefficients = Eigen::VectorXd(0);
    return model;
  }

  Eigen::MatrixXd design(n, k + 1);
  design.col(0).setOnes();
  design.rightCols(k) = x;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-10 * sv(0)) {
    throw std::invalid_argument("fit_arm_ols: design matrix is rank deficient");
  }
  const Eigen::VectorXd beta = svd.solve(yv);
  model.intercept = beta(0);
  model.coefficients = beta.tail(k);
  return model;
}

std::pair<PointEstimate, AdjustedSamples> dim_estimate(const ExperimentData& data) {
  data.validate();
  std::vector<double> y1, y0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    (data.z[i] == 1 ? y1 : y0).push_back(data.y_obs[i]);
  }
  const double m1 = sample_mean(y1);
  const double m0 = sample_mean(y0);

  AdjustedSamples adj;
  adj.eps1 = y1;
  adj.eps0 = y0;
  for (double& v : adj.eps1) v -= m1;
  for (double& v : adj.eps0) v -= m0;
  adj.n_t = static_cast<double>(y1.size());
  adj.n_tbar = static_cast<double>(y0.size());
  adj.n_total = data.size();

  return {PointEstimate{m1 - m0, EstimatorKind::dim}, std::move(adj)};
}

std::pair<PointEstimate, AdjustedSamples> lin_estimate(const ExperimentData& data) {
  data.validate();
  const Eigen::Index k = data.x.size() > 0 ? data.x.cols() : 0;
  if (k == 0) {
    return dim_estimate(data);
  }
  const auto n = static_cast<Eigen::Index>(data.size());

  // center covariates at the full-sample mean
  const Eigen::RowVectorXd xbar = data.x.colwise().mean();
  Eigen::MatrixXd xc = data.x.rowwise() - xbar;

  std::vector<Eigen::Index> idx1, idx0;
  for (Eigen::Index i = 0; i < n; ++i) {
    (data.z[static_cast<std::size_t>(i)] == 1 ? idx1 : idx0).push_back(i);
  }

  auto fit_arm = [&](const std::vector<Eigen::Index>& idx) {
    Eigen::MatrixXd xa(static_cast<Eigen::Index>(idx.size()), k);
    std::vector<double> ya(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) {
      xa.row(static_cast<Eigen::Index>(j)) = xc.row(idx[j]);
      ya[j] = data.y_obs[static_cast<std::size_t>(idx[j])];
    }
    LinearModel m = fit_arm_ols(xa, ya);
    std::vector<double> resid(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) {
      resid[j] = ya[j] - m.predict(xa.row(static_cast<Eigen::Index>(j)));
    }
    return std::make_pair(m, resid);
  };

  auto [m1, eps1] = fit_arm(idx1);
  auto [m0, eps0] = fit_arm(idx0);

  AdjustedSamples adj;
  adj.eps1 = std::move(eps1);
  adj.eps0 = std::move(eps0);
  adj.n_t = static_cast<double>(idx1.size());
  adj.n_tbar = static_cast<double>(idx0.size());
  adj.n_total = data.size();

  return {PointEstimate{m1.intercept - m0.intercept, EstimatorKind::lin}, std::move(adj)};
}

std::pair<PointEstimate, AdjustedSamples> generic_adjusted_estimate(
    const ExperimentData& data, const std::vector<int>& t_ind,
    const std::vector<int>& tbar_ind, const std::vector<double>& f1_pred,
    const std::vector<double>& f0_pred, double n_t, double n_tbar) {
  const std::size_t n = data.size();
  if (t_ind.size() != n || tbar_ind.size() != n || f1_pred.size() != n || f0_pred.size() != n) {
    throw std::invalid_argument("generic_adjusted_estimate: length mismatch");
  }
  if (n_t <= 0.0 || n_tbar <= 0.0) {
    throw std::invalid_argument("generic_adjusted_estimate: design counts must be positive");
  }

  AdjustedSamples adj;
  double sum1 = 0.0, sum0 = 0.0, sum_pred = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // only observed potential outcomes may be selected
    if (t_ind[i] > data.z[i] || tbar_ind[i] > 1 - data.z[i]) {
      throw std::invalid_argument(
          "generic_adjusted_estimate: indicator selects an unobserved potential outcome");
    }
    if (t_ind[i] == 1) {
      const double e = data.y_obs[i] - f1_pred[i];
      adj.eps1.push_back(e);
      sum1 += e;
    }
    if (tbar_ind[i] == 1) {
      const double e = data.y_obs[i] - f0_pred[i];
      adj.eps0.push_back(e);
      sum0 += e;
    }
    sum_pred += f1_pred[i] - f0_pred[i];
  }
  if (adj.eps1.empty() || adj.eps0.empty()) {
    throw std::invalid_argument("generic_adjusted_estimate: empty selection");
  }

  const double tau =
      sum1 / n_t - sum0 / n_tbar + sum_pred / static_cast<double>(n);
  adj.n_t = n_t;
  adj.n_tbar = n_tbar;
  adj.n_total = n;

  return {PointEstimate{tau, EstimatorKind::generic}, std::move(adj)};
}

Eigen::MatrixXd encode_strata(const std::vector<int>& categories) {
  if (categories.empty()) {
    throw std::invalid_argument("encode_strata: empty input");
  }
  std::map<int, std::size_t> counts;
  for (int c : categories) ++counts[c];
  const std::size_t n_strata = counts.size();
  if (n_strata < 2) {
    throw std::invalid_argument("encode_strata: need at least 2 strata");
  }

  // strata ordered by label; the last one is the omitted reference
  std::vector<int> labels;
  for (const auto& [label, count] : counts) labels.push_back(label);

  const auto n = static_cast<Eigen::Index>(categories.size());
  Eigen::MatrixXd out(n, static_cast<Eigen::Index>(n_strata - 1));
  for (std::size_t j = 0; j + 1 < n_strata; ++j) {
    const double pi_j =
        static_cast<double>(counts[labels[j]]) / static_cast<double>(categories.size());
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ind = categories[static_cast<std::size_t>(i)] == labels[j] ? 1.0 : 0.0;
      out(i, static_cast<Eigen::Index>(j)) = ind - pi_j;
    }
  }
  return out;
}

}  // namespace sharpvar
