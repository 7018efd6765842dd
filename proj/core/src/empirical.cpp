#include "sharpvar/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sharpvar {

ProbabilityGrid merged_probability_grid(std::size_t n_a, std::size_t n_b) {
  if (n_a == 0 || n_b == 0) {
    throw std::invalid_argument("merged_probability_grid: counts must be positive");
  }
  std::vector<Rational> pts;
  pts.reserve(n_a + n_b + 2);
  for (std::size_t i = 0; i <= n_a; ++i) {
    pts.push_back({static_cast<std::int64_t>(i), static_cast<std::int64_t>(n_a)});
  }
  for (std::size_t j = 0; j <= n_b; ++j) {
    pts.push_back({static_cast<std::int64_t>(j), static_cast<std::int64_t>(n_b)});
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return ProbabilityGrid{std::move(pts)};
}

namespace {

void check_values(const std::vector<double>& values) {
  if (values.empty()) {
    throw std::invalid_argument("Ecdf: empty sample");
  }
  for (double v : values) {
    if (std::isnan(v)) {
      throw std::invalid_argument("Ecdf: NaN value in sample");
    }
  }
}

}  // namespace

Ecdf Ecdf::from_sample(std::vector<double> values) {
  check_values(values);
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();

  Ecdf e;
  e.sorted_sample_ = values;
  // merge duplicates into atoms with integer counts
  std::size_t i = 0;
  std::int64_t cum_count = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && values[j] == values[i]) ++j;
    cum_count += static_cast<std::int64_t>(j - i);
    e.values_.push_back(values[i]);
    e.weights_.push_back(static_cast<double>(j - i) / static_cast<double>(n));
    e.cum_.push_back(static_cast<double>(cum_count) / static_cast<double>(n));
    i = j;
  }
  e.cum_.back() = 1.0;
  return e;
}

Ecdf Ecdf::from_sample(std::vector<double> values, std::vector<double> weights) {
  check_values(values);
  if (weights.size() != values.size()) {
    throw std::invalid_argument("Ecdf: weights length must match values");
  }
  double total = 0.0;
  for (double w : weights) {
    if (std::isnan(w) || w <= 0.0) {
      throw std::invalid_argument("Ecdf: weights must be positive");
    }
    total += w;
  }

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  Ecdf e;
  double cum = 0.0;
  for (std::size_t idx : order) {
    if (!e.values_.empty() && e.values_.back() == values[idx]) {
      e.weights_.back() += weights[idx] / total;
    } else {
      e.values_.push_back(values[idx]);
      e.weights_.push_back(weights[idx] / total);
    }
  }
  for (std::size_t k = 0; k < e.weights_.size(); ++k) {
    cum += e.weights_[k];
    e.cum_.push_back(cum);
  }
  e.cum_.back() = 1.0;
  return e;
}

double Ecdf::quantile(double u) const {
  if (std::isnan(u) || u <= 0.0 || u > 1.0) {
    throw std::domain_error("Ecdf::quantile: u must lie in (0, 1]");
  }
  auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
  if (it == cum_.end()) --it;  // float slack at the top
  return values_[static_cast<std::size_t>(it - cum_.begin())];
}

double Ecdf::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) m += weights_[k] * values_[k];
  return m;
}

double Ecdf::second_moment() const {
  double m = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) m += weights_[k] * values_[k] * values_[k];
  return m;
}

namespace {

// ceil(n * num/den) for num >= 0, den > 0
std::int64_t ceil_index(std::int64_t n, const Rational& p) {
  const __int128 t = static_cast<__int128>(n) * p.num;
  return static_cast<std::int64_t>((t + p.den - 1) / p.den);
}

// Grid sum over the exact rational merged grid; `reverse_b` pairs the
// b-quantiles in descending order (the countermonotone coupling).
double uniform_grid_cross_moment(const std::vector<double>& a, const std::vector<double>& b,
                                 bool reverse_b) {
  const auto n_a = static_cast<std::int64_t>(a.size());
  const auto n_b = static_cast<std::int64_t>(b.size());
  const ProbabilityGrid grid = merged_probability_grid(a.size(), b.size());
  const auto& p = grid.breakpoints;
  const std::size_t big_p = p.size() - 1;  // cells 1..P

  double sum = 0.0;
  for (std::size_t i = 1; i <= big_p; ++i) {
    const double cell = p[i].value() - p[i - 1].value();
    const std::int64_t ia = ceil_index(n_a, p[i]);
    const std::int64_t ib = ceil_index(n_b, reverse_b ? p[big_p + 1 - i] : p[i]);
    sum += cell * a[static_cast<std::size_t>(ia - 1)] * b[static_cast<std::size_t>(ib - 1)];
  }
  return sum;
}

// Integral of the product of quantile functions over the union of
// cumulative-weight breakpoints; both inverses are constant on each cell.
double weighted_cross_moment(const Ecdf& a, const Ecdf& b) {
  const auto& ca = a.cumulative_weights();
  const auto& cb = b.cumulative_weights();
  std::size_t ia = 0, ib = 0;
  double prev = 0.0, sum = 0.0;
  while (ia < ca.size() && ib < cb.size()) {
    const double u = std::min(ca[ia], cb[ib]);
    sum += (u - prev) * a.values()[ia] * b.values()[ib];
    prev = u;
    if (ca[ia] == u) ++ia;
    if (cb[ib] == u) ++ib;
  }
  return sum;
}

Ecdf negated(const Ecdf& e) {
  std::vector<double> vals(e.values().size());
  for (std::size_t k = 0; k < vals.size(); ++k) vals[k] = -e.values()[k];
  return Ecdf::from_sample(std::move(vals), e.weights());
}

}  // namespace

double comonotone_cross_moment(const Ecdf& a, const Ecdf& b) {
  if (a.uniform() && b.uniform()) {
    return uniform_grid_cross_moment(a.sorted_sample(), b.sorted_sample(), false);
  }
  return weighted_cross_moment(a, b);
}

double countermonotone_cross_moment(const Ecdf& a, const Ecdf& b) {
  if (a.uniform() && b.uniform()) {
    return uniform_grid_cross_moment(a.sorted_sample(), b.sorted_sample(), true);
  }
  // F_{-X}^{-1}(u) = -F_X^{-1}(1-u) a.e., so the countermonotone integral is
  // the negated comonotone integral against the mirrored distribution.
  return -weighted_cross_moment(a, negated(b));
}

}  // namespace sharpvar
