#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "finquant/dist.hpp"
#include "finquant/levy.hpp"
#include "finquant/metric.hpp"
#include "finquant/numeric.hpp"
#include "finquant/result.hpp"

namespace finquant::kolmogorov {

// Best weights for fixed positions: half the largest gap of F between atoms.
inline ApproxResult best_given_positions(const Dist& mu, const std::vector<double>& x) {
  finquant::detail::check_positions(mu, x);
  const std::size_t n = x.size();
  double K = std::max(mu.cdf_left(x.front()), 1.0 - mu.cdf(x.back()));
  for (std::size_t j = 0; j + 1 < n; ++j)
    K = std::max(K, 0.5 * (mu.cdf_left(x[j + 1]) - mu.cdf(x[j])));

  ApproxResult res;
  std::vector<double> cuts;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double lo = mu.cdf_left(x[j + 1]), hi = mu.cdf(x[j]);
    cuts.push_back(numeric::clamp01(0.5 * (hi + lo)));
    res.certificate.cut_boxes.push_back(finquant::detail::clamp_box({lo - K, hi + K}, 0.0, 1.0));
  }
  res.measure = FiniteMeasure::from_cuts(x, finquant::detail::sorted_points(cuts));
  const auto& P = res.measure.P();
  for (std::size_t j = 0; j <= n; ++j) {
    const bool open = j == 0 || j == n || x[j - 1] < x[j];
    if (!open) continue;
    const double upper = j == n ? 1.0 : mu.cdf_left(x[j]);
    const double lower = j == 0 ? 0.0 : mu.cdf(x[j - 1]);
    res.certificate.slacks.push_back(std::max(upper - K - P[j], P[j] - lower - K));
  }
  res.distance = K;
  res.certificate.mode = Mode::PositionsGiven;
  res.certificate.value = K;
  res.certificate.distinct_positions = res.measure.distinct_positions();
  res.certificate.reduced_n = n;
  res.diagnostics.residual = std::abs(kolmogorov_distance(mu, res.measure) - K);
  res.diagnostics.method = "closed form";
  return res;
}

namespace detail {

inline void weight_slacks(const Dist& mu, ApproxResult& res, double K) {
  const auto& x = res.measure.x();
  const auto& P = res.measure.P();
  const Interval s = mu.support();
  for (std::size_t j = 0; j < x.size(); ++j) {
    const Box b{mu.quantile_left(P[j + 1] - K), mu.quantile(P[j] + K)};
    res.certificate.slacks.push_back(std::max(b.lo - x[j], x[j] - b.hi));
    res.certificate.position_boxes.push_back(finquant::detail::clamp_box(b, s.lo, s.hi));
  }
}

}  // namespace detail

// Best positions for fixed weights: atoms at the quantile of each cell midpoint.
inline ApproxResult best_given_weights(const Dist& mu, const std::vector<double>& p) {
  const std::vector<double> P = finquant::detail::positive_levels(p);
  const std::size_t m = P.size() - 1;
  std::vector<double> x;
  for (std::size_t j = 0; j < m; ++j) x.push_back(mu.quantile(0.5 * (P[j] + P[j + 1])));
  ApproxResult res;
  res.measure = FiniteMeasure::from_cuts(x, {P.begin() + 1, P.end() - 1});
  const double K = kolmogorov_distance(mu, res.measure);
  detail::weight_slacks(mu, res, K);
  res.distance = K;
  res.certificate.mode = Mode::WeightsGiven;
  res.certificate.value = K;
  res.certificate.distinct_positions = res.measure.distinct_positions();
  res.certificate.reduced_n = m;
  res.diagnostics.residual = std::max(0.0, res.certificate.max_slack());
  res.diagnostics.method = "cell medians";
  return res;
}

inline ApproxResult best_uniform(const Dist& mu, std::size_t n) {
  ApproxResult res = best_given_weights(mu, finquant::detail::uniform_weights(n));
  res.certificate.mode = Mode::Uniform;
  return res;
}

// S_a(x) = F(Q(x + a)) + a
inline double s_map(const Dist& mu, double a, double x) { return mu.cdf(mu.quantile(x + a)) + a; }

inline ApproxResult best_unconstrained(const Dist& mu, std::size_t n, double tol = numeric::kRootTol) {
  if (n == 0) throw InvalidParameter("n must be >= 1");
  int evaluations = 0;
  auto reaches = [&](double a) {
    ++evaluations;
    double v = 0.0;
    for (std::size_t i = 0; i < n && v < 1.0; ++i) v = s_map(mu, a, v);
    return v >= 1.0;
  };
  const double K = numeric::threshold(reaches, 0.0, 0.5, tol);

  std::vector<double> levels{0.0};
  while (levels.back() < 1.0 && levels.size() <= n) levels.push_back(s_map(mu, K, levels.back()));
  levels.back() = 1.0;
  const std::size_t m = levels.size() - 1;

  const Interval s = mu.support();
  std::vector<double> x;
  for (std::size_t i = 1; i <= m; ++i) {
    const Box b{mu.quantile_left(levels[i] - K), mu.quantile(levels[i - 1] + K)};
    x.push_back(finquant::detail::box_point(b, s));
  }
  ApproxResult res;
  res.measure =
      FiniteMeasure::from_cuts(finquant::detail::sorted_points(x), {levels.begin() + 1, levels.end() - 1});
  detail::weight_slacks(mu, res, K);
  const auto& xs = res.measure.x();
  const auto& P = res.measure.P();
  for (std::size_t j = 0; j <= m; ++j) {
    if (!(j == 0 || j == m || xs[j - 1] < xs[j])) continue;
    const double upper = j == m ? 1.0 : mu.cdf_left(xs[j]);
    const double lower = j == 0 ? 0.0 : mu.cdf(xs[j - 1]);
    res.certificate.slacks.push_back(std::max(upper - K - P[j], P[j] - lower - K));
    if (j > 0 && j < m)
      res.certificate.cut_boxes.push_back(finquant::detail::clamp_box({upper - K, lower + K}, 0.0, 1.0));
  }
  res.distance = K;
  res.certificate.mode = Mode::Unconstrained;
  res.certificate.value = K;
  res.certificate.distinct_positions = res.measure.distinct_positions();
  res.certificate.reduced_n = m;
  res.diagnostics.iterations = evaluations;
  res.diagnostics.residual = std::max(0.0, res.certificate.max_slack());
  res.diagnostics.method = "s-map bisection";
  return res;
}

}  // namespace finquant::kolmogorov
