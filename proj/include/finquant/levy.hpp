#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "finquant/cells.hpp"
#include "finquant/dist.hpp"
#include "finquant/metric.hpp"
#include "finquant/numeric.hpp"
#include "finquant/result.hpp"

namespace finquant {

namespace detail {

inline void check_positions(const Dist& mu, const std::vector<double>& x) {
  if (x.empty()) throw InvalidParameter("need at least one position");
  const Interval s = mu.support();
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (std::isnan(x[j]) || !s.contains(x[j])) throw InvalidInput("position outside the support");
    if (j > 0 && x[j] < x[j - 1]) throw InvalidInput("positions must be non-decreasing");
  }
}

// Weights -> cumulative levels with zero weights removed.
inline std::vector<double> positive_levels(const std::vector<double>& p) {
  if (p.empty()) throw InvalidParameter("need at least one weight");
  double sum = 0.0;
  for (double w : p) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput("weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw InvalidInput("weights must sum to 1");
  std::vector<double> P{0.0};
  double acc = 0.0;
  for (double w : p) {
    acc += w;
    if (w > 0.0) P.push_back(std::min(1.0, acc));
  }
  P.back() = 1.0;
  return P;
}

inline std::vector<double> uniform_weights(std::size_t n) {
  if (n == 0) throw InvalidParameter("n must be >= 1");
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

// Canonical point of a (clamped) box of optimal positions.
inline double box_point(Box b, const Interval& s) {
  const double lo = std::max(b.lo, s.lo), hi = std::min(b.hi, s.hi);
  if (std::isfinite(lo) && std::isfinite(hi)) return 0.5 * (lo + hi);
  return std::isfinite(lo) ? lo : hi;
}

inline Box clamp_box(Box b, double lo, double hi) { return {std::max(b.lo, lo), std::min(b.hi, hi)}; }

inline std::vector<double> sorted_points(std::vector<double> x) {
  for (std::size_t j = 1; j < x.size(); ++j) x[j] = std::max(x[j], x[j - 1]);
  return x;
}

}  // namespace detail

namespace levy {

// Best weights for fixed positions.
inline ApproxResult best_given_positions(const Dist& mu, const std::vector<double>& x,
                                         double tol = numeric::kRootTol) {
  detail::check_positions(mu, x);
  const std::size_t n = x.size();
  CdfOf F{&mu};
  const double inf = numeric::kInf;
  double L = std::max(ell(F, Span{-inf, x.front()}, 0.0, tol), ell(F, Span{x.back(), inf}, 1.0, tol));
  for (std::size_t j = 0; j + 1 < n; ++j) L = std::max(L, ell_star(F, Span{x[j], x[j + 1]}, tol).value);

  ApproxResult res;
  std::vector<double> cuts;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double lo = mu.cdf_left(x[j + 1] - L), hi = mu.cdf(x[j] + L);
    cuts.push_back(numeric::clamp01(0.5 * (lo + hi)));
    res.certificate.cut_boxes.push_back(detail::clamp_box({lo - L, hi + L}, 0.0, 1.0));
  }
  res.measure = FiniteMeasure::from_cuts(x, detail::sorted_points(cuts));
  const auto& P = res.measure.P();
  for (std::size_t j = 0; j <= n; ++j) {
    const double lo = j == 0 ? -inf : x[j - 1], hi = j == n ? inf : x[j];
    if (lo < hi) res.certificate.slacks.push_back(ell(F, Span{lo, hi}, P[j], tol) - L);
  }
  res.distance = mu.omega() * L;
  res.certificate.mode = Mode::PositionsGiven;
  res.certificate.value = L;
  res.certificate.distinct_positions = res.measure.distinct_positions();
  res.certificate.reduced_n = n;
  res.diagnostics.residual = std::max(0.0, res.certificate.max_slack());
  res.diagnostics.method = "cellwise";
  return res;
}

// Best positions for fixed weights; zero weights are dropped first.
inline ApproxResult best_given_weights(const Dist& mu, const std::vector<double>& p,
                                       double tol = numeric::kRootTol) {
  const std::vector<double> P = detail::positive_levels(p);
  const std::size_t m = P.size() - 1;
  QuantileOf Q{&mu};
  double L = 0.0;
  for (std::size_t j = 0; j < m; ++j) L = std::max(L, ell_star(Q, Span{P[j], P[j + 1]}, tol).value);

  ApproxResult res;
  const Interval s = mu.support();
  std::vector<double> x;
  for (std::size_t j = 0; j < m; ++j) {
    Box b{mu.quantile_left(P[j + 1] - L) - L, mu.quantile(P[j] + L) + L};
    x.push_back(detail::box_point(b, s));
    res.certificate.position_boxes.push_back(detail::clamp_box(b, s.lo, s.hi));
  }
  x = detail::sorted_points(x);
  res.measure = FiniteMeasure::from_cuts(x, {P.begin() + 1, P.end() - 1});
  for (std::size_t j = 0; j < m; ++j)
    res.certificate.slacks.push_back(ell(Q, Span{P[j], P[j + 1]}, x[j], tol) - L);
  res.distance = mu.omega() * L;
  res.certificate.mode = Mode::WeightsGiven;
  res.certificate.value = L;
  res.certificate.distinct_positions = res.measure.distinct_positions();
  res.certificate.reduced_n = m;
  res.diagnostics.residual = std::max(0.0, res.certificate.max_slack());
  res.diagnostics.method = "cellwise";
  return res;
}

inline ApproxResult best_uniform(const Dist& mu, std::size_t n, double tol = numeric::kRootTol) {
  ApproxResult res = best_given_weights(mu, detail::uniform_weights(n), tol);
  res.certificate.mode = Mode::Uniform;
  return res;
}

// T_a(x) = F(Q(x + a) + 2a) + a
inline double t_map(const Dist& mu, double a, double x) {
  return mu.cdf(mu.quantile(x + a) + 2.0 * a) + a;
}

namespace detail {

inline double iterate_t(const Dist& mu, double a, std::size_t n) {
  double v = 0.0;
  for (std::size_t i = 0; i < n && v < 1.0; ++i) v = t_map(mu, a, v);
  return v;
}

}  // namespace detail

// Best n-point approximation; the value is the least a with T_a^{[n]}(0) >= 1.
inline ApproxResult best_unconstrained(const Dist& mu, std::size_t n,
                                       double tol = numeric::kRootTol) {
  if (n == 0) throw InvalidParameter("n must be >= 1");
  int evaluations = 0;
  auto reaches = [&](double a) {
    ++evaluations;
    return detail::iterate_t(mu, a, n) >= 1.0;
  };
  const double L = numeric::threshold(reaches, 0.0, 0.5, tol);

  std::vector<double> levels{0.0};
  while (levels.back() < 1.0 && levels.size() <= n) levels.push_back(t_map(mu, L, levels.back()));
  levels.back() = 1.0;
  const std::size_t m = levels.size() - 1;

  ApproxResult res;
  const Interval s = mu.support();
  std::vector<double> x;
  for (std::size_t i = 1; i <= m; ++i) {
    Box b{mu.quantile_left(levels[i] - L) - L, mu.quantile(levels[i - 1] + L) + L};
    x.push_back(finquant::detail::box_point(b, s));
    res.certificate.position_boxes.push_back(finquant::detail::clamp_box(b, s.lo, s.hi));
  }
  x = finquant::detail::sorted_points(x);
  res.measure = FiniteMeasure::from_cuts(x, {levels.begin() + 1, levels.end() - 1});

  CdfOf F{&mu};
  QuantileOf Q{&mu};
  const auto& P = res.measure.P();
  const double inf = numeric::kInf;
  for (std::size_t j = 0; j <= m; ++j) {
    const double lo = j == 0 ? -inf : x[j - 1], hi = j == m ? inf : x[j];
    if (lo < hi) res.certificate.slacks.push_back(ell(F, Span{lo, hi}, P[j], tol) - L);
  }
  for (std::size_t j = 0; j < m; ++j)
    res.certificate.slacks.push_back(ell(Q, Span{P[j], P[j + 1]}, x[j], tol) - L);
  for (std::size_t j = 1; j < m; ++j) {
    const double lo = mu.cdf_left(x[j] - L) - L, hi = mu.cdf(x[j - 1] + L) + L;
    res.certificate.cut_boxes.push_back(finquant::detail::clamp_box({lo, hi}, 0.0, 1.0));
  }
  res.distance = mu.omega() * L;
  res.certificate.mode = Mode::Unconstrained;
  res.certificate.value = L;
  res.certificate.distinct_positions = res.measure.distinct_positions();
  res.certificate.reduced_n = m;
  res.diagnostics.iterations = evaluations;
  res.diagnostics.residual = std::max(0.0, res.certificate.max_slack());
  res.diagnostics.optimality = "global";
  res.diagnostics.method = "t-map bisection";
  return res;
}

struct BenfordLevy {
  double L;
  double distance;
  std::vector<double> x;
  std::vector<double> P;  // P_1..P_n
};

// Closed form for beta_b: L solves b^{2nL} = (2L + b(b^L - b^-L)) / (2L + b^L - b^-L).
inline BenfordLevy benford_best_closed_form(double b, std::size_t n) {
  if (!(b > 1.0) || !std::isfinite(b)) throw InvalidParameter("Benford base must be > 1");
  if (n == 0) throw InvalidParameter("n must be >= 1");
  const double c = std::log(b), nn = static_cast<double>(n);
  auto excess = [&](double L) {
    const double s = 2.0 * std::sinh(L * c);
    return 2.0 * nn * L * c - std::log((2.0 * L + b * s) / (2.0 * L + s)) >= 0.0;
  };
  BenfordLevy out;
  out.L = numeric::threshold_open(excess, 0.0, 0.5, 1e-15);
  const double L = out.L;
  for (std::size_t j = 1; j <= n; ++j) {
    const double jj = static_cast<double>(j);
    const double xj = std::exp((2.0 * jj - 1.0) * L * c) +
                      2.0 * L * std::expm1(2.0 * jj * L * c) / std::expm1(2.0 * L * c) - L;
    out.x.push_back(xj);
    out.P.push_back(std::log(xj + L) / c + L);
  }
  out.distance = (std::max(b, 2.0) - 1.0) / (b - 1.0) * L;
  return out;
}

// L for beta_b with uniform weights: 2L = b^{1-L} - b^{1+L-1/n}.
inline double benford_uniform_value(double b, std::size_t n) {
  if (!(b > 1.0) || n == 0) throw InvalidParameter("need b > 1 and n >= 1");
  const double inv = 1.0 / static_cast<double>(n);
  auto past = [&](double L) { return 2.0 * L >= std::pow(b, 1.0 - L) - std::pow(b, 1.0 + L - inv); };
  return numeric::threshold(past, 0.0, 0.5 * inv, 1e-16);
}

// L for beta_{2,1} with uniform weights: L sqrt(2/n - 4L^2) = 1/(2n) - L.
inline double beta21_uniform_value(std::size_t n) {
  if (n == 0) throw InvalidParameter("n must be >= 1");
  const double nn = static_cast<double>(n);
  auto past = [&](double L) { return L * std::sqrt(2.0 / nn - 4.0 * L * L) >= 0.5 / nn - L; };
  return numeric::threshold(past, 0.0, 0.5 / nn, 1e-16);
}

}  // namespace levy
}  // namespace finquant
