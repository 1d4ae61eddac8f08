#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "finquant/dist.hpp"
#include "finquant/error.hpp"
#include "finquant/metric.hpp"
#include "finquant/numeric.hpp"
#include "finquant/result.hpp"

// Exhaustive grid search used to cross-check the solvers. It reads only the
// distribution function and the quantile of mu; it does not call the solvers
// or the distance routines.
namespace finquant::oracle {

struct Options {
  std::size_t position_grid = 400;  // intervals on the support
  std::size_t weight_grid = 400;    // cuts k / weight_grid
  std::size_t refine = 50;          // quadrature points per weight interval (d_r)
  std::vector<double> extra_positions;  // e.g. closed-form optimal points
  std::vector<double> extra_cuts;
  double max_work = 1e8;
};

struct Result {
  double value = 0.0;
  std::vector<double> x;
  std::vector<double> cuts;
  double position_step = 0.0;
  double weight_step = 0.0;
};

namespace detail {

inline std::vector<double> position_nodes(const Dist& mu, const Options& o) {
  const Interval s = mu.support();
  const double hi = s.bounded() ? s.hi : mu.quantile(1.0 - 0.25 / static_cast<double>(o.weight_grid));
  std::vector<double> g;
  for (std::size_t k = 0; k <= o.position_grid; ++k)
    g.push_back(s.lo + (hi - s.lo) * static_cast<double>(k) / static_cast<double>(o.position_grid));
  if (mu.has_atoms()) {
    auto a = mu.atoms();
    if (a.size() <= 1000)
      for (const auto& at : a) g.push_back(at.position);
  }
  for (double v : o.extra_positions)
    if (s.contains(v)) g.push_back(v);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

inline std::vector<double> weight_nodes(const Dist& mu, const Options& o, std::size_t n, Mode mode) {
  std::vector<double> w;
  if (mode == Mode::Uniform) {
    for (std::size_t j = 0; j <= n; ++j) w.push_back(static_cast<double>(j) / static_cast<double>(n));
    return w;
  }
  for (double c : o.extra_cuts)
    if (c > 0.0 && c < 1.0) w.push_back(c);
  for (std::size_t k = 0; k <= o.weight_grid; ++k)
    w.push_back(static_cast<double>(k) / static_cast<double>(o.weight_grid));
  if (mu.has_atoms()) {
    auto a = mu.atoms();
    if (a.size() <= 1000)
      for (const auto& at : a) {
        w.push_back(mu.cdf(at.position));
        w.push_back(mu.cdf_left(at.position));
      }
  }
  std::sort(w.begin(), w.end());
  w.erase(std::unique(w.begin(), w.end()), w.end());
  return w;
}

template <class Pred>
double least(Pred&& pred, double hi) {
  if (pred(0.0)) return 0.0;
  double lo = 0.0;
  for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// cost[i][a][b] for node i and cut indices a <= b, combined along the chain of
// cuts 0 = P_0 <= ... <= P_n = 1 by sum or max.
template <class CellCost>
Result chain_search(std::size_t n, const std::vector<double>& xs, const std::vector<double>& ws,
                    CellCost&& cost, bool additive) {
  const std::size_t X = xs.size(), W = ws.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(W * W, inf);
  std::vector<std::size_t> arg(W * W, 0);
  for (std::size_t a = 0; a < W; ++a)
    for (std::size_t b = a; b < W; ++b)
      for (std::size_t i = 0; i < X; ++i) {
        const double c = cost(i, a, b);
        if (c < best[a * W + b]) {
          best[a * W + b] = c;
          arg[a * W + b] = i;
        }
      }
  // D[k][b]: best value of the first k cells ending at cut b.
  std::vector<std::vector<double>> D(n + 1, std::vector<double>(W, inf));
  std::vector<std::vector<std::size_t>> from(n + 1, std::vector<std::size_t>(W, 0));
  D[0][0] = additive ? 0.0 : -inf;
  for (std::size_t k = 1; k <= n; ++k)
    for (std::size_t b = 0; b < W; ++b)
      for (std::size_t a = 0; a <= b; ++a) {
        if (D[k - 1][a] == inf) continue;
        const double c = best[a * W + b];
        const double v = additive ? D[k - 1][a] + c : std::max(D[k - 1][a], c);
        if (v < D[k][b]) {
          D[k][b] = v;
          from[k][b] = a;
        }
      }
  Result r;
  r.value = D[n][W - 1];
  std::vector<std::size_t> idx(n + 1);
  idx[n] = W - 1;
  for (std::size_t k = n; k >= 1; --k) idx[k - 1] = from[k][idx[k]];
  for (std::size_t k = 1; k <= n; ++k) {
    r.x.push_back(xs[arg[idx[k - 1] * W + idx[k]]]);
    if (k < n) r.cuts.push_back(ws[idx[k]]);
  }
  return r;
}

}  // namespace detail

// Grid minimum of d(mu, delta_x^p) over positions and cuts on the grids.
// Mode Uniform fixes the weights to 1/n; every other mode searches all cuts.
inline Result brute_force(const Dist& mu, const Metric& metric, std::size_t n, const Options& o = {},
                          Mode mode = Mode::Unconstrained) {
  if (n == 0 || n > 3) throw InvalidParameter("oracle supports n in 1..3");
  const std::vector<double> xs = detail::position_nodes(mu, o);
  const std::vector<double> ws = detail::weight_nodes(mu, o, n, mode);
  const std::size_t X = xs.size(), W = ws.size();
  const double work = static_cast<double>(X) * static_cast<double>(W) * static_cast<double>(W) / 2.0;
  if (work > o.max_work) throw InvalidParameter("oracle grid too large");
  const double hx = (xs.back() - xs.front()) / static_cast<double>(o.position_grid);
  const double hw = 1.0 / static_cast<double>(o.weight_grid);
  Result res;

  if (metric.kind == Metric::Kind::Levy) {
    // ya[i][a]: least y with F_-(x_i - y) - y <= w_a; yb[i][b]: least y with w_b <= F(x_i + y) + y.
    std::vector<double> ya(X * W), yb(X * W);
    for (std::size_t i = 0; i < X; ++i)
      for (std::size_t a = 0; a < W; ++a) {
        const double x = xs[i], w = ws[a];
        ya[i * W + a] = detail::least([&](double y) { return mu.cdf_left(x - y) - y <= w; }, 1.0);
        yb[i * W + a] = detail::least([&](double y) { return w <= mu.cdf(x + y) + y; }, 1.0);
      }
    res = detail::chain_search(
        n, xs, ws, [&](std::size_t i, std::size_t a, std::size_t b) { return std::max(ya[i * W + a], yb[i * W + b]); },
        false);
    res.value *= mu.omega();
  } else if (metric.kind == Metric::Kind::Kolmogorov) {
    std::vector<double> fl(X), fr(X);
    for (std::size_t i = 0; i < X; ++i) {
      fl[i] = mu.cdf_left(xs[i]);
      fr[i] = mu.cdf(xs[i]);
    }
    res = detail::chain_search(
        n, xs, ws,
        [&](std::size_t i, std::size_t a, std::size_t b) {
          return std::max(std::abs(fl[i] - ws[a]), std::abs(fr[i] - ws[b]));
        },
        false);
  } else if (metric.kind == Metric::Kind::Kantorovich) {
    const double r = metric.r;
    // J[i][a] = integral over [0, w_a] of |Q - x_i|^r, midpoint rule on a refinement of the cuts.
    std::vector<double> J(X * W, 0.0);
    std::vector<double> qs;
    std::vector<std::size_t> start(W, 0);
    for (std::size_t a = 0; a + 1 < W; ++a) {
      start[a] = qs.size();
      const double h = (ws[a + 1] - ws[a]) / static_cast<double>(o.refine);
      for (std::size_t k = 0; k < o.refine; ++k) qs.push_back(mu.quantile(ws[a] + (k + 0.5) * h));
    }
    for (std::size_t i = 0; i < X; ++i) {
      double acc = 0.0;
      for (std::size_t a = 0; a + 1 < W; ++a) {
        const double h = (ws[a + 1] - ws[a]) / static_cast<double>(o.refine);
        double part = 0.0;
        for (std::size_t k = 0; k < o.refine; ++k) {
          const double d = std::abs(qs[start[a] + k] - xs[i]);
          part += r == 1.0 ? d : (r == 2.0 ? d * d : std::pow(d, r));
        }
        acc += part * h;
        J[i * W + a + 1] = acc;
      }
    }
    res = detail::chain_search(
        n, xs, ws, [&](std::size_t i, std::size_t a, std::size_t b) { return J[i * W + b] - J[i * W + a]; },
        true);
    res.value = std::pow(std::max(0.0, res.value), 1.0 / r) / mu.norm_length();
  } else {
    throw InvalidParameter("oracle supports L, d_r and d_K");
  }
  res.position_step = hx;
  res.weight_step = hw;
  return res;
}

// Does the oracle minimiser sit inside the solver's optimal boxes, allowing one
// grid step (plus the given multiple) in each coordinate?
inline bool inside_certificate(const Result& o, const ApproxResult& solved, double steps = 1.0) {
  const auto& pb = solved.certificate.position_boxes;
  const auto& cb = solved.certificate.cut_boxes;
  if (o.x.size() != solved.measure.size()) return false;
  for (std::size_t j = 0; j < o.x.size() && j < pb.size(); ++j)
    if (!pb[j].contains(o.x[j], steps * o.position_step + 1e-12)) return false;
  for (std::size_t j = 0; j < o.cuts.size() && j < cb.size(); ++j)
    if (!cb[j].contains(o.cuts[j], steps * o.weight_step + 1e-12)) return false;
  return true;
}

// d_L from the definition: least y for which the sandwich
// F_mu(t - y) - y <= F_nu(t) <= F_mu(t + y) + y holds on a grid plus all breakpoints.
inline double definitional_levy(const Dist& mu, const FiniteMeasure& nu, std::size_t grid = 10000) {
  const Interval s = mu.support();
  const double hi = s.bounded() ? s.hi : mu.quantile(1.0 - 1e-9);
  std::vector<double> pts;
  for (std::size_t k = 0; k <= grid; ++k)
    pts.push_back(s.lo - 1.0 + (hi - s.lo + 2.0) * static_cast<double>(k) / static_cast<double>(grid));
  for (double x : nu.x()) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  auto holds = [&](double y) {
    for (double t : pts) {
      const double g = nu.cdf(t);
      const double gl = nu.cdf(std::nextafter(t, -numeric::kInf));
      if (mu.cdf(t - y) - y > g + 1e-15) return false;
      if (mu.cdf_left(t - y) - y > gl + 1e-15) return false;
      if (g > mu.cdf(t + y) + y + 1e-15) return false;
      if (gl > mu.cdf_left(t + y) + y + 1e-15) return false;
    }
    return true;
  };
  return mu.omega() * detail::least(holds, 1.0);
}

}  // namespace finquant::oracle
