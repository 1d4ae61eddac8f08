#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "finquant/dist.hpp"
#include "finquant/error.hpp"
#include "finquant/levy.hpp"
#include "finquant/metric.hpp"
#include "finquant/numeric.hpp"
#include "finquant/oracle.hpp"
#include "finquant/result.hpp"

namespace finquant::kantorovich {

// Minimiser over x of the integral over [a, b] of |Q - x|^r.
inline double cell_center(const Dist& mu, double a, double b, double r) {
  Metric::check_order(r);
  if (!(b > a)) return mu.quantile(std::min(a, std::nextafter(1.0, 0.0)));
  if (r == 1.0) return mu.quantile(0.5 * (a + b));
  const double lo = mu.quantile(a);
  double hi = mu.quantile_left(b);
  if (r == 2.0) {
    if (auto m = mu.quantile_moment(1, a, b)) return std::clamp(*m / (b - a), lo, hi);
  }
  // derivative in x, up to the factor r; increasing
  auto rises = [&](double x) {
    const CellParts c = cell_parts(mu, x, a, b, r - 1.0);
    return c.below >= c.above;
  };
  if (!std::isfinite(hi)) {
    auto grown = numeric::expand_until([&](double t) { return rises(lo + t); }, 1.0, 200);
    if (!grown) throw InvalidInput("cell centre does not exist");
    hi = lo + *grown;
  }
  if (!(hi > lo)) return lo;
  return numeric::threshold(rises, lo, hi, 1e-15 * std::max(1.0, std::abs(hi)));
}

struct LloydState {
  std::vector<double> x;
  std::vector<double> P;  // P_0..P_n
  int iterations = 0;
  double residual = 0.0;
};

class LloydConvergenceError : public ConvergenceError {
 public:
  LloydConvergenceError(const std::string& what, LloydState s)
      : ConvergenceError(what), state_(std::move(s)) {}
  const LloydState& state() const { return state_; }

 private:
  LloydState state_;
};

// Alternating optimisation: centres for fixed cuts, then cuts at the midpoints.
// The residual of a state is its largest optimality violation: distance of each
// cut from its midpoint interval and of each position from its cell centre.
inline LloydState lloyd(const Dist& mu, LloydState s, double r, double tol = 1e-10,
                        int max_iter = 100000) {
  const std::size_t n = s.x.size();
  auto centres = [&](const std::vector<double>& P) {
    std::vector<double> c(n);
    for (std::size_t j = 0; j < n; ++j) c[j] = cell_center(mu, P[j], P[j + 1], r);
    return finquant::detail::sorted_points(c);
  };
  auto violation = [&](const LloydState& t, const std::vector<double>& c) {
    double v = 0.0;
    for (std::size_t j = 0; j < n; ++j) v = std::max(v, std::abs(c[j] - t.x[j]));
    for (std::size_t j = 1; j < n; ++j) {
      const double m = 0.5 * (t.x[j - 1] + t.x[j]);
      v = std::max({v, mu.cdf_left(m) - t.P[j], t.P[j] - mu.cdf(m)});
    }
    return v;
  };
  std::vector<double> c = centres(s.P);
  s.residual = violation(s, c);
  double prev = numeric::kInf;
  for (int it = 1; s.residual > tol; ++it) {
    if (it > max_iter) throw LloydConvergenceError("alternating iteration did not converge", s);
    std::vector<double> P(n + 1);
    P[0] = 0.0;
    P[n] = 1.0;
    // any cut in [F_-(m), F(m)] is optimal; keeping the old one when it is
    // inside avoids drifting to one side of an atom
    for (std::size_t j = 1; j < n; ++j) {
      const double m = 0.5 * (c[j - 1] + c[j]);
      P[j] = std::max(P[j - 1], std::clamp(s.P[j], mu.cdf_left(m), mu.cdf(m)));
    }
    if (s.residual > prev) {
      for (std::size_t j = 0; j < n; ++j) c[j] = 0.5 * (c[j] + s.x[j]);
      for (std::size_t j = 0; j <= n; ++j) P[j] = 0.5 * (P[j] + s.P[j]);
    }
    prev = s.residual;
    s.x = std::move(c);
    s.P = std::move(P);
    s.iterations = it;
    c = centres(s.P);
    s.residual = violation(s, c);
  }
  return s;
}

namespace detail {

inline std::vector<double> midpoints(const std::vector<double>& x) {
  std::vector<double> m;
  for (std::size_t j = 0; j + 1 < x.size(); ++j) m.push_back(0.5 * (x[j] + x[j + 1]));
  return m;
}

// Optimality residuals. Cuts: P_j in [F_-(m_j), F(m_j)]. Positions: for r = 1,
// x_j in [Q_-(c_j), Q(c_j)] with c_j the cell midpoint; for r > 1 the balance of
// the two one-sided integrals of |Q - x_j|^{r-1}.
inline void fill_certificate(const Dist& mu, ApproxResult& res, double r, bool cuts, bool positions) {
  const auto& x = res.measure.x();
  const auto& P = res.measure.P();
  const Interval s = mu.support();
  if (cuts) {
    for (std::size_t j = 0; j + 1 < x.size(); ++j) {
      if (!(x[j] < x[j + 1])) continue;
      const double m = 0.5 * (x[j] + x[j + 1]);
      const Box b{mu.cdf_left(m), mu.cdf(m)};
      res.certificate.slacks.push_back(std::max(b.lo - P[j + 1], P[j + 1] - b.hi));
      res.certificate.cut_boxes.push_back(b);
    }
  }
  if (positions) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (!(P[j + 1] > P[j])) continue;
      if (r == 1.0) {
        const double c = 0.5 * (P[j] + P[j + 1]);
        const Box b = finquant::detail::clamp_box({mu.quantile_left(c), mu.quantile(c)}, s.lo, s.hi);
        res.certificate.slacks.push_back(std::max(b.lo - x[j], x[j] - b.hi));
        res.certificate.position_boxes.push_back(b);
      } else {
        const CellParts c = cell_parts(mu, x[j], P[j], P[j + 1], r - 1.0);
        res.certificate.slacks.push_back(std::abs(c.below - c.above));
        res.certificate.position_boxes.push_back({x[j], x[j]});
      }
    }
  }
}

inline ApproxResult finish(const Dist& mu, FiniteMeasure m, double r, Mode mode, bool cuts,
                           bool positions) {
  ApproxResult res;
  res.measure = std::move(m);
  res.distance = kantorovich_distance(mu, res.measure, r);
  fill_certificate(mu, res, r, cuts, positions);
  res.certificate.mode = mode;
  res.certificate.value = res.distance;
  res.certificate.distinct_positions = res.measure.distinct_positions();
  res.certificate.reduced_n = res.measure.size();
  res.diagnostics.residual = std::max(0.0, res.certificate.max_slack());
  return res;
}

}  // namespace detail

// Best weights for fixed positions: nearest-neighbour cells, optimal for every r.
inline ApproxResult best_given_positions(const Dist& mu, const std::vector<double>& x, double r = 1.0) {
  Metric::check_order(r);
  finquant::detail::check_positions(mu, x);
  std::vector<double> cuts;
  for (double m : detail::midpoints(x)) cuts.push_back(mu.cdf(m));
  ApproxResult res = detail::finish(mu, FiniteMeasure::from_cuts(x, cuts), r, Mode::PositionsGiven,
                                    true, false);
  res.diagnostics.method = "nearest neighbour";
  return res;
}

// Best positions for fixed weights (zero weights dropped): the r-centre of each cell.
inline ApproxResult best_given_weights(const Dist& mu, const std::vector<double>& p, double r = 1.0) {
  Metric::check_order(r);
  const std::vector<double> P = finquant::detail::positive_levels(p);
  std::vector<double> x;
  for (std::size_t j = 0; j + 1 < P.size(); ++j) x.push_back(cell_center(mu, P[j], P[j + 1], r));
  x = finquant::detail::sorted_points(x);
  ApproxResult res = detail::finish(mu, FiniteMeasure::from_cuts(x, {P.begin() + 1, P.end() - 1}), r,
                                    Mode::WeightsGiven, false, true);
  res.diagnostics.method = "cell centres";
  return res;
}

inline ApproxResult best_uniform(const Dist& mu, std::size_t n, double r = 1.0) {
  ApproxResult res = best_given_weights(mu, finquant::detail::uniform_weights(n), r);
  res.certificate.mode = Mode::Uniform;
  return res;
}

namespace detail {

struct Shot {
  bool overshoot = false;
  std::vector<double> x;
  std::vector<double> P;  // P_0..P_{n-1}
};

// Forward recursion from x_1: each cell is balanced, then the next atom is the
// mirror image of x_j in the cut. Used for continuous mu.
inline Shot shoot(const Dist& mu, std::size_t n, double r, double x1) {
  Shot s;
  s.x.push_back(x1);
  s.P.push_back(0.0);
  const double top = mu.support().hi;
  for (std::size_t j = 0; j < n; ++j) {
    const double xj = s.x.back(), prev = s.P.back();
    const double Fj = mu.cdf(xj);
    double Pj;
    if (r == 1.0) {
      Pj = 2.0 * Fj - prev;
      if (j + 1 == n) {
        s.overshoot = Pj > 1.0;
        return s;
      }
      if (Pj >= 1.0) {
        s.overshoot = true;
        return s;
      }
    } else {
      const CellParts whole = cell_parts(mu, xj, prev, 1.0, r - 1.0);
      if (whole.above < whole.below || (j + 1 == n)) {
        s.overshoot = whole.above < whole.below;
        return s;
      }
      auto balanced = [&](double P) { return cell_parts(mu, xj, prev, P, r - 1.0).above >= whole.below; };
      Pj = numeric::threshold(balanced, std::max(prev, Fj), 1.0, 1e-16);
      if (Pj >= 1.0) {
        s.overshoot = true;
        return s;
      }
    }
    const double next = 2.0 * mu.quantile(Pj) - xj;
    if (!(next <= top)) {
      s.overshoot = true;
      return s;
    }
    s.P.push_back(Pj);
    s.x.push_back(next);
  }
  return s;
}

}  // namespace detail

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 100000;
};

// Best n-point approximation in d_r for a general mu.
inline ApproxResult best_dr_general(const Dist& mu, std::size_t n, double r, SolverOptions opt = {}) {
  Metric::check_order(r);
  if (n == 0) throw InvalidParameter("n must be >= 1");
  const double centre = cell_center(mu, 0.0, 1.0, r);
  LloydState start;
  std::string method;
  int iterations = 0;
  if (n == 1) {
    start.x = {centre};
    start.P = {0.0, 1.0};
    method = "single cell";
  }
  bool shot = false;
  if (n > 1 && !mu.has_atoms()) {
    double lo = mu.support().lo, hi = centre;
    if (detail::shoot(mu, n, r, hi).overshoot && !detail::shoot(mu, n, r, lo).overshoot) {
      for (int it = 0; it < 200; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (!(mid > lo && mid < hi)) break;
        ++iterations;
        if (detail::shoot(mu, n, r, mid).overshoot)
          hi = mid;
        else
          lo = mid;
      }
      detail::Shot s = detail::shoot(mu, n, r, lo);
      if (s.x.size() == n) {
        start.x = s.x;
        start.P = s.P;
        start.P.push_back(1.0);
        shot = true;
        method = "shooting";
      }
    }
  }
  if (n > 1 && !shot) {
    start.P.resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) start.P[j] = static_cast<double>(j) / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) start.x.push_back(cell_center(mu, start.P[j], start.P[j + 1], r));
    method = "alternating";
  }
  LloydState fin = n == 1 ? start : lloyd(mu, start, r, opt.tol, opt.max_iter);
  std::vector<double> cuts(fin.P.begin() + 1, fin.P.end() - 1);
  ApproxResult res = detail::finish(mu, FiniteMeasure::from_cuts(fin.x, cuts), r, Mode::Unconstrained,
                                    true, true);
  iterations += fin.iterations;
  // With atoms the conditions have spurious solutions; for small n also start
  // from the grid minimiser and keep the better end point.
  if (mu.has_atoms() && n > 1 && n <= 3) {
    oracle::Options o;
    o.position_grid = o.weight_grid = 120;
    o.refine = 20;
    const oracle::Result g = oracle::brute_force(mu, Metric::kantorovich(r), n, o);
    LloydState alt;
    alt.x = g.x;
    alt.P.push_back(0.0);
    alt.P.insert(alt.P.end(), g.cuts.begin(), g.cuts.end());
    alt.P.push_back(1.0);
    const LloydState f2 = lloyd(mu, alt, r, opt.tol, opt.max_iter);
    iterations += f2.iterations;
    ApproxResult r2 = detail::finish(mu, FiniteMeasure::from_cuts(f2.x, {f2.P.begin() + 1, f2.P.end() - 1}), r,
                                     Mode::Unconstrained, true, true);
    if (r2.distance < res.distance) {
      res = std::move(r2);
      fin = f2;
      method += " + grid start";
    }
  }
  res.diagnostics.iterations = iterations;
  // residual of the alternating iteration, in position/cut units
  res.diagnostics.residual = fin.residual;
  res.diagnostics.optimality = (mu.unique_quantizers() || n == 1) ? "global" : "stationary";
  res.diagnostics.method = method;
  return res;
}

// Uniform weights, atoms at b^{(2j-1)/(2n)}.
inline ApproxResult benford_uniform_d1(double b, std::size_t n) {
  if (n == 0) throw InvalidParameter("n must be >= 1");
  const Dist mu = benford(b);
  std::vector<double> x;
  for (std::size_t j = 1; j <= n; ++j)
    x.push_back(std::pow(b, (2.0 * static_cast<double>(j) - 1.0) / (2.0 * static_cast<double>(n))));
  ApproxResult res = detail::finish(mu, FiniteMeasure::uniform(x), 1.0, Mode::Uniform, false, true);
  res.distance = std::tanh(std::log(b) / (4.0 * static_cast<double>(n))) / std::log(b);
  res.certificate.value = res.distance;
  res.diagnostics.method = "closed form";
  return res;
}

// Best n-point d_1 approximation of beta_b in closed form.
inline ApproxResult benford_best_d1(double b, std::size_t n) {
  if (n == 0) throw InvalidParameter("n must be >= 1");
  const Dist mu = benford(b);
  const double s = std::sqrt(b) - 1.0, lnb = std::log(b), nn = static_cast<double>(n);
  std::vector<double> x, cuts;
  for (std::size_t j = 1; j <= n; ++j) {
    const double jj = static_cast<double>(j);
    x.push_back((1.0 + (jj - 1.0) / nn * s) * (1.0 + jj / nn * s));
    if (j < n) cuts.push_back(2.0 / lnb * std::log1p(jj / nn * s));
  }
  ApproxResult res = detail::finish(mu, FiniteMeasure::from_cuts(x, cuts), 1.0, Mode::Unconstrained,
                                    true, true);
  res.distance = std::tanh(lnb / 4.0) / (nn * lnb);
  res.certificate.value = res.distance;
  res.diagnostics.method = "closed form";
  return res;
}

namespace detail {

// Integral from 1 to x of (z-1)^{r-1} h(z) dz. Near z = 1 with r < 2 the
// substitution t = (z-1)^r removes the singular factor.
template <class H>
double ratio_integral(double x, double r, H&& h) {
  if (!(x > 1.0)) return 0.0;
  double total = 0.0;
  double from = 1.0;
  if (r < 2.0) {
    const double edge = std::min(x, 2.0);
    const double tmax = std::pow(edge - 1.0, r);
    auto g = [&](double t) { return h(1.0 + std::pow(t, 1.0 / r)) / r; };
    total += numeric::adaptive_simpson(g, 0.0, tmax, 1e-14, 1e-300);
    from = edge;
  }
  if (x > from) {
    auto g = [&](double z) { return std::pow(z - 1.0, r - 1.0) * h(z); };
    total += numeric::adaptive_simpson(g, from, x, 1e-14, 1e-300);
  }
  return total;
}

}  // namespace detail

// g_a(x) = integral from 1 to x of (z-1)^{r-1} / (z^a (z+1)) dz, x >= 1.
class GaFunction {
 public:
  GaFunction(double a, double r) : a_(a), r_(r) { Metric::check_order(r); }

  double operator()(double x) const {
    return detail::ratio_integral(x, r_, [this](double z) { return 1.0 / (std::pow(z, a_) * (z + 1.0)); });
  }
  double derivative(double x) const {
    return std::pow(x - 1.0, r_ - 1.0) / (std::pow(x, a_) * (x + 1.0));
  }

  // Solution x >= 1 of g_a(x) = c. For a <= 1 the function is unbounded.
  double inverse(double c) const {
    if (!(c > 0.0)) return 1.0;
    double lo = 1.0, hi = 2.0;
    while ((*this)(hi) < c) {
      lo = hi;
      hi = 1.0 + 2.0 * (hi - 1.0);
      if (hi > 1e300) throw InvalidInput("value outside the range of g_a");
    }
    double x = hi;
    for (int it = 0; it < 200; ++it) {
      const double v = (*this)(x) - c;
      if (v > 0.0)
        hi = x;
      else
        lo = x;
      const double d = derivative(x);
      double next = (d > 0.0) ? x - v / d : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - x) <= 1e-16 * x || hi - lo <= 4e-16 * hi) return next;
      x = next;
    }
    return x;
  }

  double a() const { return a_; }
  double r() const { return r_; }

 private:
  double a_, r_;
};

struct ShootingOptions {
  // Bracket for the first position; defaults to (1, b).
  double x1_lo = std::numeric_limits<double>::quiet_NaN();
  double x1_hi = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

struct RatioShot {
  bool overshoot;
  std::vector<double> x;
};

// Ratios rho_j = x_{j+1}/x_j propagated through g_0^{-1} o g_r; overshoot means
// the virtual midpoint after x_n lies beyond b.
inline RatioShot ratio_shot(double b, std::size_t n, double r, double x1, const GaFunction& g0,
                            const GaFunction& gr) {
  RatioShot s{false, {x1}};
  const double start = ratio_integral(x1, r, [r](double w) { return std::pow(w, -r); });
  double rho = g0.inverse(std::pow(2.0, r - 1.0) * start);
  for (std::size_t j = 1; j < n; ++j) {
    const double xj = s.x.back();
    if (0.5 * xj * (1.0 + rho) >= b) {
      s.overshoot = true;
      return s;
    }
    s.x.push_back(xj * rho);
    rho = g0.inverse(gr(rho));
  }
  s.overshoot = 0.5 * s.x.back() * (1.0 + rho) > b;
  return s;
}

}  // namespace detail

// Best n-point d_r approximation of beta_b (r > 1) by shooting on x_1.
inline ApproxResult benford_best_dr_shooting(double b, std::size_t n, double r, ShootingOptions opt = {}) {
  Metric::check_order(r);
  if (!(b > 1.0) || !std::isfinite(b)) throw InvalidParameter("Benford base must be > 1");
  if (n == 0) throw InvalidParameter("n must be >= 1");
  const GaFunction g0(0.0, r), gr(r, r);
  double lo = std::isnan(opt.x1_lo) ? 1.0 : opt.x1_lo;
  double hi = std::isnan(opt.x1_hi) ? b : opt.x1_hi;
  if (!(lo >= 1.0 && hi <= b && lo < hi)) throw InvalidParameter("bad bracket for x_1");
  if (detail::ratio_shot(b, n, r, lo, g0, gr).overshoot || !detail::ratio_shot(b, n, r, hi, g0, gr).overshoot)
    throw ConvergenceError("bracket does not enclose the first position");
  int iterations = 0;
  for (; iterations < 200; ++iterations) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    if (detail::ratio_shot(b, n, r, mid, g0, gr).overshoot)
      hi = mid;
    else
      lo = mid;
  }
  const auto s = detail::ratio_shot(b, n, r, lo, g0, gr);
  if (s.x.size() != n) throw ConvergenceError("shooting chain incomplete");
  const Dist mu = benford(b);
  std::vector<double> cuts;
  for (double m : detail::midpoints(s.x)) cuts.push_back(mu.cdf(m));
  ApproxResult res = detail::finish(mu, FiniteMeasure::from_cuts(s.x, cuts), r, Mode::Unconstrained,
                                    true, true);
  res.diagnostics.iterations = iterations;
  res.diagnostics.method = "ratio shooting";
  return res;
}

// Explicit asymptotically optimal families for beta_b.
inline FiniteMeasure asymptotic_dr_family(double b, std::size_t n, double r, Mode mode) {
  Metric::check_order(r);
  if (!(b > 1.0) || n == 0) throw InvalidParameter("need b > 1 and n >= 1");
  const double nn = static_cast<double>(n);
  std::vector<double> x;
  if (mode == Mode::Uniform) {
    for (std::size_t j = 1; j <= n; ++j)
      x.push_back(std::pow(b, (2.0 * static_cast<double>(j) - 1.0) / (2.0 * nn)));
    return FiniteMeasure::uniform(x);
  }
  if (mode != Mode::Unconstrained) throw InvalidParameter("family needs uniform or unconstrained mode");
  const double c = std::pow(b, r / (r + 1.0)) - 1.0;
  for (std::size_t j = 1; j <= n; ++j)
    x.push_back(std::pow(1.0 + static_cast<double>(j) / (nn + 1.0) * c, 1.0 + 1.0 / r));
  std::vector<double> cuts;
  for (std::size_t j = 0; j + 1 < n; ++j) cuts.push_back(std::log(0.5 * (x[j] + x[j + 1])) / std::log(b));
  return FiniteMeasure::from_cuts(x, cuts);
}

}  // namespace finquant::kantorovich
