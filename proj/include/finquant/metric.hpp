#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "finquant/cells.hpp"
#include "finquant/dist.hpp"
#include "finquant/error.hpp"
#include "finquant/finite_measure.hpp"
#include "finquant/numeric.hpp"

namespace finquant {

struct Metric {
  enum class Kind { Levy, Kantorovich, Kolmogorov, FortetMourier };
  Kind kind = Kind::Levy;
  double r = 1.0;

  static Metric levy() { return {Kind::Levy, 1.0}; }
  static Metric kolmogorov() { return {Kind::Kolmogorov, 1.0}; }
  static Metric kantorovich(double r) {
    check_order(r);
    return {Kind::Kantorovich, r};
  }
  static Metric fortet_mourier(double r) {
    check_order(r);
    return {Kind::FortetMourier, r};
  }

  std::string name() const {
    switch (kind) {
      case Kind::Levy: return "levy";
      case Kind::Kolmogorov: return "kolmogorov";
      case Kind::Kantorovich: return "d" + num(r);
      case Kind::FortetMourier: return "fm" + num(r);
    }
    return "";
  }
  bool operator==(const Metric&) const = default;

  static void check_order(double r) {
    if (!(r >= 1.0) || !std::isfinite(r)) throw InvalidParameter("order r must be a finite value >= 1");
  }

 private:
  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
  }
};

namespace detail {

inline void check_inside(const Dist& mu, const FiniteMeasure& nu) {
  const Interval s = mu.support();
  for (double x : nu.x())
    if (!s.contains(x)) throw InvalidInput("atom outside the support of the reference distribution");
}

// Breakpoints in y for integrals of quantile functions: F and F_- at atoms.
inline void add_atom_levels(const Dist& d, std::vector<double>& cuts, std::size_t cap = 20000) {
  if (!d.has_atoms()) return;
  auto atoms = d.atoms();
  if (atoms.size() > cap) return;
  for (const auto& a : atoms) {
    cuts.push_back(d.cdf_left(a.position));
    cuts.push_back(d.cdf(a.position));
  }
}

}  // namespace detail

// Lévy distance between mu and a finite measure, computed cell by cell in the
// distribution-function picture:  omega * max_j ell_{F,[x_j,x_{j+1}]}(P_j).
inline double levy_distance(const Dist& mu, const FiniteMeasure& nu, double tol = numeric::kRootTol) {
  detail::check_inside(mu, nu);
  const FiniteMeasure m = nu.merged();
  const std::size_t n = m.size();
  CdfOf F{&mu};
  double L = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double lo = j == 0 ? -numeric::kInf : m.x()[j - 1];
    const double hi = j == n ? numeric::kInf : m.x()[j];
    L = std::max(L, ell(F, Span{lo, hi}, m.P()[j], tol));
  }
  return mu.omega() * L;
}

// Same distance through the quantile picture: omega * max_j ell_{Q,[P_{j-1},P_j]}(x_j).
inline double levy_distance_inverse(const Dist& mu, const FiniteMeasure& nu,
                                    double tol = numeric::kRootTol) {
  detail::check_inside(mu, nu);
  const FiniteMeasure m = nu.without_zero_weights();
  QuantileOf Q{&mu};
  double L = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j)
    L = std::max(L, ell(Q, Span{m.P()[j], m.P()[j + 1]}, m.x()[j], tol));
  return mu.omega() * L;
}

// sup |F_mu - F_nu| for finite nu, exact.
inline double kolmogorov_distance(const Dist& mu, const FiniteMeasure& nu) {
  detail::check_inside(mu, nu);
  const FiniteMeasure m = nu.merged();
  const std::size_t n = m.size();
  double K = mu.cdf_left(m.x()[0]);
  for (std::size_t i = 0; i < n; ++i) {
    const double level = m.P()[i + 1];
    K = std::max(K, std::abs(mu.cdf(m.x()[i]) - level));
    if (i + 1 < n) K = std::max(K, std::abs(mu.cdf_left(m.x()[i + 1]) - level));
  }
  return K;
}

// max_j kappa_{F,[P_{j-1},P_j]}(x_j); equals d_K when positions are distinct.
inline double kolmogorov_kappa_bound(const Dist& mu, const FiniteMeasure& nu) {
  CdfOf F{&mu};
  double K = 0.0;
  for (std::size_t j = 0; j < nu.size(); ++j)
    K = std::max(K, kappa(F, Span{nu.P()[j], nu.P()[j + 1]}, nu.x()[j]));
  return K;
}

// Integrals over [a, b] of (x - Q)^s where Q < x and of (Q - x)^s where Q > x.
struct CellParts {
  double below;
  double above;
};

inline CellParts cell_parts(const Dist& mu, double x, double a, double b, double s) {
  if (!(b > a)) return {0.0, 0.0};
  const double c1 = std::clamp(mu.cdf_left(x), a, b);
  const double c2 = std::clamp(mu.cdf(x), a, b);
  if (s == 0.0) return {c1 - a, b - c2};
  if (s == 1.0 || s == 2.0) {
    auto m1l = mu.quantile_moment(1, a, c1), m1r = mu.quantile_moment(1, c2, b);
    if (m1l && m1r) {
      if (s == 1.0) return {std::max(0.0, x * (c1 - a) - *m1l), std::max(0.0, *m1r - x * (b - c2))};
      auto m2l = mu.quantile_moment(2, a, c1), m2r = mu.quantile_moment(2, c2, b);
      if (m2l && m2r)
        return {std::max(0.0, x * x * (c1 - a) - 2.0 * x * *m1l + *m2l),
                std::max(0.0, x * x * (b - c2) - 2.0 * x * *m1r + *m2r)};
    }
  }
  double top = b;
  if (!mu.support().bounded() && top >= 1.0) top = 1.0 - 1e-15;
  auto lower = [&](double y) {
    const double q = (y >= c1) ? mu.quantile_left(y) : mu.quantile(y);
    return std::pow(std::max(0.0, x - q), s);
  };
  auto upper = [&](double y) {
    const double q = (y >= top) ? mu.quantile_left(y) : mu.quantile(y);
    return std::pow(std::max(0.0, q - x), s);
  };
  CellParts out{0.0, 0.0};
  if (c1 > a) out.below = numeric::smoothed_simpson(lower, a, c1, 1e-12, 1e-300);
  if (top > c2) out.above = numeric::smoothed_simpson(upper, c2, top, 1e-12, 1e-300);
  return out;
}

// Integral over [a, b] of |Q_mu(y) - x|^r.
inline double cell_power(const Dist& mu, double x, double a, double b, double r) {
  const CellParts c = cell_parts(mu, x, a, b, r);
  return c.below + c.above;
}

namespace detail {

inline double raw_kantorovich_power(const Dist& mu, const FiniteMeasure& nu, double r) {
  double total = 0.0;
  for (std::size_t j = 0; j < nu.size(); ++j)
    total += cell_power(mu, nu.x()[j], nu.P()[j], nu.P()[j + 1], r);
  return total;
}

}  // namespace detail

// d_r(mu, nu) = (1/length) * || Q_mu - Q_nu ||_r for finite nu.
inline double kantorovich_distance(const Dist& mu, const FiniteMeasure& nu, double r) {
  Metric::check_order(r);
  detail::check_inside(mu, nu);
  return std::pow(detail::raw_kantorovich_power(mu, nu, r), 1.0 / r) / mu.norm_length();
}

// General case: quadrature of |Q_mu - Q_nu|^r over [0, 1]. Both supports must be bounded.
inline double kantorovich_distance(const Dist& mu, const Dist& nu, double r) {
  Metric::check_order(r);
  if (const FiniteMeasure* f = nu.finite()) return kantorovich_distance(mu, *f, r);
  if (const FiniteMeasure* f = mu.finite()) {
    detail::check_inside(nu, *f);
    return std::pow(detail::raw_kantorovich_power(nu, *f, r), 1.0 / r) / mu.norm_length();
  }
  if (!mu.support().bounded() || !nu.support().bounded())
    throw InvalidInput("general d_r needs bounded supports or a finite argument");
  std::vector<double> cuts;
  detail::add_atom_levels(mu, cuts);
  detail::add_atom_levels(nu, cuts);
  auto f = [&](double y) {
    const double a = y >= 1.0 ? mu.quantile_left(1.0) : mu.quantile(y);
    const double b = y >= 1.0 ? nu.quantile_left(1.0) : nu.quantile(y);
    return std::pow(std::abs(a - b), r);
  };
  const double total = numeric::integrate_split(f, 0.0, 1.0, cuts, 1e-11);
  return std::pow(total, 1.0 / r) / mu.norm_length();
}

// d_1 through the distribution functions: (1/length) * integral |F_mu - F_nu|.
inline double kantorovich_distance_fubini(const Dist& mu, const Dist& nu) {
  const Interval s = mu.support();
  if (!s.bounded()) throw InvalidInput("Fubini form needs a bounded support");
  std::vector<double> cuts;
  for (const Dist* d : {&mu, &nu}) {
    if (const FiniteMeasure* f = d->finite()) {
      cuts.insert(cuts.end(), f->x().begin(), f->x().end());
    } else if (d->has_atoms()) {
      auto a = d->atoms();
      if (a.size() <= 20000)
        for (auto& at : a) cuts.push_back(at.position);
    }
  }
  auto f = [&](double x) { return std::abs(mu.cdf(x) - nu.cdf(x)); };
  return numeric::integrate_split(f, s.lo, s.hi, cuts, 1e-11) / s.length();
}

// Fortet-Mourier distance of order r on a support inside [1, inf):
// integral of y^{r-1} |F_mu - F_nu| dy, computed as a d_1 integral after x -> x^r.
inline double fortet_mourier_distance(const Dist& mu, const FiniteMeasure& nu, double r) {
  Metric::check_order(r);
  if (mu.support().lo < 1.0) throw InvalidInput("Fortet-Mourier distance needs support in [1, inf)");
  detail::check_inside(mu, nu);
  const Dist pushed = power_pushforward(mu, r);
  std::vector<double> xr;
  for (double x : nu.x()) xr.push_back(std::pow(x, r));
  const FiniteMeasure image = FiniteMeasure::from_cuts(xr, nu.cuts());
  return detail::raw_kantorovich_power(pushed, image, 1.0) / r;
}

inline double fortet_mourier_distance(const Dist& mu, const Dist& nu, double r) {
  Metric::check_order(r);
  if (const FiniteMeasure* f = nu.finite()) return fortet_mourier_distance(mu, *f, r);
  if (mu.support().lo < 1.0 || nu.support().lo < 1.0)
    throw InvalidInput("Fortet-Mourier distance needs support in [1, inf)");
  const Interval s = mu.support();
  if (!s.bounded()) throw InvalidInput("general Fortet-Mourier needs a bounded support");
  auto f = [&](double x) { return std::pow(x, r - 1.0) * std::abs(mu.cdf(x) - nu.cdf(x)); };
  return numeric::adaptive_simpson(f, s.lo, s.hi, 1e-11);
}

namespace detail {

// Points at which sup-type checks between two general distributions are made.
inline std::vector<double> probe_points(const Dist& mu, const Dist& nu, std::size_t grid) {
  std::vector<double> pts;
  for (const Dist* d : {&mu, &nu}) {
    const Interval s = d->support();
    const double hi = s.bounded() ? s.hi : d->quantile(1.0 - 1e-12);
    for (std::size_t i = 0; i <= grid; ++i)
      pts.push_back(s.lo + (hi - s.lo) * static_cast<double>(i) / static_cast<double>(grid));
    if (d->has_atoms()) {
      auto a = d->atoms();
      if (a.size() <= 200000)
        for (const auto& at : a) pts.push_back(at.position);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace detail

inline double kolmogorov_distance(const Dist& mu, const Dist& nu, std::size_t grid = 20000) {
  if (const FiniteMeasure* f = nu.finite()) return kolmogorov_distance(mu, *f);
  if (const FiniteMeasure* f = mu.finite()) return kolmogorov_distance(nu, *f);
  double K = 0.0;
  for (double x : detail::probe_points(mu, nu, grid)) {
    K = std::max(K, std::abs(mu.cdf(x) - nu.cdf(x)));
    K = std::max(K, std::abs(mu.cdf_left(x) - nu.cdf_left(x)));
  }
  return K;
}

// For two general distributions the sandwich condition is checked on a grid
// plus all atoms, so the result is exact only up to the grid resolution.
inline double levy_distance(const Dist& mu, const Dist& nu, std::size_t grid = 20000) {
  if (const FiniteMeasure* f = nu.finite()) return levy_distance(mu, *f);
  if (const FiniteMeasure* f = mu.finite()) return mu.omega() / nu.omega() * levy_distance(nu, *f);
  const auto pts = detail::probe_points(mu, nu, grid);
  auto ok = [&](double y) {
    for (double x : pts) {
      const double g = nu.cdf(x), gl = nu.cdf_left(x);
      if (mu.cdf_left(x - y) - y > gl || g > mu.cdf(x + y) + y) return false;
    }
    return true;
  };
  return mu.omega() * numeric::threshold(ok, 0.0, 1.0, 1e-12);
}

inline double distance(const Dist& mu, const FiniteMeasure& nu, const Metric& m) {
  switch (m.kind) {
    case Metric::Kind::Levy: return levy_distance(mu, nu);
    case Metric::Kind::Kolmogorov: return kolmogorov_distance(mu, nu);
    case Metric::Kind::Kantorovich: return kantorovich_distance(mu, nu, m.r);
    case Metric::Kind::FortetMourier: return fortet_mourier_distance(mu, nu, m.r);
  }
  return 0.0;
}

inline double distance(const Dist& mu, const Dist& nu, const Metric& m) {
  switch (m.kind) {
    case Metric::Kind::Levy: return levy_distance(mu, nu);
    case Metric::Kind::Kolmogorov: return kolmogorov_distance(mu, nu);
    case Metric::Kind::Kantorovich: return kantorovich_distance(mu, nu, m.r);
    case Metric::Kind::FortetMourier: return fortet_mourier_distance(mu, nu, m.r);
  }
  return 0.0;
}

}  // namespace finquant
