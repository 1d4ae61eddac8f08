#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "finquant/approx.hpp"
#include "finquant/config.hpp"
#include "finquant/dist.hpp"
#include "finquant/metric.hpp"
#include "finquant/oracle.hpp"

// Named self-check suites run by `finquant verify <suite>`.
namespace finquant::verify {

struct Failure {
  std::string check;
  std::string detail;
};

struct Report {
  explicit Report(std::string name) : suite(std::move(name)) {}

  std::string suite;
  std::size_t checks = 0;
  std::vector<Failure> failures;
  bool passed() const { return failures.empty(); }

  void expect(bool ok, const std::string& check, const std::string& detail = {}) {
    ++checks;
    if (!ok) failures.push_back({check, detail});
  }
  void near(double got, double want, double tol, const std::string& check) {
    expect(std::abs(got - want) <= tol, check,
           "got " + config::fmt(got) + ", want " + config::fmt(want) + " +- " + config::fmt(tol));
  }

  nlohmann::json to_json() const {
    nlohmann::json f = nlohmann::json::array();
    for (const auto& x : failures) f.push_back({{"check", x.check}, {"detail", x.detail}});
    return {{"suite", suite}, {"passed", passed()}, {"checks", checks}, {"failures", f}};
  }
};

// Random measure with 1..6 atoms in [lo, hi]; positions sometimes repeat.
inline FiniteMeasure random_measure(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_int_distribution<int> count(1, 6);
  std::uniform_real_distribution<double> pos(lo, hi), w(0.05, 1.0), coin(0.0, 1.0);
  const int n = count(rng);
  std::vector<double> x, p;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    x.push_back(i > 0 && coin(rng) < 0.15 ? x.back() : pos(rng));
    p.push_back(w(rng));
    sum += p.back();
  }
  std::sort(x.begin(), x.end());
  for (double& v : p) v /= sum;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) acc += p[i];
  p.back() = 1.0 - acc;
  return FiniteMeasure(x, p);
}

inline Report metric_inequalities(std::size_t pairs = 1000, std::uint64_t seed = 20240601) {
  Report rep("metric-inequalities");
  std::mt19937_64 rng(seed);
  const Interval s(1.0, 10.0);
  const double lam = s.length(), eps = 1e-9;
  for (std::size_t k = 0; k < pairs; ++k) {
    const FiniteMeasure a = random_measure(rng, s.lo, s.hi), b = random_measure(rng, s.lo, s.hi);
    const Dist mu = finite_to_dist(a, s);
    const double om = mu.omega();
    const double L = levy_distance(mu, b), K = kolmogorov_distance(mu, b);
    const double d1 = kantorovich_distance(mu, b, 1.0), d2 = kantorovich_distance(mu, b, 2.0),
                 d3 = kantorovich_distance(mu, b, 3.0);
    const std::string tag = "pair " + std::to_string(k);
    rep.expect(L <= 1.0 + eps && K <= 1.0 + eps && d1 <= 1.0 + eps && d3 <= 1.0 + eps, tag + ": normalization");
    rep.expect(d1 <= (1.0 + lam) / (om * lam) * L + eps, tag + ": d1 <= c d_L",
               config::fmt(d1) + " vs " + config::fmt(L));
    rep.expect(d1 <= d2 + eps && d2 <= d3 + eps, tag + ": d_r increasing in r");
    rep.expect(d1 <= K + eps, tag + ": d1 <= d_K");
    rep.expect(L <= om * K + eps, tag + ": d_L <= omega d_K");
    if (k % 10 == 0) {
      // symmetry and the triangle inequality
      const Dist nu = finite_to_dist(b, s);
      const FiniteMeasure c = random_measure(rng, s.lo, s.hi);
      for (const Metric m : {Metric::levy(), Metric::kolmogorov(), Metric::kantorovich(1.0), Metric::kantorovich(2.0)}) {
        const double ab = distance(mu, b, m), ba = distance(nu, a, m);
        rep.near(ab, ba, 1e-9, tag + ": symmetry " + m.name());
        const double ac = distance(mu, c, m), bc = distance(nu, c, m);
        rep.expect(ac <= ab + bc + eps, tag + ": triangle " + m.name());
      }
    }
  }
  return rep;
}

inline Report fig1_fig2() {
  Report rep("fig1-fig2");
  const Dist b10 = benford(10.0);
  rep.near(solve(b10, Metric::levy(), Mode::Uniform, 3).distance, 0.1566, 5e-4, "levy uniform n=3");
  rep.near(solve(b10, Metric::levy(), Mode::Unconstrained, 3).distance, 0.1439, 5e-4, "levy best n=3");
  rep.near(solve(b10, Metric::kantorovich(1.0), Mode::Uniform, 3).distance, 0.08232, 1e-5, "d1 uniform n=3");
  rep.near(solve(b10, Metric::kantorovich(1.0), Mode::Unconstrained, 3).distance, 0.07520, 1e-5, "d1 best n=3");
  rep.near(solve(b10, Metric::kolmogorov(), Mode::Unconstrained, 3).distance, 1.0 / 6.0, 1e-12, "d_K best n=3");
  return rep;
}

struct OracleCheck {
  double oracle = 0.0;
  double solver = 0.0;
  bool inside = false;
};

// Known optimal points that the oracle grid should contain as exact nodes.
inline void closed_form_nodes(const Dist& mu, const Metric& m, std::size_t n, oracle::Options& o) {
  const double nn = static_cast<double>(n);
  if (m.kind == Metric::Kind::Kolmogorov) {
    for (std::size_t j = 1; j <= n; ++j) {
      o.extra_positions.push_back(mu.quantile((2.0 * j - 1.0) / (2.0 * nn)));
      o.extra_cuts.push_back(j / nn);
    }
  }
  if (mu.kind() != DistKind::Benford) return;
  const double b = *mu.parameter();
  if (m.kind == Metric::Kind::Levy) {
    const auto cf = levy::benford_best_closed_form(b, n);
    o.extra_positions.insert(o.extra_positions.end(), cf.x.begin(), cf.x.end());
    o.extra_cuts.insert(o.extra_cuts.end(), cf.P.begin(), cf.P.end());
  } else if (m.kind == Metric::Kind::Kantorovich && m.r == 1.0) {
    const auto cf = kantorovich::benford_best_d1(b, n);
    o.extra_positions.insert(o.extra_positions.end(), cf.measure.x().begin(), cf.measure.x().end());
    o.extra_cuts.insert(o.extra_cuts.end(), cf.measure.P().begin() + 1, cf.measure.P().end() - 1);
  }
}

inline OracleCheck oracle_check(const Dist& mu, const Metric& m, std::size_t n, std::size_t grid = 400) {
  oracle::Options o;
  o.position_grid = o.weight_grid = grid;
  closed_form_nodes(mu, m, n, o);
  const auto g = oracle::brute_force(mu, m, n, o);
  const auto s = solve(mu, m, Mode::Unconstrained, n);
  return {g.value, s.distance, oracle::inside_certificate(g, s)};
}

inline Report oracle_n2() {
  Report rep("oracle-n2");
  const std::vector<std::pair<std::string, Dist>> dists{{"benford:10", benford(10.0)}, {"beta21", beta21()}};
  for (const auto& [name, mu] : dists)
    for (const Metric m : {Metric::levy(), Metric::kantorovich(1.0), Metric::kantorovich(2.0), Metric::kolmogorov()}) {
      const OracleCheck c = oracle_check(mu, m, 2);
      const std::string tag = name + " " + m.name();
      rep.near(c.oracle, c.solver, 2e-3, tag + ": oracle value");
      rep.expect(c.oracle >= c.solver - 1e-9, tag + ": oracle not below solver",
                 config::fmt(c.oracle) + " < " + config::fmt(c.solver));
      rep.expect(c.inside, tag + ": oracle minimiser inside certificate boxes");
    }
  return rep;
}

// mu = delta_0, mu_k = (1 - 1/k) delta_0 + (1/k) delta_{1/k^2} on [0, 1].
inline Report rate_example() {
  Report rep("rate-example");
  const Dist mu = mixture(Interval(0.0, 1.0), {{0.0, 1.0}}, {}, "point-mass");
  for (int k = 1; k <= 20; ++k) {
    const double kk = k, h = 1.0 / (kk * kk);
    const FiniteMeasure nu({0.0, h}, {1.0 - 1.0 / kk, 1.0 / kk});
    const std::string tag = "k=" + std::to_string(k);
    rep.near(levy_distance(mu, nu), h, 1e-12, tag + ": d_L");
    rep.near(kolmogorov_distance(mu, nu), 1.0 / kk, 1e-12, tag + ": d_K");
    for (double r : {1.0, 2.0, 3.0})
      rep.near(kantorovich_distance(mu, nu, r), std::pow(kk, -2.0 - 1.0 / r), 1e-12,
               tag + ": d" + config::fmt(r));
  }
  return rep;
}

inline Report inversion(std::size_t trials = 300, std::uint64_t seed = 7) {
  Report rep("inversion");
  std::mt19937_64 rng(seed);
  const std::vector<Dist> refs{benford(10.0), beta21(), inverse_cantor(16),
                               mixture(Interval(0.0, 1.0), {{0.0, 0.75}}, {{0.0, 1.0, 0.25}})};
  for (std::size_t t = 0; t < trials; ++t) {
    const Dist& mu = refs[t % refs.size()];
    const Interval s = mu.support();
    const FiniteMeasure nu = random_measure(rng, s.lo, s.hi);
    rep.near(levy_distance(mu, nu), levy_distance_inverse(mu, nu), 1e-10,
             mu.name() + " trial " + std::to_string(t));
  }
  return rep;
}

// mu = 3/4 delta_0 + 1/4 lambda on [0, 1].
inline Report atomic_kolmogorov() {
  Report rep("atomic-kolmogorov");
  const Dist mu = mixture(Interval(0.0, 1.0), {{0.0, 0.75}}, {{0.0, 1.0, 0.25}});
  for (std::size_t n = 1; n <= 6; ++n) {
    const double nn = static_cast<double>(n);
    const double best = solve(mu, Metric::kolmogorov(), Mode::Unconstrained, n).distance;
    const double unif = solve(mu, Metric::kolmogorov(), Mode::Uniform, n).distance;
    const std::string tag = "n=" + std::to_string(n);
    rep.near(best, 0.25 / (2.0 * nn - 1.0), 1e-10, tag + ": best");
    rep.near(unif, 0.5 / std::max(nn, 2.0), 1e-10, tag + ": uniform");
    if (n >= 2) rep.expect(best < unif, tag + ": strict");
  }
  return rep;
}

inline const std::map<std::string, std::function<Report()>>& suites() {
  static const std::map<std::string, std::function<Report()>> s{
      {"metric-inequalities", [] { return metric_inequalities(); }},
      {"fig1-fig2", fig1_fig2},
      {"oracle-n2", oracle_n2},
      {"rate-example", rate_example},
      {"inversion", [] { return inversion(); }},
      {"atomic-kolmogorov", atomic_kolmogorov}};
  return s;
}

}  // namespace finquant::verify
