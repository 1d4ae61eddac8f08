#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "finquant/approx.hpp"
#include "finquant/metric.hpp"
#include "finquant/oracle.hpp"
#include "finquant/verify.hpp"

using namespace finquant;

namespace {

const double inf = numeric::kInf;

// Plain bisection for the root of a decreasing-minus-increasing pair.
template <class G>
double root(G&& g, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (lo + hi);
    (g(m) > 0 ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Ell, BenfordLeftTail) {
  // f_-(2 - y) - y <= 0 first holds where 10^y = 2 - y.
  const Dist b10 = benford(10.0);
  const double want = root([](double y) { return 2.0 - y - std::pow(10.0, y); }, 0.0, 1.0);
  EXPECT_NEAR(ell(CdfOf{&b10}, Span{-inf, 2.0}, 0.0), want, 1e-12);
  EXPECT_NEAR(want, 0.2445, 1e-4);
}

TEST(Ell, VanishesOnTheJumpInterval) {
  const Dist b10 = benford(10.0);
  EXPECT_EQ(ell(CdfOf{&b10}, Span{std::sqrt(10.0), std::sqrt(10.0)}, 0.5), 0.0);
}

TEST(Ell, PointMass) {
  const Dist mu = mixture(Interval(0.0, 10.0), {{5.0, 1.0}}, {});
  EXPECT_NEAR(ell(CdfOf{&mu}, Span{0.0, 10.0}, 0.5), 0.5, 1e-12);
}

TEST(Ell, LipschitzInX) {
  const Dist b10 = benford(10.0);
  const CdfOf F{&b10};
  for (int k = 0; k < 100; ++k) {
    const double x = k / 100.0, h = 1e-3;
    EXPECT_LE(std::abs(ell(F, Span{2.0, 5.0}, x + h) - ell(F, Span{2.0, 5.0}, x)), h + 1e-12);
  }
}

TEST(EllStar, BenfordQuantileWholeInterval) {
  const Dist b10 = benford(10.0);
  const auto c = ell_star(QuantileOf{&b10}, Span{0.0, 1.0});
  const double want = root([](double y) { return std::pow(10.0, 1.0 - y) - std::pow(10.0, y) - 2.0 * y; }, 0.0, 0.5);
  EXPECT_NEAR(c.value, want, 1e-12);
  EXPECT_LE(c.value, 0.5);
}

TEST(EllStar, ZeroWhenCellCollapses) {
  const Dist mu = mixture(Interval(0.0, 10.0), {{5.0, 1.0}}, {});
  EXPECT_EQ(ell_star(CdfOf{&mu}, Span{5.0, 5.0}).value, 0.0);
  const Dist b10 = benford(10.0);
  EXPECT_EQ(ell_star(CdfOf{&b10}, Span{3.0, 3.0}).value, 0.0);
}

TEST(EllStar, Beta21AgainstGrid) {
  const Dist mu = beta21();
  const QuantileOf Q{&mu};
  // least y with Q_-(1/2 - y) - y <= x <= Q(y) + y, by direct bisection
  auto least = [&](double x) {
    auto ok = [&](double y) { return Q.left(0.5 - y) - y <= x && x <= Q.right(y) + y; };
    double lo = 0.0, hi = 1.0;
    if (ok(0.0)) return 0.0;
    for (int k = 0; k < 60; ++k) {
      const double m = 0.5 * (lo + hi);
      (ok(m) ? hi : lo) = m;
    }
    return hi;
  };
  double best = inf, at = 0.0;
  for (int i = 0; i <= 20000; ++i)
    if (const double v = least(i / 20000.0); v < best) best = v, at = i / 20000.0;
  // second pass around the coarse minimizer
  for (int i = -20000; i <= 20000; ++i) best = std::min(best, least(at + i * 5e-9));
  EXPECT_LE(ell_star(Q, Span{0.0, 0.5}).value, best + 1e-12);
  EXPECT_NEAR(ell_star(Q, Span{0.0, 0.5}).value, best, 1e-6);
}

TEST(Kappa, ContinuousCdf) {
  const Dist b10 = benford(10.0);
  EXPECT_NEAR(kappa(CdfOf{&b10}, Span{0.0, 1.0 / 3.0}, std::pow(10.0, 1.0 / 6.0)), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(kappa(CdfOf{&b10}, Span{0.25, 0.25}, std::pow(10.0, 0.25)), 0.0, 1e-15);
}

TEST(Kappa, ScaledCounterexample) {
  const Dist mu = mixture(Interval(0.0, 5.0), {{5.0, 2.0 / 3.0}}, {{0.0, 5.0, 1.0 / 3.0}});
  const Scaled<CdfOf> f{CdfOf{&mu}, 15.0};
  EXPECT_NEAR(kappa(f, Span{6.0, 8.0}, std::nextafter(5.0, 0.0)), 3.0, 1e-9);
  EXPECT_NEAR(kappa(f, Span{6.0, 8.0}, 5.0), 7.0, 1e-12);
  EXPECT_NEAR(kappa(f, Span{6.0, 8.0}, std::nextafter(5.0, 6.0)), 9.0, 1e-12);
}

TEST(Levy, BenfordThreeUniform) {
  const Dist b10 = benford(10.0);
  const auto r = solve(b10, Metric::levy(), Mode::Uniform, 3);
  EXPECT_NEAR(levy_distance(b10, r.measure), 0.1566, 1e-4);
}

TEST(Levy, IdenticalFiniteMeasureIsZero) {
  const Interval s(1.0, 10.0);
  const FiniteMeasure m({2.0, 4.0, 4.0, 9.0}, {0.1, 0.2, 0.3, 0.4});
  EXPECT_EQ(levy_distance(finite_to_dist(m, s), m), 0.0);
  EXPECT_EQ(kolmogorov_distance(finite_to_dist(m, s), m), 0.0);
  EXPECT_NEAR(kantorovich_distance(finite_to_dist(m, s), m, 2.0), 0.0, 1e-15);
}

TEST(Levy, DefinitionalAgreement) {
  const Dist b10 = benford(10.0);
  const FiniteMeasure d({std::sqrt(10.0)}, {1.0});
  EXPECT_NEAR(levy_distance(b10, d), oracle::definitional_levy(b10, d, 10000), 1e-6);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 5; ++t) {
    const FiniteMeasure nu = verify::random_measure(rng, 1.0, 10.0);
    EXPECT_NEAR(levy_distance(b10, nu), oracle::definitional_levy(b10, nu, 100000), 1e-6);
  }
}

TEST(Levy, InversionForm) {
  const auto rep = verify::inversion(200, 99);
  EXPECT_TRUE(rep.passed()) << rep.to_json().dump();
}

TEST(Kantorovich, BenfordThreeUniform) {
  const Dist b10 = benford(10.0);
  const auto r = solve(b10, Metric::kantorovich(1.0), Mode::Uniform, 3);
  EXPECT_NEAR(kantorovich_distance(b10, r.measure, 1.0), 0.08232, 1e-5);
}

TEST(Kantorovich, PointMassAgainstRiemannSum) {
  const Dist b10 = benford(10.0);
  const FiniteMeasure d({std::sqrt(10.0)}, {1.0});
  const int N = 1000000;
  double sum = 0.0;
  for (int i = 0; i < N; ++i) sum += std::abs(std::pow(10.0, (i + 0.5) / N) - std::sqrt(10.0));
  EXPECT_NEAR(kantorovich_distance(b10, d, 1.0), sum / N / 9.0, 1e-9);
}

TEST(Kantorovich, FubiniForm) {
  std::mt19937_64 rng(17);
  const Dist b10 = benford(10.0);
  for (int t = 0; t < 10; ++t) {
    const FiniteMeasure nu = verify::random_measure(rng, 1.0, 10.0);
    EXPECT_NEAR(kantorovich_distance(b10, nu, 1.0),
                kantorovich_distance_fubini(b10, finite_to_dist(nu, b10.support())), 1e-9);
  }
}

TEST(Kantorovich, GeneralQuadratureMatchesCellPath) {
  std::mt19937_64 rng(23);
  const Dist b10 = benford(10.0), m = beta21();
  for (int t = 0; t < 5; ++t) {
    const FiniteMeasure nu = verify::random_measure(rng, 1.0, 10.0);
    for (double r : {1.0, 1.5, 2.0})
      EXPECT_NEAR(kantorovich_distance(b10, nu, r), kantorovich_distance(b10, finite_to_dist(nu, b10.support()), r),
                  1e-9);
    const FiniteMeasure z = verify::random_measure(rng, 0.0, 1.0);
    EXPECT_NEAR(kantorovich_distance(m, z, 2.5), kantorovich_distance(m, finite_to_dist(z, m.support()), 2.5), 1e-9);
  }
}

TEST(Kantorovich, SelfDistanceIsZero) {
  const Dist b10 = benford(10.0);
  EXPECT_NEAR(kantorovich_distance(b10, b10, 1.0), 0.0, 1e-12);
  EXPECT_NEAR(kantorovich_distance(b10, b10, 2.0), 0.0, 1e-12);
}

TEST(Kantorovich, OrderBelowOneRejected) {
  const Dist b10 = benford(10.0);
  EXPECT_THROW(kantorovich_distance(b10, FiniteMeasure({2.0}, {1.0}), 0.5), InvalidParameter);
  EXPECT_THROW(Metric::kantorovich(0.9), InvalidParameter);
}

TEST(Kolmogorov, BenfordThreeBest) {
  const Dist b10 = benford(10.0);
  const auto r = solve(b10, Metric::kolmogorov(), Mode::Unconstrained, 3);
  EXPECT_NEAR(kolmogorov_distance(b10, r.measure), 1.0 / 6.0, 1e-12);
}

TEST(Kolmogorov, DuplicatePositionCounterexample) {
  const Dist mu = mixture(Interval(0.0, 2.0), {{1.0, 2.0 / 3.0}}, {{0.0, 2.0, 1.0 / 3.0}});
  for (double p : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    const FiniteMeasure nu({1.0, 1.0}, {p, 1.0 - p});
    EXPECT_NEAR(kolmogorov_distance(mu, nu), 1.0 / 6.0, 1e-15) << p;
  }
}

TEST(Kolmogorov, DistToDistMatchesExactFormula) {
  std::mt19937_64 rng(29);
  const Dist b10 = benford(10.0);
  for (int t = 0; t < 10; ++t) {
    const FiniteMeasure nu = verify::random_measure(rng, 1.0, 10.0);
    const Dist d = finite_to_dist(nu, b10.support());
    EXPECT_NEAR(kolmogorov_distance(b10, d), kolmogorov_distance(b10, nu), 1e-12);
    EXPECT_NEAR(levy_distance(b10, d), levy_distance(b10, nu), 1e-9);
  }
}

TEST(FortetMourier, OrderOneIsAreaBetweenCdfs) {
  std::mt19937_64 rng(31);
  const Dist b10 = benford(10.0);
  for (int t = 0; t < 5; ++t) {
    const FiniteMeasure nu = verify::random_measure(rng, 1.0, 10.0);
    EXPECT_NEAR(fortet_mourier_distance(b10, nu, 1.0), 9.0 * kantorovich_distance(b10, nu, 1.0), 1e-9);
  }
}

TEST(FortetMourier, DirectIntegral) {
  // integral of y^{r-1} |F_mu - F_nu| dy with nu = delta_3 and mu = beta_10
  const Dist b10 = benford(10.0);
  const FiniteMeasure nu({3.0}, {1.0});
  for (double r : {1.5, 2.0, 3.0}) {
    auto f = [&](double y) { return std::pow(y, r - 1.0) * std::abs(b10.cdf(y) - (y >= 3.0 ? 1.0 : 0.0)); };
    const double want = numeric::adaptive_simpson(f, 1.0, 3.0, 1e-12) + numeric::adaptive_simpson(f, 3.0, 10.0, 1e-12);
    EXPECT_NEAR(fortet_mourier_distance(b10, nu, r), want, 1e-8) << r;
  }
}

TEST(FortetMourier, ZeroOnItselfAndSupportCheck) {
  const Dist b10 = benford(10.0);
  EXPECT_NEAR(fortet_mourier_distance(b10, b10, 2.0), 0.0, 1e-10);
  EXPECT_THROW(fortet_mourier_distance(beta21(), FiniteMeasure({0.5}, {1.0}), 2.0), InvalidInput);
}

TEST(Properties, InequalityChainAndTriangle) {
  const auto rep = verify::metric_inequalities(300, 4242);
  EXPECT_TRUE(rep.passed()) << rep.to_json().dump();
}

TEST(Properties, RateExample) {
  const auto rep = verify::rate_example();
  EXPECT_TRUE(rep.passed()) << rep.to_json().dump();
}

TEST(Properties, DistancesNormalized) {
  std::mt19937_64 rng(37);
  const Interval s(1.0, 10.0);
  for (int t = 0; t < 200; ++t) {
    const Dist mu = finite_to_dist(verify::random_measure(rng, 1.0, 10.0), s);
    const FiniteMeasure nu = verify::random_measure(rng, 1.0, 10.0);
    for (const Metric m : {Metric::levy(), Metric::kolmogorov(), Metric::kantorovich(1.0), Metric::kantorovich(4.0)})
      EXPECT_LE(distance(mu, nu, m), 1.0 + 1e-12);
  }
  // extreme pair attains 1
  const Dist lo = finite_to_dist(FiniteMeasure({1.0}, {1.0}), s);
  EXPECT_NEAR(levy_distance(lo, FiniteMeasure({10.0}, {1.0})), 1.0, 1e-12);
  EXPECT_NEAR(kantorovich_distance(lo, FiniteMeasure({10.0}, {1.0}), 1.0), 1.0, 1e-12);
}

TEST(MetricName, Names) {
  EXPECT_EQ(Metric::levy().name(), "levy");
  EXPECT_EQ(Metric::kolmogorov().name(), "kolmogorov");
  EXPECT_EQ(Metric::kantorovich(1.0).name(), "d1");
  EXPECT_EQ(Metric::kantorovich(1.5).name(), "d1.5");
  EXPECT_EQ(Metric::fortet_mourier(2.0).name(), "fm2");
}
