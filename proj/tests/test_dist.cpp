#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "finquant/dist.hpp"

using namespace finquant;

TEST(Benford, CdfAndQuantile) {
  const Dist b10 = benford(10.0);
  EXPECT_NEAR(b10.cdf(std::sqrt(10.0)), 0.5, 1e-15);
  EXPECT_NEAR(b10.quantile(1.0 / 3.0), 2.15443469003188, 1e-13);
  EXPECT_NEAR(benford(2.0).cdf(1.5), 0.584962500721156, 1e-14);
  EXPECT_EQ(b10.support(), Interval(1.0, 10.0));
}

TEST(Benford, Omega) {
  EXPECT_DOUBLE_EQ(benford(10.0).omega(), 1.0);
  EXPECT_DOUBLE_EQ(benford(2.0).omega(), 1.0);
  EXPECT_DOUBLE_EQ(benford(1.5).omega(), (2.0 - 1.0) / 0.5);
}

TEST(Benford, RejectsBaseAtMostOne) {
  EXPECT_THROW(benford(1.0), InvalidParameter);
  EXPECT_THROW(benford(0.5), InvalidParameter);
  EXPECT_THROW(benford(std::nan("")), InvalidParameter);
}

TEST(Beta21, Basics) {
  const Dist mu = beta21();
  EXPECT_DOUBLE_EQ(mu.cdf(0.5), 0.25);
  EXPECT_DOUBLE_EQ(mu.quantile(0.25), 0.5);
  EXPECT_DOUBLE_EQ(mu.cdf_left(0.5), 0.25);
  EXPECT_DOUBLE_EQ(mu.omega(), 1.0);
  EXPECT_FALSE(mu.has_atoms());
}

TEST(InverseCantor, Examples) {
  const Dist mu = inverse_cantor();
  EXPECT_NEAR(mu.cdf(0.5), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(mu.quantile(0.5), 0.5, 1e-15);
  EXPECT_NEAR(mu.atom_mass(0.25), 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(mu.atom_mass(0.5), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(mu.cdf_left(0.5), 1.0 / 3.0, 1e-15);
}

TEST(InverseCantor, QuantileIsCantorFunction) {
  const Dist mu = inverse_cantor();
  EXPECT_NEAR(mu.quantile(0.25), 1.0 / 3.0, 1e-15);  // 0.0202..._3 -> 0.0111..._2
  EXPECT_NEAR(mu.quantile(0.75), 2.0 / 3.0, 1e-15);
  // 1/9 is not a double; the Cantor function is only log2/log3-Hoelder there
  EXPECT_NEAR(mu.quantile(1.0 / 9.0), 0.25, 1e-10);
  EXPECT_NEAR(mu.quantile(0.4), 0.5, 1e-15);  // inside the middle third
}

TEST(InverseCantor, AtomsAndTailMass) {
  for (int depth : {1, 3, 8, 12}) {
    const auto atoms = inverse_cantor(depth).atoms();
    EXPECT_EQ(atoms.size(), (std::size_t{1} << depth) - 1);
    double total = 0.0;
    for (const auto& a : atoms) total += a.mass;
    EXPECT_NEAR(1.0 - total, std::pow(2.0 / 3.0, depth), 1e-12) << depth;
  }
}

TEST(InverseCantor, DeeperTruncationKeepsShallowAtoms) {
  for (int d = 1; d < 12; ++d) {
    const auto a = inverse_cantor(d).atoms();
    const Dist deeper = inverse_cantor(d + 1);
    for (const auto& at : a) EXPECT_NEAR(deeper.atom_mass(at.position), at.mass, 1e-15);
  }
}

TEST(InverseCantor, DepthDoesNotChangeCdfOrQuantile) {
  const Dist a = inverse_cantor(16), b = inverse_cantor(20);
  for (int k = 0; k <= 1000; ++k) {
    const double t = k / 1000.0;
    EXPECT_EQ(a.cdf(t), b.cdf(t));
    EXPECT_EQ(a.quantile(std::min(t, 0.999)), b.quantile(std::min(t, 0.999)));
  }
}

TEST(Exponential, Basics) {
  const Dist mu = exponential();
  EXPECT_NEAR(mu.cdf(std::log(2.0)), 0.5, 1e-15);
  EXPECT_NEAR(mu.quantile(1.0 - std::exp(-1.0)), 1.0, 1e-14);
  EXPECT_EQ(mu.cdf_left(0.0), 0.0);
  EXPECT_FALSE(mu.support().bounded());
  EXPECT_EQ(mu.omega(), 1.0);
  EXPECT_EQ(mu.norm_length(), 1.0);
  EXPECT_EQ(mu.quantile(1.0), numeric::kInf);
}

TEST(FromSamples, Counting) {
  const Interval s(1.0, 10.0);
  auto m = from_samples({2, 2, 5}, s);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.x()[0], 2.0);
  EXPECT_EQ(m.x()[1], 5.0);
  EXPECT_NEAR(m.p()[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(m.p()[1], 1.0 / 3.0, 1e-15);

  m = from_samples({3}, s);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.x()[0], 3.0);
  EXPECT_EQ(m.p()[0], 1.0);

  m = from_samples({1, 10, 10, 10}, s);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_NEAR(m.p()[0], 0.25, 1e-15);
  EXPECT_NEAR(m.p()[1], 0.75, 1e-15);
}

TEST(FromSamples, Errors) {
  EXPECT_THROW(from_samples({}, Interval(1.0, 10.0)), InvalidInput);
  EXPECT_THROW(from_samples({0.5}, Interval(1.0, 10.0)), InvalidInput);
  EXPECT_THROW(from_samples({11.0}, Interval(1.0, 10.0)), InvalidInput);
}

TEST(FromSamples, EmpiricalCdfReproduced) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> die(1, 9);
  std::vector<double> data;
  for (int i = 0; i < 200; ++i) data.push_back(die(rng));
  const Interval s(1.0, 10.0);
  const Dist d = finite_to_dist(from_samples(data, s), s);
  for (double t : data) {
    double count = 0.0;
    for (double v : data) count += v <= t;
    EXPECT_NEAR(d.cdf(t), count / data.size(), 1e-12);
  }
}

TEST(Significand, Examples) {
  EXPECT_NEAR(significand(0.02, 10.0), 2.0, 1e-14);
  EXPECT_NEAR(significand(-31.4, 10.0), 3.14, 1e-14);
  EXPECT_EQ(significand(8.0, 2.0), 1.0);
  EXPECT_EQ(significand(0.0, 10.0), 0.0);
  EXPECT_EQ(significand(1000.0, 10.0), 1.0);
  EXPECT_NEAR(significand(9.99, 10.0), 9.99, 1e-14);
  const auto v = significand(std::vector<double>{0.02, -31.4, 0.0}, 10.0);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[2], 0.0);
}

TEST(Significand, AlwaysInRange) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> e(-30.0, 30.0);
  for (double b : {2.0, 10.0, 7.5})
    for (int i = 0; i < 2000; ++i) {
      const double s = significand(std::pow(10.0, e(rng)), b);
      EXPECT_GE(s, 1.0);
      EXPECT_LT(s, b);
    }
}

TEST(FiniteToDist, StepFunction) {
  const Interval s(1.0, 10.0);
  const Dist d3 = finite_to_dist(FiniteMeasure({3.0}, {1.0}), s);
  EXPECT_EQ(d3.cdf(3.0), 1.0);
  EXPECT_EQ(d3.cdf_left(3.0), 0.0);
  const Dist d = finite_to_dist(FiniteMeasure({2.0, 5.0}, {0.5, 0.5}), s);
  EXPECT_EQ(d.quantile(0.5), 5.0);
  EXPECT_EQ(d.quantile(0.49), 2.0);
  EXPECT_EQ(d.cdf_left(5.0), 0.5);
}

TEST(Mixture, QuantileAtMassOnLowerEnd) {
  const Dist mu = mixture(Interval(0.0, 1.0), {{0.0, 0.75}}, {{0.0, 1.0, 0.25}});
  EXPECT_EQ(mu.quantile(0.0), 0.0);
  EXPECT_EQ(mu.quantile(0.7), 0.0);
  EXPECT_NEAR(mu.quantile(0.875), 0.5, 1e-15);
  EXPECT_EQ(mu.cdf(0.0), 0.75);
  EXPECT_EQ(mu.cdf_left(0.0), 0.0);
}

TEST(FiniteMeasure, Validation) {
  EXPECT_THROW(FiniteMeasure({1.0, 2.0}, {0.5, 0.6}), InvalidInput);
  EXPECT_THROW(FiniteMeasure({2.0, 1.0}, {0.5, 0.5}), InvalidInput);
  EXPECT_THROW(FiniteMeasure({1.0}, {1.0, 0.0}), InvalidInput);
  EXPECT_NO_THROW(FiniteMeasure({1.0, 2.0}, {0.5, 0.5 + 5e-13}));
  const FiniteMeasure m({1.0, 1.0, 2.0}, {0.25, 0.25, 0.5});
  EXPECT_FALSE(m.distinct_positions());
  EXPECT_EQ(m.merged().size(), 2u);
  EXPECT_EQ(m.P().back(), 1.0);
}

class DistInvariants : public ::testing::TestWithParam<int> {
 protected:
  static Dist make(int k) {
    switch (k) {
      case 0: return benford(10.0);
      case 1: return benford(2.0);
      case 2: return beta21();
      case 3: return inverse_cantor(12);
      case 4: return exponential();
      case 5: return mixture(Interval(0.0, 1.0), {{0.0, 0.75}}, {{0.0, 1.0, 0.25}});
      default: return finite_to_dist(FiniteMeasure({1.5, 2.0, 2.0, 7.0}, {0.25, 0.25, 0.25, 0.25}),
                                     Interval(1.0, 10.0));
    }
  }
};

TEST_P(DistInvariants, OneSidedLimitsAndAtoms) {
  const Dist mu = make(GetParam());
  const Interval s = mu.support();
  const double hi = s.bounded() ? s.hi : 20.0;
  double prev = 0.0, prev_left = 0.0;
  for (int k = 0; k <= 4000; ++k) {
    const double x = s.lo - 0.5 + (hi - s.lo + 1.0) * k / 4000.0;
    const double F = mu.cdf(x), Fl = mu.cdf_left(x);
    EXPECT_LE(Fl, F + 1e-15);
    EXPECT_GE(F, prev - 1e-15);
    EXPECT_GE(Fl, prev_left - 1e-15);
    EXPECT_NEAR(F - Fl, mu.atom_mass(x), 1e-12) << x;
    prev = F;
    prev_left = Fl;
  }
  if (mu.has_atoms()) {
    for (const auto& a : mu.atoms()) EXPECT_NEAR(mu.cdf(a.position) - mu.cdf_left(a.position), a.mass, 1e-12);
  }
}

TEST_P(DistInvariants, GaloisRelation) {
  const Dist mu = make(GetParam());
  for (int k = 0; k < 1000; ++k) {
    const double y = (k + 0.5) / 1000.0;
    const double q = mu.quantile(y);
    EXPECT_GE(mu.cdf(q), y - 1e-12) << y;
    EXPECT_LE(mu.cdf_left(q), y + 1e-12) << y;
    EXPECT_LE(mu.quantile_left(y), q);
  }
}

INSTANTIATE_TEST_SUITE_P(All, DistInvariants, ::testing::Range(0, 7));

TEST(Inversion, ContinuousStrictlyIncreasing) {
  for (const Dist& mu : {benford(10.0), beta21(), exponential()}) {
    const Interval s = mu.support();
    const double hi = s.bounded() ? s.hi : 10.0;  // 1 - F(x) cancels beyond this
    for (int k = 1; k < 500; ++k) {
      const double x = s.lo + (hi - s.lo) * k / 500.0;
      EXPECT_NEAR(mu.quantile(mu.cdf(x)), x, 1e-9 * std::max(1.0, x)) << mu.name();
      const double y = k / 500.0;
      EXPECT_NEAR(mu.cdf(mu.quantile(y)), y, 1e-12) << mu.name();
    }
  }
}

TEST(PowerPushforward, BenfordGoesToBaseToTheR) {
  for (double r : {1.0, 2.0, 3.5}) {
    const Dist pushed = power_pushforward(benford(10.0), r);
    const Dist target = benford(std::pow(10.0, r));
    EXPECT_NEAR(pushed.support().hi, std::pow(10.0, r), 1e-9);
    for (int k = 0; k <= 200; ++k) {
      const double z = 1.0 + (std::pow(10.0, r) - 1.0) * k / 200.0;
      EXPECT_NEAR(pushed.cdf(z), target.cdf(z), 1e-12) << r << " " << z;
    }
  }
}
