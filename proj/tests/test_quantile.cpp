#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wproj/error.hpp"
#include "wproj/quantile.hpp"

namespace wproj {
namespace {

// Midpoint quadrature of |Qa - Qb|^p, the slow reference.
double quadrature_distance(const QuantileFn& a, const QuantileFn& b, double p, int n = 400000) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) / n;
    s += std::pow(std::abs(a(t) - b(t)), p);
  }
  return s / n;
}

TEST(QuantileFn, OfDiscreteMeasure) {
  const auto q = QuantileFn::of(DiscreteMeasure::create({{2.0}, {0.0}, {1.0}}, {0.25, 0.5, 0.25}));
  EXPECT_EQ(q.mode(), QuantileFn::Mode::Step);
  EXPECT_DOUBLE_EQ(q(0.0), 0.0);
  EXPECT_DOUBLE_EQ(q(0.49), 0.0);
  EXPECT_DOUBLE_EQ(q(0.5), 1.0);  // right-continuous
  EXPECT_DOUBLE_EQ(q(0.8), 2.0);
  EXPECT_DOUBLE_EQ(q(1.0), 2.0);
  EXPECT_NEAR(q.mean(), 0.75, 1e-15);
}

TEST(QuantileFn, UniformAndShift) {
  const auto u = QuantileFn::uniform(-1.0, 3.0);
  EXPECT_DOUBLE_EQ(u(0.25), 0.0);
  EXPECT_NEAR(u.mean(), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(u.min_slope(), 4.0);
  EXPECT_DOUBLE_EQ(u.cdf(0.0), 0.25);
  EXPECT_DOUBLE_EQ(u.cdf(-5.0), 0.0);
  EXPECT_DOUBLE_EQ(u.cdf(5.0), 1.0);
  EXPECT_NEAR(u.shifted(0.5).mean(), 1.5, 1e-15);
}

TEST(QuantileFn, CellAveragesIntegrateExactly) {
  const auto q = QuantileFn::linear({0.0, 0.3, 0.3, 1.0}, {0.0, 0.3, 2.0, 4.0});
  const auto c = q.cell_averages(10);
  ASSERT_EQ(c.size(), 10u);
  double sum = 0.0;
  for (double v : c) sum += v / 10.0;
  EXPECT_NEAR(sum, q.mean(), 1e-14);
  EXPECT_NEAR(q.mean(), 0.3 * 0.15 + 0.7 * 3.0, 1e-14);
  EXPECT_NEAR(c[0], 0.05, 1e-14);
  // Jump at 0.3: Q is 2.0 just after.
  EXPECT_NEAR(q(0.3), 2.0, 1e-14);
  EXPECT_NEAR(q.cdf(1.0), 0.3, 1e-14);
}

TEST(QuantileFn, RejectsBadBreakpoints) {
  EXPECT_THROW(QuantileFn::step({0.0, 0.5}, {1.0}), Error);
  EXPECT_THROW(QuantileFn::linear({0.0, 1.0}, {1.0, 0.0}), Error);
  EXPECT_THROW(QuantileFn::step({0.0, 0.7, 0.5, 1.0}, {1.0, 2.0, 3.0}), Error);
}

TEST(IntegrateAbsLinearPow, SignChange) {
  EXPECT_NEAR(integrate_abs_linear_pow(-1.0, 1.0, 2.0, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(integrate_abs_linear_pow(-1.0, 1.0, 1.0, 2.0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(integrate_abs_linear_pow(2.0, 2.0, 0.5, 3.0), 4.0, 1e-15);
  EXPECT_NEAR(integrate_abs_linear_pow(0.0, 3.0, 1.0, 1.5), std::pow(3.0, 1.5) / 2.5, 1e-14);
}

TEST(QuantileDistance, MatchesQuadrature) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<Point> pts;
    std::vector<double> w;
    for (int i = 0; i < 5; ++i) {
      pts.push_back({u(rng) * 3.0});
      w.push_back(u(rng) + 0.1);
    }
    const auto a = QuantileFn::of(DiscreteMeasure::create(pts, w));
    const auto b = QuantileFn::linear({0.0, 0.2, 0.6, 0.6, 1.0}, {-1.0, 0.5, 1.0, 2.5, 3.0});
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      EXPECT_NEAR(quantile_distance_pow(a, b, p), quadrature_distance(a, b, p), 1e-5) << trial << " p=" << p;
      EXPECT_NEAR(quantile_distance_pow(a, b, p), quantile_distance_pow(b, a, p), 1e-14);
    }
  }
}

}  // namespace
}  // namespace wproj
