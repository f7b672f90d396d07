#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "wproj/error.hpp"
#include "wproj/proj1d.hpp"

namespace wproj {
namespace {

std::vector<double> random_monotone(std::mt19937_64& rng, std::size_t n, double scale) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> q(n);
  double acc = -scale * static_cast<double>(n) / 4.0;
  for (auto& v : q) {
    acc += scale * e(rng) * (e(rng) < 0.5 ? 0.0 : 1.0);  // repeated values mimic atoms
    v = acc;
  }
  return q;
}

// Hildreth's dual coordinate ascent for min sum (x - q)^2 s.t. x_{k+1} - x_k >= c.
std::vector<double> hildreth(const std::vector<double>& q, double c, int sweeps = 200000) {
  const std::size_t n = q.size();
  std::vector<double> mu(n - 1, 0.0), x = q;
  for (int s = 0; s < sweeps; ++s) {
    double change = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      // x = q + D^T mu with row k of D = e_k - e_{k+1}, so x_k += mu_k, x_{k+1} -= mu_k.
      const double violation = c - (x[k + 1] - x[k]);
      const double next = std::max(0.0, mu[k] + violation / 2.0);
      const double delta = next - mu[k];
      mu[k] = next;
      x[k] -= delta;
      x[k + 1] += delta;
      change = std::max(change, std::abs(delta));
    }
    if (change < 1e-15) break;
  }
  return x;
}

// Lagrange multipliers recovered from the gradient of sum |x - q|^p / n must be
// nonnegative, vanish at slack constraints and close to zero at the end.
struct Kkt {
  double worst_sign = 0.0;
  double worst_complementarity = 0.0;
  double end_residual = 0.0;
};

Kkt kkt(const std::vector<double>& x, const std::vector<double>& q, double p, double lambda) {
  const std::size_t n = x.size();
  const double c = 1.0 / (lambda * static_cast<double>(n));
  Kkt k;
  double mu = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = x[i] - q[i];
    const double g = p * std::pow(std::abs(r), p - 1.0) * (r > 0 ? 1.0 : r < 0 ? -1.0 : 0.0) / static_cast<double>(n);
    scale = std::max(scale, std::abs(g));
    mu -= g;
    if (i + 1 == n) break;
    k.worst_sign = std::max(k.worst_sign, -mu);
    const double gap = x[i + 1] - x[i] - c;
    k.worst_complementarity = std::max(k.worst_complementarity, std::abs(mu) * gap);
  }
  k.end_residual = std::abs(mu);
  return k;
}

double objective(const std::vector<double>& x, const std::vector<double>& q, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i] - q[i]), p);
  return s / static_cast<double>(x.size());
}

TEST(ProjectionOracle, ZeroInputFourSamples) {
  const std::vector<double> q(4, 0.0);
  const auto x = brute_force_projection_oracle(q, 2.0, 1.0);
  const std::vector<double> expected{-0.375, -0.125, 0.125, 0.375};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(x[i], expected[i], 1e-15);
  const auto fit = project_samples(q, 2.0, 1.0);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(fit.x[i], expected[i], 1e-15);
}

TEST(ProjectionOracle, FeasibleInputIsFixed) {
  const std::vector<double> q{0.0, 0.3, 0.9, 1.2, 5.0};
  for (double p : {1.5, 2.0, 3.0}) {
    const auto x = brute_force_projection_oracle(q, p, 1.0);
    for (std::size_t i = 0; i < q.size(); ++i) EXPECT_NEAR(x[i], q[i], 1e-12);
  }
}

TEST(ProjectionOracle, SizeLimit) {
  const std::vector<double> q(26, 0.0);
  try {
    brute_force_projection_oracle(q, 2.0, 1.0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SizeLimit);
  }
}

TEST(ProjectionOracle, AgreesWithHildrethAtPEquals2) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 20;
    const auto q = random_monotone(rng, n, 0.05);
    const double lambda = 0.5 + 0.1 * (trial % 10);
    const auto a = brute_force_projection_oracle(q, 2.0, lambda);
    const auto b = hildreth(q, 1.0 / (lambda * static_cast<double>(n)));
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(a[i], b[i], 1e-10) << trial;
  }
}

TEST(ProjectSamples, AgreesWithOracleOnRandomInputs) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 24;
    const auto q = random_monotone(rng, n, 0.08);
    const double p = std::array{1.2, 1.5, 2.0, 2.5, 4.0}[static_cast<std::size_t>(trial) % 5];
    const auto fit = project_samples(q, p, 1.0);
    const auto oracle = brute_force_projection_oracle(q, p, 1.0);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(fit.x[i], oracle[i], 1e-6) << trial << " p=" << p;
    EXPECT_LE(objective(fit.x, q, p), objective(oracle, q, p) + 1e-12);
  }
}

TEST(ProjectSamples, SatisfiesKkt) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 50 + static_cast<std::size_t>(trial) * 7;
    const auto q = random_monotone(rng, n, 0.3 / static_cast<double>(n));
    const double p = std::array{1.3, 2.0, 3.0}[static_cast<std::size_t>(trial) % 3];
    const double lambda = 0.7;
    const auto fit = project_samples(q, p, lambda);
    const double c = 1.0 / (lambda * static_cast<double>(n));
    for (std::size_t i = 0; i + 1 < n; ++i) ASSERT_GE(fit.x[i + 1] - fit.x[i], c - 1e-9);
    const auto k = kkt(fit.x, q, p, lambda);
    EXPECT_LE(k.worst_sign, 1e-9) << trial;
    EXPECT_LE(k.worst_complementarity, 1e-9) << trial;
    EXPECT_LE(k.end_residual, 1e-9) << trial;
  }
}

TEST(ProjectSamples, PoolStartsPartitionTheIndices) {
  const std::vector<double> q{0.0, 0.0, 0.0, 1.0, 1.0, 3.0};
  const auto fit = project_samples(q, 2.0, 1.0);
  ASSERT_FALSE(fit.pool_starts.empty());
  EXPECT_EQ(fit.pool_starts.front(), 0u);
  EXPECT_TRUE(std::is_sorted(fit.pool_starts.begin(), fit.pool_starts.end()));
  EXPECT_LT(fit.pool_starts.back(), q.size());
  // Inside a pool every constraint is active.
  const double c = 1.0 / 6.0;
  for (std::size_t b = 0; b < fit.pool_starts.size(); ++b) {
    const std::size_t end = b + 1 < fit.pool_starts.size() ? fit.pool_starts[b + 1] : q.size();
    for (std::size_t i = fit.pool_starts[b]; i + 1 < end; ++i) EXPECT_NEAR(fit.x[i + 1] - fit.x[i], c, 1e-12);
  }
}

TEST(ProjectSamples, MeanPreservedAndNonexpansiveAtPEquals2) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 200;
    const auto q1 = random_monotone(rng, n, 0.01);
    const auto q2 = random_monotone(rng, n, 0.01);
    const auto x1 = project_samples(q1, 2.0, 1.0).x;
    const auto x2 = project_samples(q2, 2.0, 1.0).x;
    double m = 0.0, dx = 0.0, dq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      m += (x1[i] - q1[i]) / static_cast<double>(n);
      dx += (x1[i] - x2[i]) * (x1[i] - x2[i]);
      dq += (q1[i] - q2[i]) * (q1[i] - q2[i]);
    }
    EXPECT_LE(std::abs(m), 1e-9);
    EXPECT_LE(std::sqrt(dx), std::sqrt(dq) + 1e-9);
  }
}

TEST(ProjectSamples, Idempotent) {
  std::mt19937_64 rng(23);
  for (double p : {1.5, 2.0, 3.0}) {
    const auto q = random_monotone(rng, 300, 0.002);
    const auto x = project_samples(q, p, 1.0).x;
    const auto y = project_samples(x, p, 1.0).x;
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(x[i], y[i], 1e-9);
  }
}

TEST(ProjectQuantile, UniformIsFixed) {
  ProjectionSpec1D spec;
  const auto out = project_quantile(QuantileFn::uniform(0.0, 1.0), spec);
  for (double t : {0.0, 0.1, 0.5, 0.77, 1.0}) EXPECT_NEAR(out(t), t, 1e-12);
}

TEST(ProjectQuantile, DiracSpreadsToUnitInterval) {
  ProjectionSpec1D spec;
  const auto out = project_quantile_of(DiscreteMeasure::dirac({0.0}), spec);
  for (double t : {0.0, 0.25, 0.5, 0.9, 1.0}) EXPECT_NEAR(out(t), t - 0.5, 1e-12);
  EXPECT_NEAR(quantile_distance_pow(out, QuantileFn::of(DiscreteMeasure::dirac({0.0})), 2.0), 1.0 / 12.0, 1e-12);
}

TEST(ProjectQuantile, DensityTwoBecomesUnitDensity) {
  ProjectionSpec1D spec;
  const auto out = project_quantile(QuantileFn::uniform(0.0, 0.5), spec);
  for (double t : {0.0, 0.3, 0.5, 1.0}) EXPECT_NEAR(out(t), t - 0.25, 1e-12);
  EXPECT_NEAR(out.mean(), 0.25, 1e-12);
}

TEST(ProjectQuantile, SlopeBoundAndIdempotence) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point> pts;
    std::vector<double> w;
    for (int i = 0; i < 1 + trial % 8; ++i) {
      pts.push_back({u(rng)});
      w.push_back(u(rng) + 0.1);
    }
    for (double p : {1.5, 2.0, 3.0}) {
      ProjectionSpec1D spec;
      spec.p = CostExponent(p);
      spec.lambda = 1.5;
      spec.n = 512;
      const auto once = project_quantile_of(DiscreteMeasure::create(pts, w), spec);
      EXPECT_GE(once.min_slope(), 1.0 / spec.lambda - 1e-9);
      const auto twice = project_quantile(once, spec);
      for (std::size_t i = 0; i <= 100; ++i) {
        const double t = static_cast<double>(i) / 100.0;
        EXPECT_NEAR(once(t), twice(t), 1e-9) << trial << " p=" << p;
      }
    }
  }
}

TEST(ProjectQuantile, RejectsInvalidSpec) {
  ProjectionSpec1D spec;
  spec.p = CostExponent(1.0);
  EXPECT_THROW(project_quantile(QuantileFn::uniform(0.0, 1.0), spec), Error);
  spec = {};
  spec.n = 1;
  EXPECT_THROW(project_quantile(QuantileFn::uniform(0.0, 1.0), spec), Error);
  spec = {};
  spec.lambda = 0.0;
  EXPECT_THROW(project_quantile(QuantileFn::uniform(0.0, 1.0), spec), Error);
}

TEST(ProjectMeasure1d, DiracGivesUnitDensityCells) {
  ProjectionSpec1D spec;
  const auto g = project_measure_1d(DiscreteMeasure::dirac({0.0}), spec);
  EXPECT_TRUE(g.claims_membership());
  EXPECT_LE(g.max_density(), 1.0 + 1e-9);
  EXPECT_NEAR(barycenter(g)[0], 0.0, 1e-9);
  double total = 0.0;
  for (double m : g.cell_mass()) total += m;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(ProjectMeasure1d, BarycenterPreserved) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Point> pts;
    std::vector<double> w;
    for (int i = 0; i < 1 + trial % 10; ++i) {
      pts.push_back({u(rng)});
      w.push_back(u(rng) + 2.5);
    }
    const auto mu = DiscreteMeasure::create(pts, w);
    ProjectionSpec1D spec;
    spec.n = 1024;
    EXPECT_NEAR(project_quantile_of(mu, spec).mean(), barycenter(mu)[0], 1e-9);
  }
}

TEST(ProjectMeasure1d, UniformMeasureAtResolution) {
  // Atoms at cell midpoints of [0, 1): the projection is uniform on [0, 1].
  std::vector<Point> pts;
  for (int i = 0; i < 64; ++i) pts.push_back({(i + 0.5) / 64.0});
  const auto mu = DiscreteMeasure::create(pts, std::vector<double>(64, 1.0));
  ProjectionSpec1D spec;
  spec.n = 64;
  const auto q = project_quantile_of(mu, spec);
  for (double t : {0.0, 0.5, 1.0}) EXPECT_NEAR(q(t), t, 1e-12);
}

}  // namespace
}  // namespace wproj
