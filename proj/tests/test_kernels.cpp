#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wproj/ball_geometry.hpp"
#include "wproj/kernels.hpp"

namespace wproj::kernels {
namespace {

std::vector<double> random_coords(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

TEST(Kernels, CostMatrixParallelMatchesSerial) {
  std::mt19937_64 rng(1);
  const int dim = 3;
  const auto a = random_coords(57 * dim, rng);
  const auto b = random_coords(43 * dim, rng);
  for (double p : {1.0, 1.37, 2.0, 3.0}) {
    std::vector<double> x(57 * 43), y(57 * 43);
    cost_matrix(a, b, dim, p, x);
    cost_matrix_serial(a, b, dim, p, y);
    EXPECT_EQ(x, y);
    EXPECT_NEAR(y[44], std::pow(std::sqrt(squared_distance(std::span(a).subspan(3, 3), std::span(b).subspan(3, 3))), p), 1e-15);
  }
}

TEST(Kernels, CellAveragedCostParallelMatchesSerial) {
  std::mt19937_64 rng(2);
  const auto src = random_coords(5 * 2, rng);
  const auto grid = GridSpec::centered({0.0, 0.0}, 1.0, 0.1);
  for (double p : {1.5, 2.0}) {
    std::vector<double> x(5 * grid.cell_count()), y(x.size());
    cell_averaged_cost(src, grid, p, 4, x);
    cell_averaged_cost_serial(src, grid, p, 4, y);
    EXPECT_EQ(x, y);
  }
}

TEST(Kernels, CellAveragedCostAtPEquals2IsExact) {
  // Mean of |x - y|^2 over y in the cell [0, 1)^2 from x = 0 is 2/3.
  const GridSpec grid{{0.0, 0.0}, {1.0, 1.0}, {1, 1}};
  const std::vector<double> src{0.0, 0.0};
  std::vector<double> out(1);
  cell_averaged_cost(src, grid, 2.0, 1, out);
  EXPECT_NEAR(out[0], 2.0 / 3.0, 1e-15);
  // Midpoint rule with many subsamples approaches the p = 1 mean 0.7652 (mean distance in the unit square from a corner).
  cell_averaged_cost(src, grid, 1.0, 200, out);
  EXPECT_NEAR(out[0], (std::sqrt(2.0) + std::log(1.0 + std::sqrt(2.0))) / 3.0, 1e-5);
}

TEST(Kernels, CellHitsParallelMatchesSerial) {
  const double r = rad_ball(2, 0.5);
  const auto balls = BallUnionMeasure::create({{0.0, 0.0}, {2.0 * r, 0.0}}, {r, r}, 1.0);
  const GridSpec grid = GridSpec::from_bounds({-0.5, -0.5}, {1.3, 0.5}, {45, 25});
  std::vector<std::uint32_t> a(grid.cell_count()), b(grid.cell_count());
  count_cell_hits(grid, balls, 5, a);
  count_cell_hits_serial(grid, balls, 5, b);
  EXPECT_EQ(a, b);
}

TEST(Kernels, ShellCountIndependentOfThreads) {
  const CylinderShell shell{0.3, 0.2, 0.5};
  const auto a = count_ball_samples_in_shell(3, 0.7, shell, 200000, 11);
  const auto b = count_ball_samples_in_shell_serial(3, 0.7, shell, 200000, 11);
  EXPECT_EQ(a, b);
  EXPECT_GT(a, 0u);
  EXPECT_NE(a, count_ball_samples_in_shell(3, 0.7, shell, 200000, 12));
}

TEST(Kernels, UniformInBallStaysInside) {
  std::mt19937_64 rng(3);
  std::vector<double> x(5);
  double mean_sq = 0.0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    uniform_in_ball(rng, 5, 2.0, x);
    double s = 0.0;
    for (double c : x) s += c * c;
    ASSERT_LE(s, 4.0 + 1e-12);
    mean_sq += s / n;
  }
  EXPECT_NEAR(mean_sq, 5.0 / 7.0 * 4.0, 0.02);  // E|X|^2 = d r^2 / (d + 2)
}

}  // namespace
}  // namespace wproj::kernels
