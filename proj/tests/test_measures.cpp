#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "wproj/ball_geometry.hpp"
#include "wproj/discretize.hpp"
#include "wproj/error.hpp"
#include "wproj/measures.hpp"

namespace wproj {
namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no wproj::Error thrown";
  return ErrorCode::ParseError;
}

TEST(DiscreteMeasure, NormalizesWeights) {
  const auto m = DiscreteMeasure::create({{0.0}, {1.0}}, {1.0, 1.0});
  ASSERT_EQ(m.size(), 2u);
  EXPECT_DOUBLE_EQ(m.weight(0), 0.5);
  EXPECT_DOUBLE_EQ(m.weight(1), 0.5);
}

TEST(DiscreteMeasure, SingleAtomGetsUnitWeight) {
  const auto m = DiscreteMeasure::create({{0.0, 0.0}}, {3.0});
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.dim(), 2);
  EXPECT_DOUBLE_EQ(m.weight(0), 1.0);
}

TEST(DiscreteMeasure, DropsZeroWeights) {
  const auto m = DiscreteMeasure::create({{0.0}, {1.0}}, {1.0, 0.0});
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.point(0)[0], 0.0);
}

TEST(DiscreteMeasure, RejectsBadInput) {
  EXPECT_EQ(code_of([] { DiscreteMeasure::create({{0.0}}, {0.0}); }), ErrorCode::EmptySupport);
  EXPECT_EQ(code_of([] { DiscreteMeasure::create({{0.0}, {1.0, 2.0}}, {1.0, 1.0}); }), ErrorCode::DimMismatch);
  EXPECT_EQ(code_of([] { DiscreteMeasure::create({{0.0}, {1.0}}, {1.0, -1.0}); }), ErrorCode::InvalidMeasure);
}

TEST(DiscreteMeasure, WeightsSumToOne) {
  std::vector<Point> pts;
  std::vector<double> w;
  for (int i = 0; i < 97; ++i) {
    pts.push_back({0.1 * i});
    w.push_back(1.0 + std::sin(i));
  }
  const auto m = DiscreteMeasure::create(pts, w);
  double s = 0.0;
  for (double x : m.weights()) s += x;
  EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(Barycenter, Examples) {
  EXPECT_DOUBLE_EQ(barycenter(DiscreteMeasure::create({{0.0}, {1.0}}, {1.0, 1.0}))[0], 0.5);
  const auto b = barycenter(DiscreteMeasure::dirac({2.0, 3.0}));
  EXPECT_DOUBLE_EQ(b[0], 2.0);
  EXPECT_DOUBLE_EQ(b[1], 3.0);
  const auto grid = GridSpec::centered({0.0, 0.0}, 1.0, 0.25);
  const std::vector<double> mass(grid.cell_count(), 1.0 / static_cast<double>(grid.cell_count()));
  const auto g = GridMeasure::create(grid, mass, 1.0, false);
  const auto c = barycenter(g);
  EXPECT_NEAR(c[0], 0.0, 1e-15);
  EXPECT_NEAR(c[1], 0.0, 1e-15);
}

TEST(Translate, ShiftsSupportAndBarycenter) {
  const auto d = translate(DiscreteMeasure::dirac({0.0}), std::vector<double>{1.0});
  EXPECT_DOUBLE_EQ(d.point(0)[0], 1.0);
  const auto m = DiscreteMeasure::create({{0.0, 1.0}, {2.0, -1.0}, {0.5, 0.5}}, {0.2, 0.3, 0.5});
  const std::vector<double> h{0.7, -1.3};
  const auto t = translate(m, h);
  const auto b0 = barycenter(m);
  const auto b1 = barycenter(t);
  EXPECT_NEAR(b1[0], b0[0] + h[0], 1e-15);
  EXPECT_NEAR(b1[1], b0[1] + h[1], 1e-15);
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_EQ(t.weight(i), m.weight(i));
  const auto same = translate(m, std::vector<double>{0.0, 0.0});
  EXPECT_EQ(same.coords(), m.coords());
}

TEST(GridSpec, LocateAndCenters) {
  const GridSpec g{{-1.0, 0.0}, {0.5, 0.25}, {4, 3}};
  EXPECT_EQ(g.cell_count(), 12u);
  EXPECT_DOUBLE_EQ(g.cell_volume(), 0.125);
  // Last axis fastest.
  const auto c = g.cell_center(1);
  EXPECT_DOUBLE_EQ(c[0], -0.75);
  EXPECT_DOUBLE_EQ(c[1], 0.375);
  EXPECT_EQ(g.locate(std::vector<double>{-0.75, 0.375}), std::optional<std::size_t>(1));
  EXPECT_EQ(g.locate(std::vector<double>{-1.0, 0.0}), std::optional<std::size_t>(0));
  EXPECT_FALSE(g.locate(std::vector<double>{1.0, 0.1}).has_value());  // half-open upper face
  for (std::size_t j = 0; j < g.cell_count(); ++j) EXPECT_EQ(g.locate(g.cell_center(j)), std::optional(j));
}

TEST(GridMeasure, EnforcesCapWhenClaimingMembership) {
  const GridSpec g{{0.0}, {0.5}, {2}};
  EXPECT_NO_THROW(GridMeasure::create(g, {0.5, 0.5}, 1.0, true));
  EXPECT_EQ(code_of([&] { GridMeasure::create(g, {0.8, 0.2}, 1.0, true); }), ErrorCode::InvalidMeasure);
  EXPECT_NO_THROW(GridMeasure::create(g, {0.8, 0.2}, 1.0, false));
  EXPECT_EQ(code_of([&] { GridMeasure::create(g, {0.5, 0.4}, 1.0, false); }), ErrorCode::InvalidMeasure);
  EXPECT_LE(GridMeasure::create(g, {0.5, 0.5}, 1.0, true).max_density(), 1.0 + 1e-9);
}

TEST(GridMeasure, ToDiscreteKeepsOccupiedCells) {
  const GridSpec g{{0.0}, {1.0}, {3}};
  const auto m = GridMeasure::create(g, {0.25, 0.0, 0.75}, 1.0, true).to_discrete();
  ASSERT_EQ(m.size(), 2u);
  EXPECT_DOUBLE_EQ(m.point(0)[0], 0.5);
  EXPECT_DOUBLE_EQ(m.point(1)[0], 2.5);
  EXPECT_DOUBLE_EQ(m.weight(1), 0.75);
}

TEST(BallUnion, ValidatesMassAndOverlap) {
  const double r = rad_ball(2, 0.5);
  EXPECT_NO_THROW(BallUnionMeasure::create({{0.0, 0.0}, {2.0 * r, 0.0}}, {r, r}, 1.0));
  EXPECT_EQ(code_of([&] { BallUnionMeasure::create({{0.0, 0.0}, {r, 0.0}}, {r, r}, 1.0); }), ErrorCode::OverlapError);
  EXPECT_EQ(code_of([&] { BallUnionMeasure::create({{0.0, 0.0}}, {r}, 1.0); }), ErrorCode::InvalidMeasure);
}

TEST(BallUnion, MassOfBallsSumsToOne) {
  const double r = rad_ball(3, 0.25);
  const double R = rad_ball(3, 0.75);
  const auto b = BallUnionMeasure::create({{0.0, 0.0, 0.0}, {5.0, 0.0, 0.0}}, {r, R}, 1.0);
  EXPECT_NEAR(b.mass_of_ball(0), 0.25, 1e-14);
  EXPECT_NEAR(b.mass_of_ball(0) + b.mass_of_ball(1), 1.0, 1e-14);
  EXPECT_TRUE(b.contains(std::vector<double>{5.0 + 0.9 * R, 0.0, 0.0}));
  EXPECT_FALSE(b.contains(std::vector<double>{2.5, 0.0, 0.0}));
}

TEST(Discretize, UnitIntervalIsUniform) {
  const auto ball = BallUnionMeasure::create({{0.0}}, {0.5}, 1.0);
  const GridSpec g{{-0.5}, {0.01}, {100}};
  const auto out = discretize_ball_union(ball, g);
  double total = 0.0;
  for (double m : out.measure.cell_mass()) {
    EXPECT_NEAR(m, 0.01, 1e-12);
    total += m;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(out.raw_mass, 1.0, 1e-12);
}

TEST(Discretize, BallInsideOneCell) {
  const double r = rad_ball(2, 1.0 / 50.0);  // density 50
  const auto ball = BallUnionMeasure::create({{0.5, 0.5}}, {r}, 50.0);
  const GridSpec g{{0.0, 0.0}, {1.0, 1.0}, {1, 1}};
  DiscretizeOptions opt;
  opt.subsamples = 41;
  EXPECT_EQ(code_of([&] { discretize_ball_union(ball, g, opt); }), ErrorCode::GridTooCoarse);
  opt.check_resolution = false;
  const auto out = discretize_ball_union(ball, g, opt);
  EXPECT_DOUBLE_EQ(out.measure.cell_mass()[0], 1.0);
}

TEST(Discretize, RawMassOfCounterexampleSigma) {
  const double radius = rad_ball(2, 1.0);
  const auto sigma = BallUnionMeasure::create({{0.0, 0.0}}, {radius}, 1.0);
  const auto out = discretize_ball_union(sigma, covering_grid(sigma, 0.02));
  EXPECT_NEAR(out.raw_mass, 1.0, 0.01);
}

// Midpoint volume error shrinks at least by half when the spacing halves.
TEST(Discretize, RawMassConvergesUnderRefinement) {
  for (int d = 1; d <= 3; ++d) {
    const double radius = rad_ball(d, 1.0);
    const auto ball = BallUnionMeasure::create({Point(static_cast<std::size_t>(d), 0.013)}, {radius}, 1.0);
    const double coarse = 0.1;
    const double e1 = std::abs(discretize_ball_union(ball, covering_grid(ball, coarse)).raw_mass - 1.0);
    const double e2 = std::abs(discretize_ball_union(ball, covering_grid(ball, coarse / 2)).raw_mass - 1.0);
    EXPECT_LE(e2, 0.5 * e1 + 1e-12) << "d=" << d << " errors " << e1 << " " << e2;
  }
}

TEST(Discretize, RequiresCoverage) {
  const auto ball = BallUnionMeasure::create({{0.0}}, {0.5}, 1.0);
  EXPECT_EQ(code_of([&] { discretize_ball_union(ball, GridSpec{{0.0}, {0.01}, {100}}); }), ErrorCode::InvalidSpec);
}

TEST(SampleBallUnion, DeterministicAndInside) {
  const double r = rad_ball(2, 0.5);
  const auto b = BallUnionMeasure::create({{0.0, 0.0}, {2.0 * r, 0.0}}, {r, r}, 1.0);
  const auto one = sample_ball_union(b, 1, 7);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_TRUE(b.contains(one.point(0)));
  const auto a1 = sample_ball_union(b, 500, 42);
  const auto a2 = sample_ball_union(b, 500, 42);
  EXPECT_EQ(a1.coords(), a2.coords());
  for (std::size_t i = 0; i < a1.size(); ++i) EXPECT_TRUE(b.contains(a1.point(i)));
}

TEST(SampleBallUnion, BarycenterOfLargeSample) {
  const Point c{1.0, -2.0, 0.5};
  const double r = rad_ball(3, 1.0);
  const auto b = BallUnionMeasure::create({c}, {r}, 1.0);
  const auto s = sample_ball_union(b, 100000, 3);
  const auto m = barycenter(s);
  for (std::size_t a = 0; a < 3; ++a) EXPECT_NEAR(m[a], c[a], 0.01 * r);
}

}  // namespace
}  // namespace wproj
