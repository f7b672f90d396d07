#include "wproj/discretize.hpp"

#include <cmath>
#include <random>

#include "wproj/error.hpp"
#include "wproj/kernels.hpp"

namespace wproj {

DiscretizedBallUnion discretize_ball_union(const BallUnionMeasure& balls, const GridSpec& grid,
                                           const DiscretizeOptions& options) {
  grid.validate();
  if (grid.dim() != balls.dim()) throw Error(ErrorCode::DimMismatch, "grid and ball union differ in dim");
  if (options.subsamples < 1) throw Error(ErrorCode::InvalidSpec, "subsamples must be >= 1");
  const auto d = static_cast<std::size_t>(grid.dim());
  for (std::size_t i = 0; i < balls.centers().size(); ++i) {
    const double r = balls.radii()[i];
    for (std::size_t a = 0; a < d; ++a) {
      if (options.check_resolution && 2.0 * r < 2.0 * grid.spacing[a]) {
        throw Error(ErrorCode::GridTooCoarse, "ball diameter below two grid spacings");
      }
      const double lo = grid.origin[a];
      const double hi = lo + grid.spacing[a] * static_cast<double>(grid.shape[a]);
      const double c = balls.centers()[i][a];
      if (c - r < lo || c + r > hi) throw Error(ErrorCode::InvalidSpec, "grid does not cover the ball union");
    }
  }

  std::vector<std::uint32_t> hits(grid.cell_count());
  kernels::count_cell_hits(grid, balls, options.subsamples, hits);

  double per_cell = 1.0;
  for (std::size_t a = 0; a < d; ++a) per_cell *= options.subsamples;
  const double unit = balls.lambda() * grid.cell_volume() / per_cell;
  std::vector<double> mass(hits.size());
  double raw = 0.0;
  for (std::size_t j = 0; j < hits.size(); ++j) {
    mass[j] = unit * hits[j];
    raw += mass[j];
  }
  if (!(raw > 0.0)) throw Error(ErrorCode::GridTooCoarse, "no subsample fell inside the ball union");
  for (double& m : mass) m /= raw;
  return {GridMeasure::create(grid, std::move(mass), balls.lambda(), false), raw};
}

DiscreteMeasure sample_ball_union(const BallUnionMeasure& balls, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::InvalidSpec, "sample count must be >= 1");
  const int dim = balls.dim();
  const auto d = static_cast<std::size_t>(dim);
  std::vector<double> masses;
  for (std::size_t i = 0; i < balls.centers().size(); ++i) masses.push_back(balls.mass_of_ball(i));

  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(masses.begin(), masses.end());
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> coords;
  coords.reserve(n * d);
  std::vector<double> u(d);
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t b = pick(rng);
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (auto& v : u) {
        v = unit(rng);
        norm2 += v * v;
      }
    } while (norm2 > 1.0);
    for (std::size_t a = 0; a < d; ++a) coords.push_back(balls.centers()[b][a] + balls.radii()[b] * u[a]);
  }
  return DiscreteMeasure::from_flat(dim, std::move(coords), std::vector<double>(n, 1.0));
}

GridSpec covering_grid(const BallUnionMeasure& balls, double spacing, int margin) {
  if (!(spacing > 0.0)) throw Error(ErrorCode::InvalidSpec, "spacing must be positive");
  const auto d = static_cast<std::size_t>(balls.dim());
  GridSpec g;
  for (std::size_t a = 0; a < d; ++a) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (std::size_t i = 0; i < balls.centers().size(); ++i) {
      lo = std::min(lo, balls.centers()[i][a] - balls.radii()[i]);
      hi = std::max(hi, balls.centers()[i][a] + balls.radii()[i]);
    }
    const auto cells = static_cast<std::size_t>(std::ceil((hi - lo) / spacing)) + 2 * static_cast<std::size_t>(margin);
    const double mid = 0.5 * (lo + hi);
    g.origin.push_back(mid - 0.5 * spacing * static_cast<double>(cells));
    g.spacing.push_back(spacing);
    g.shape.push_back(cells);
  }
  return g;
}

}  // namespace wproj
