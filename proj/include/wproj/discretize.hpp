#pragma once

#include <cstdint>

#include "wproj/measures.hpp"

namespace wproj {

struct DiscretizeOptions {
  int subsamples = 3;             // per axis, so subsamples^dim points per cell
  bool check_resolution = true;   // GridTooCoarse if a ball diameter < 2 * spacing
};

struct DiscretizedBallUnion {
  GridMeasure measure;  // renormalized to total mass one
  double raw_mass;      // lambda * sum of covered cell volume, before renormalization
};

/// Midpoint-rule discretization of a ball union onto a grid covering its support.
DiscretizedBallUnion discretize_ball_union(const BallUnionMeasure& balls, const GridSpec& grid,
                                           const DiscretizeOptions& options = {});

/// n i.i.d. uniform points of the union: a ball is chosen with probability
/// proportional to its mass, then a point is drawn by rejection from the
/// ball's bounding cube. Equal weights 1/n; deterministic for a given seed.
DiscreteMeasure sample_ball_union(const BallUnionMeasure& balls, std::size_t n, std::uint64_t seed);

/// Smallest axis-aligned grid of the given spacing, centered on the union's
/// bounding box, that covers every ball with `margin` cells to spare.
GridSpec covering_grid(const BallUnionMeasure& balls, double spacing, int margin = 1);

}  // namespace wproj
