#pragma once

#include "wproj/measures.hpp"
#include "wproj/transport.hpp"

namespace wproj {

/// Projection of a discrete measure onto the grid measures with cell density <= lambda.
struct CapacitatedInstance {
  DiscreteMeasure source;
  GridSpec grid;
  double lambda = 1.0;
  CostExponent p{2.0};
  /// Midpoint subsamples per axis for the cell-averaged cost when p != 2.
  int subsamples = 4;

  void validate() const;  // InvalidSpec, InfeasibleCapacity, AtomOutsideGrid
};

struct CapacitatedProjection {
  GridMeasure measure;
  /// Atoms to occupied cell centers, in flat cell order.
  TransportPlan plan;
  /// Optimal value: sum of flow times the mean of |x - y|^p over the cell.
  double cost;
  /// Same flows priced at the cell centers.
  double center_cost;
  /// Some cell on the outer layer of the grid received mass.
  bool touches_boundary;
};

/// Balls of volume w_i / lambda around each atom. OverlapError unless every
/// pair is separated by the sum of the radii (tangency allowed up to 1e-12).
BallUnionMeasure project_atoms_analytic(const DiscreteMeasure& mu, double lambda);

/// sum_i w_i * E|Y_i - x_i|^p with Y_i uniform on ball i: the distance^p from
/// separated atoms to their analytic projection.
double analytic_projection_cost(const BallUnionMeasure& balls, const DiscreteMeasure& mu, double p);

/// Min-cost flow atoms -> cells -> sink with per-cell capacity lambda * cell volume.
CapacitatedProjection project_capacitated(const CapacitatedInstance& inst);

/// cost^{1/p} of project_capacitated.
double projection_distance(const CapacitatedInstance& inst);

/// sum over cells of |rho_j - lambda |cell_j cap union|| with the overlap
/// volume estimated from subsamples^dim midpoints per cell.
double symmetric_difference_mass(const GridMeasure& rho, const BallUnionMeasure& balls, int subsamples = 8);

}  // namespace wproj
