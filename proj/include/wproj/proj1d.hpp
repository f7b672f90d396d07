#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wproj/measures.hpp"
#include "wproj/quantile.hpp"
#include "wproj/transport.hpp"

namespace wproj {

struct ProjectionSpec1D {
  CostExponent p{2.0};
  double lambda = 1.0;
  std::size_t n = 4096;
  /// Cell width of the output grid in project_measure_1d; 0 selects 1 / (lambda * n).
  double grid_spacing = 0.0;

  void validate() const;  // InvalidSpec unless p > 1, lambda > 0, n >= 2
};

/// Solution of min sum |x_i - q_i|^p subject to x_{i+1} - x_i >= 1 / (lambda n).
struct ConstrainedFit {
  std::vector<double> x;
  /// First index of every pool of the underlying isotonic fit, in order.
  std::vector<std::size_t> pool_starts;
};

/// Pool-adjacent-violators on the sheared targets q_i - i / (lambda n).
ConstrainedFit project_samples(std::span<const double> q, double p, double lambda);

/// Independent solver for the same problem through the min-max formula of
/// isotonic regression, with block minimizers found by bisection.
/// O(n^3); SizeLimit for n > 25.
std::vector<double> brute_force_projection_oracle(std::span<const double> q, double p, double lambda);

/// Quantile with slope 1 / lambda on each cell [i/n, (i+1)/n] and value x_i
/// at the cell midpoint, so its cell averages are exactly x. Gaps between
/// consecutive cells become jumps.
QuantileFn quantile_through(std::span<const double> x, double lambda);

/// Projection of the measure with quantile Q. The input is reduced to its n
/// cell averages n * int_{i/n}^{(i+1)/n} Q before fitting.
QuantileFn project_quantile(const QuantileFn& q, const ProjectionSpec1D& spec);
QuantileFn project_quantile_of(const DiscreteMeasure& mu, const ProjectionSpec1D& spec);

/// Cell masses F(b) - F(a) of a linear quantile on cells [k h, (k+1) h).
/// The result is flagged as a member of K_lambda.
GridMeasure grid_from_quantile(const QuantileFn& q, double lambda, double spacing);

GridMeasure project_measure_1d(const DiscreteMeasure& mu, const ProjectionSpec1D& spec);

}  // namespace wproj
