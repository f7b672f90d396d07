#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version and a serial
// reference with identical arithmetic; tests require bit-identical results
// and bench/ compares their throughput.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wproj/measures.hpp"

namespace wproj::kernels {

/// |x - y|^p with the p = 1 and p = 2 cases special-cased.
double power_cost(std::span<const double> x, std::span<const double> y, double p);

/// Dense row-major cost matrix C[i*m + j] = |x_i - y_j|^p for packed
/// coordinates of dimension dim.
void cost_matrix(std::span<const double> src, std::span<const double> dst, int dim, double p,
                 std::span<double> out);
void cost_matrix_serial(std::span<const double> src, std::span<const double> dst, int dim, double p,
                        std::span<double> out);

/// Mean of |x_i - y|^p over y uniform in each grid cell, row-major
/// out[i * cells + j]. Exact for p = 2 (center cost plus sum spacing^2 / 12);
/// otherwise the midpoint rule with s^dim subsamples per cell.
void cell_averaged_cost(std::span<const double> src, const GridSpec& grid, double p, int subsamples,
                        std::span<double> out);
void cell_averaged_cost_serial(std::span<const double> src, const GridSpec& grid, double p, int subsamples,
                               std::span<double> out);

/// Number of the s^dim midpoint subsamples of each grid cell that fall in the
/// ball union; out has one entry per cell.
void count_cell_hits(const GridSpec& grid, const BallUnionMeasure& balls, int subsamples,
                     std::span<std::uint32_t> out);
void count_cell_hits_serial(const GridSpec& grid, const BallUnionMeasure& balls, int subsamples,
                            std::span<std::uint32_t> out);

/// Annular-cylinder membership test used for the set E: |y1| <= half_length
/// and inner <= |y'| <= outer, where y' drops the first coordinate.
struct CylinderShell {
  double half_length;
  double inner;
  double outer;
  bool contains(std::span<const double> y) const;
};

/// Draws n uniform points in the dim-ball of the given radius centered at the
/// origin and counts those inside the shell. Samples are generated in fixed
/// chunks with per-chunk seeds, so the count does not depend on thread count.
std::uint64_t count_ball_samples_in_shell(int dim, double radius, const CylinderShell& shell,
                                          std::uint64_t n, std::uint64_t seed);
std::uint64_t count_ball_samples_in_shell_serial(int dim, double radius, const CylinderShell& shell,
                                                 std::uint64_t n, std::uint64_t seed);

/// Uniform point in the centered dim-ball of radius r (Gaussian direction,
/// U^{1/dim} radius).
template <class Rng>
void uniform_in_ball(Rng& rng, int dim, double r, std::span<double> out);

}  // namespace wproj::kernels

#include "wproj/kernels_impl.hpp"
