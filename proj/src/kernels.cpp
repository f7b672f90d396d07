#include "wproj/kernels.hpp"

#include <cmath>
#include <random>

namespace wproj::kernels {

namespace {

constexpr std::uint64_t kChunk = 1u << 15;

inline double cost_from_sq(double sq, double p) {
  if (p == 2.0) return sq;
  if (p == 1.0) return std::sqrt(sq);
  return std::pow(sq, 0.5 * p);
}

inline void cost_row(std::span<const double> src, std::span<const double> dst, int dim, double p,
                     std::size_t i, std::size_t m, double* row) {
  const auto d = static_cast<std::size_t>(dim);
  const double* x = src.data() + i * d;
  for (std::size_t j = 0; j < m; ++j) {
    const double* y = dst.data() + j * d;
    double sq = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = x[k] - y[k];
      sq += diff * diff;
    }
    row[j] = cost_from_sq(sq, p);
  }
}

// Hits for one cell; midpoint subsamples of the half-open cell box.
std::uint32_t cell_hits(const GridSpec& grid, const BallUnionMeasure& balls, int s, std::size_t flat) {
  const int dim = grid.dim();
  const auto d = static_cast<std::size_t>(dim);
  std::vector<double> lo(d);
  {
    std::size_t rest = flat;
    for (int axis = dim - 1; axis >= 0; --axis) {
      const auto a = static_cast<std::size_t>(axis);
      lo[a] = grid.origin[a] + static_cast<double>(rest % grid.shape[a]) * grid.spacing[a];
      rest /= grid.shape[a];
    }
  }
  std::size_t total = 1;
  for (int k = 0; k < dim; ++k) total *= static_cast<std::size_t>(s);
  std::vector<double> x(d);
  std::uint32_t hits = 0;
  for (std::size_t sub = 0; sub < total; ++sub) {
    std::size_t rest = sub;
    for (std::size_t a = 0; a < d; ++a) {
      const auto idx = rest % static_cast<std::size_t>(s);
      rest /= static_cast<std::size_t>(s);
      x[a] = lo[a] + (static_cast<double>(idx) + 0.5) / s * grid.spacing[a];
    }
    if (balls.contains(x)) ++hits;
  }
  return hits;
}

// Lower corner of a cell from its flat index.
void cell_corner(const GridSpec& grid, std::size_t flat, double* lo) {
  std::size_t rest = flat;
  for (int axis = grid.dim() - 1; axis >= 0; --axis) {
    const auto a = static_cast<std::size_t>(axis);
    lo[a] = grid.origin[a] + static_cast<double>(rest % grid.shape[a]) * grid.spacing[a];
    rest /= grid.shape[a];
  }
}

// Subsample offsets inside a cell, packed (count x dim), relative to the corner.
std::vector<double> cell_offsets(const GridSpec& grid, int s) {
  const auto d = static_cast<std::size_t>(grid.dim());
  std::size_t total = 1;
  for (std::size_t a = 0; a < d; ++a) total *= static_cast<std::size_t>(s);
  std::vector<double> off(total * d);
  for (std::size_t sub = 0; sub < total; ++sub) {
    std::size_t rest = sub;
    for (std::size_t a = 0; a < d; ++a) {
      const auto idx = rest % static_cast<std::size_t>(s);
      rest /= static_cast<std::size_t>(s);
      off[sub * d + a] = (static_cast<double>(idx) + 0.5) / s * grid.spacing[a];
    }
  }
  return off;
}

void averaged_cost_row(std::span<const double> src, const GridSpec& grid, double p, std::span<const double> offsets,
                       std::size_t i, double* row) {
  const auto d = static_cast<std::size_t>(grid.dim());
  const double* x = src.data() + i * d;
  const std::size_t cells = grid.cell_count();
  std::vector<double> lo(d);
  if (p == 2.0) {
    double spread = 0.0;
    for (std::size_t a = 0; a < d; ++a) spread += grid.spacing[a] * grid.spacing[a] / 12.0;
    for (std::size_t j = 0; j < cells; ++j) {
      cell_corner(grid, j, lo.data());
      double sq = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        const double diff = x[a] - (lo[a] + 0.5 * grid.spacing[a]);
        sq += diff * diff;
      }
      row[j] = sq + spread;
    }
    return;
  }
  const std::size_t count = offsets.size() / d;
  for (std::size_t j = 0; j < cells; ++j) {
    cell_corner(grid, j, lo.data());
    double total = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      double sq = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        const double diff = x[a] - (lo[a] + offsets[k * d + a]);
        sq += diff * diff;
      }
      total += cost_from_sq(sq, p);
    }
    row[j] = total / static_cast<double>(count);
  }
}

std::uint64_t chunk_hits(int dim, double radius, const CylinderShell& shell, std::uint64_t count,
                         std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  std::mt19937_64 rng(seq);
  std::vector<double> y(static_cast<std::size_t>(dim));
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < count; ++k) {
    uniform_in_ball(rng, dim, radius, y);
    if (shell.contains(y)) ++hits;
  }
  return hits;
}

}  // namespace

double power_cost(std::span<const double> x, std::span<const double> y, double p) {
  return cost_from_sq(squared_distance(x, y), p);
}

void cost_matrix(std::span<const double> src, std::span<const double> dst, int dim, double p,
                 std::span<double> out) {
  const auto d = static_cast<std::size_t>(dim);
  const auto n = static_cast<std::ptrdiff_t>(src.size() / d);
  const std::size_t m = dst.size() / d;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    cost_row(src, dst, dim, p, static_cast<std::size_t>(i), m, out.data() + static_cast<std::size_t>(i) * m);
  }
}

void cost_matrix_serial(std::span<const double> src, std::span<const double> dst, int dim, double p,
                        std::span<double> out) {
  const auto d = static_cast<std::size_t>(dim);
  const std::size_t n = src.size() / d;
  const std::size_t m = dst.size() / d;
  for (std::size_t i = 0; i < n; ++i) cost_row(src, dst, dim, p, i, m, out.data() + i * m);
}

void cell_averaged_cost(std::span<const double> src, const GridSpec& grid, double p, int subsamples,
                        std::span<double> out) {
  const auto d = static_cast<std::size_t>(grid.dim());
  const auto n = static_cast<std::ptrdiff_t>(src.size() / d);
  const std::size_t cells = grid.cell_count();
  const auto offsets = cell_offsets(grid, subsamples);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    averaged_cost_row(src, grid, p, offsets, static_cast<std::size_t>(i), out.data() + static_cast<std::size_t>(i) * cells);
  }
}

void cell_averaged_cost_serial(std::span<const double> src, const GridSpec& grid, double p, int subsamples,
                               std::span<double> out) {
  const auto d = static_cast<std::size_t>(grid.dim());
  const std::size_t n = src.size() / d;
  const std::size_t cells = grid.cell_count();
  const auto offsets = cell_offsets(grid, subsamples);
  for (std::size_t i = 0; i < n; ++i) averaged_cost_row(src, grid, p, offsets, i, out.data() + i * cells);
}

void count_cell_hits(const GridSpec& grid, const BallUnionMeasure& balls, int subsamples,
                     std::span<std::uint32_t> out) {
  const auto cells = static_cast<std::ptrdiff_t>(grid.cell_count());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t j = 0; j < cells; ++j) {
    out[static_cast<std::size_t>(j)] = cell_hits(grid, balls, subsamples, static_cast<std::size_t>(j));
  }
}

void count_cell_hits_serial(const GridSpec& grid, const BallUnionMeasure& balls, int subsamples,
                            std::span<std::uint32_t> out) {
  const std::size_t cells = grid.cell_count();
  for (std::size_t j = 0; j < cells; ++j) out[j] = cell_hits(grid, balls, subsamples, j);
}

bool CylinderShell::contains(std::span<const double> y) const {
  if (std::abs(y[0]) > half_length) return false;
  double rest = 0.0;
  for (std::size_t k = 1; k < y.size(); ++k) rest += y[k] * y[k];
  return rest >= inner * inner && rest <= outer * outer;
}

std::uint64_t count_ball_samples_in_shell(int dim, double radius, const CylinderShell& shell,
                                          std::uint64_t n, std::uint64_t seed) {
  const auto chunks = static_cast<std::int64_t>((n + kChunk - 1) / kChunk);
  std::uint64_t hits = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : hits)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const auto chunk = static_cast<std::uint64_t>(c);
    const std::uint64_t count = std::min(kChunk, n - chunk * kChunk);
    hits += chunk_hits(dim, radius, shell, count, seed, chunk);
  }
  return hits;
}

std::uint64_t count_ball_samples_in_shell_serial(int dim, double radius, const CylinderShell& shell,
                                                 std::uint64_t n, std::uint64_t seed) {
  std::uint64_t hits = 0;
  for (std::uint64_t chunk = 0; chunk * kChunk < n; ++chunk) {
    hits += chunk_hits(dim, radius, shell, std::min(kChunk, n - chunk * kChunk), seed, chunk);
  }
  return hits;
}

}  // namespace wproj::kernels
