#include "wproj/projnd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wproj/ball_geometry.hpp"
#include "wproj/error.hpp"
#include "wproj/kernels.hpp"
#include "wproj/network_simplex.hpp"

namespace wproj {

void CapacitatedInstance::validate() const {
  grid.validate();
  if (grid.dim() != source.dim()) throw Error(ErrorCode::DimMismatch, "grid and source differ in dim");
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidSpec, "lambda must be positive");
  if (subsamples < 1) throw Error(ErrorCode::InvalidSpec, "subsamples must be >= 1");
  const double capacity = lambda * grid.cell_volume() * static_cast<double>(grid.cell_count());
  if (capacity < 1.0 - 1e-12) {
    throw Error(ErrorCode::InfeasibleCapacity, "grid capacity " + std::to_string(capacity) + " is below 1");
  }
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (!grid.locate(source.point(i))) {
      throw Error(ErrorCode::AtomOutsideGrid, "atom " + std::to_string(i) + " lies outside the grid");
    }
  }
}

BallUnionMeasure project_atoms_analytic(const DiscreteMeasure& mu, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidSpec, "lambda must be positive");
  std::vector<Point> centers;
  std::vector<double> radii;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto x = mu.point(i);
    centers.emplace_back(x.begin(), x.end());
    radii.push_back(rad_ball(mu.dim(), mu.weight(i) / lambda));
  }
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = i + 1; j < centers.size(); ++j) {
      const double dist = std::sqrt(squared_distance(centers[i], centers[j]));
      if (dist < radii[i] + radii[j] - 1e-12) {
        throw Error(ErrorCode::OverlapError, "atoms " + std::to_string(i) + " and " + std::to_string(j) +
                                                 " are too close for disjoint balls");
      }
    }
  }
  return BallUnionMeasure::create(std::move(centers), std::move(radii), lambda);
}

double analytic_projection_cost(const BallUnionMeasure& balls, const DiscreteMeasure& mu, double p) {
  const double d = balls.dim();
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    total += mu.weight(i) * d / (d + p) * std::pow(balls.radii()[i], p);
  }
  return total;
}

CapacitatedProjection project_capacitated(const CapacitatedInstance& inst) {
  inst.validate();
  const std::size_t n = inst.source.size();
  const std::size_t m = inst.grid.cell_count();
  if (static_cast<std::uint64_t>(n) * m > kMaxDenseArcs) {
    throw Error(ErrorCode::SizeLimit, std::to_string(n) + " atoms x " + std::to_string(m) + " cells is too large");
  }
  const auto sink = static_cast<NetworkSimplex::Node>(n + m);
  NetworkSimplex simplex(sink + 1);
  simplex.reserve_arcs(n * m + m);
  for (std::size_t i = 0; i < n; ++i) {
    simplex.set_supply(static_cast<NetworkSimplex::Node>(i), inst.source.weight(i));
    for (std::size_t j = 0; j < m; ++j) {
      simplex.add_arc(static_cast<NetworkSimplex::Node>(i), static_cast<NetworkSimplex::Node>(n + j), 0.0);
    }
  }
  const double cap = inst.lambda * inst.grid.cell_volume();
  for (std::size_t j = 0; j < m; ++j) simplex.add_arc(static_cast<NetworkSimplex::Node>(n + j), sink, 0.0, cap);
  simplex.set_supply(sink, -1.0);
  kernels::cell_averaged_cost(inst.source.coords(), inst.grid, inst.p.p, inst.subsamples,
                              simplex.user_costs().first(n * m));
  if (simplex.solve() != NetworkSimplex::Status::Optimal) {
    throw Error(ErrorCode::InfeasibleCapacity, "capacitated projection reported infeasible");
  }

  std::vector<double> mass(m);
  for (std::size_t j = 0; j < m; ++j) {
    mass[j] = std::clamp(simplex.flow(static_cast<NetworkSimplex::Arc>(n * m + j)), 0.0, cap);
  }
  // Occupied cells, flat order, become the plan's target atoms.
  const auto d = static_cast<std::size_t>(inst.grid.dim());
  std::vector<std::size_t> slot(m, m);
  std::vector<double> centers;
  std::vector<double> weights;
  bool boundary = false;
  for (std::size_t j = 0; j < m; ++j) {
    if (mass[j] <= 0.0) continue;
    slot[j] = weights.size();
    const auto c = inst.grid.cell_center(j);
    centers.insert(centers.end(), c.begin(), c.end());
    weights.push_back(mass[j]);
    std::size_t rest = j;
    for (std::size_t a = d; a-- > 0;) {
      const std::size_t k = rest % inst.grid.shape[a];
      rest /= inst.grid.shape[a];
      if (k == 0 || k + 1 == inst.grid.shape[a]) boundary = true;
    }
  }

  double cost = 0.0;
  std::vector<TransportPlan::Entry> entries;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto a = static_cast<NetworkSimplex::Arc>(i * m + j);
      const double f = simplex.flow(a);
      if (f <= 0.0) continue;
      cost += f * simplex.cost(a);
      if (slot[j] < m) entries.push_back({i, slot[j], f});
    }
  }
  auto target = DiscreteMeasure::from_flat(inst.grid.dim(), std::move(centers), std::move(weights));
  TransportPlan plan{inst.source, std::move(target), std::move(entries)};
  const double center_cost = plan_cost(plan, inst.p);
  return {GridMeasure::create(inst.grid, std::move(mass), inst.lambda, true), std::move(plan), cost, center_cost,
          boundary};
}

double projection_distance(const CapacitatedInstance& inst) {
  return std::pow(project_capacitated(inst).cost, 1.0 / inst.p.p);
}

double symmetric_difference_mass(const GridMeasure& rho, const BallUnionMeasure& balls, int subsamples) {
  const auto& grid = rho.grid();
  if (grid.dim() != balls.dim()) throw Error(ErrorCode::DimMismatch, "grid and balls differ in dim");
  std::vector<std::uint32_t> hits(grid.cell_count());
  kernels::count_cell_hits(grid, balls, subsamples, hits);
  double per_cell = 1.0;
  for (int a = 0; a < grid.dim(); ++a) per_cell *= subsamples;
  const double unit = balls.lambda() * grid.cell_volume() / per_cell;
  double total = 0.0;
  for (std::size_t j = 0; j < hits.size(); ++j) total += std::abs(rho.cell_mass()[j] - unit * hits[j]);
  return total;
}

}  // namespace wproj
