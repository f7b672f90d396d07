#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wproj/measures.hpp"
#include "wproj/proj1d.hpp"
#include "wproj/projnd.hpp"
#include "wproj/quantile.hpp"
#include "wproj/transport.hpp"

namespace wproj {

/// Outcome of one inequality or identity check. For inequalities lhs <= rhs
/// the slack is rhs - lhs; for identities it is -|lhs - rhs|. In both cases
/// pass == (slack >= -tolerance).
struct CheckReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string metadata;
};

CheckReport inequality_report(std::string name, double lhs, double rhs, double tolerance, std::string metadata = {});
CheckReport identity_report(std::string name, double lhs, double rhs, double tolerance, std::string metadata = {});

/// Discretization used by the checks. d = 1 goes through the quantile
/// pipeline with n samples; d >= 2 projects onto a grid of the given spacing
/// aligned to integer multiples of it.
struct CheckGrid {
  double spacing = 0.04;
  std::size_t quantile_samples = 4096;
  double lambda = 1.0;
};

/// Aligned grid covering every atom of the given measures, padded by the
/// radius of a ball of mass one plus two cells.
GridSpec aligned_grid(const std::vector<const DiscreteMeasure*>& measures, double lambda, double spacing);

/// Largest atom distance over the union of supports plus 2 Rad_d(1 / lambda),
/// a bound on the diameter of the measures and their projections.
double instance_diameter(const std::vector<const DiscreteMeasure*>& measures, double lambda);

/// 4 * diameter * spacing, the first-order discretization tolerance.
double grid_tolerance(const std::vector<const DiscreteMeasure*>& measures, const CheckGrid& grid);

/// W_2^2(rho, sigma) <= cost of the glued plan gamma in Pi(mu, nu).
CheckReport check_weak_nonexpansiveness(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CheckGrid& grid);

/// In d = 1 the glued plan is the comonotone coupling; its cost must equal
/// W_2^2(mu, nu) from the network simplex.
CheckReport check_glued_plan_optimal_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// W_p(P[mu], P[nu]) <= W_p(mu, nu). Tolerance 1e-6 in d = 1, grid tolerance otherwise.
CheckReport check_nonexpansive(const DiscreteMeasure& mu, const DiscreteMeasure& nu, CostExponent p,
                               const CheckGrid& grid);

/// |barycenter(P[mu]) - barycenter(mu)| <= tolerance; 1e-9 in d = 1, 2 * spacing otherwise.
CheckReport check_barycenter_preservation(const DiscreteMeasure& mu, const CheckGrid& grid);

/// W_2^2(mu, nu) - W_2^2(P mu, P nu) against the same quantity with nu shifted by h.
/// In d >= 2, h must be an integer multiple of the spacing on every axis.
CheckReport check_translation_invariance(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                         std::span<const double> h, const CheckGrid& grid);

/// Displacement interpolants (1 - t) Q0 + t Q1 of two measures with density
/// <= lambda keep density <= lambda. Inputs are linear quantiles;
/// InfeasibleInput if either has slope below 1 / lambda.
CheckReport check_geodesic_density_bound_1d(const QuantileFn& q0, const QuantileFn& q1,
                                            const std::vector<double>& t_list, double lambda = 1.0);

/// Two-atom configuration mu = (delta_(R,0) + delta_(-R,0)) / 2,
/// nu_t = (delta_(t,1) + delta_(-t,-1)) / 2. The optimal matching of mu and
/// nu_t flips between t = -eps and t = +eps while the glued plan does not.
/// lhs is the total-variation distance between the glued plans, rhs the one
/// between the optimal plans; passes when the matchings differ, the glued
/// plans share their support and lhs < rhs.
CheckReport check_glued_plan_continuity(double radius, double eps, const CheckGrid& grid);

/// Projection helpers shared by the checks and the CLI.
struct GridProjection {
  CapacitatedProjection projection;
  DiscreteMeasure atoms;  // occupied cell centers with their masses
};
GridProjection project_on_grid(const DiscreteMeasure& mu, const GridSpec& grid, double lambda, CostExponent p);

/// Random discrete measure with the given number of atoms, coordinates
/// uniform in [0, extent)^dim and weights uniform in [0.1, 1) before normalization.
DiscreteMeasure random_measure(int dim, std::size_t atoms, std::mt19937_64& rng, double extent = 1.0);

/// Uniform density lambda on a union of 1 to `pieces` disjoint intervals
/// with random lengths and gaps, as a linear quantile.
QuantileFn random_interval_mixture(std::mt19937_64& rng, std::size_t pieces, double lambda = 1.0);

/// One row of the verification suite. Report-only rows record quantities
/// the theory does not bound (nonexpansiveness for d >= 2 or p != 2).
struct SuiteRow {
  CheckReport report;
  int d;
  double p;
  std::uint64_t seed;
  bool enforced;
};

/// Every applicable check on one random instance drawn from `seed`.
/// d = 1: up to 50 atoms per measure. d >= 2: up to 4 atoms in the unit cube.
std::vector<SuiteRow> verify_instance(int d, CostExponent p, std::uint64_t seed, const CheckGrid& grid);

}  // namespace wproj
