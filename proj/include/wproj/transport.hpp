#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "wproj/measures.hpp"
#include "wproj/network_simplex.hpp"
#include "wproj/quantile.hpp"

namespace wproj {

/// Exponent of the ground cost |x - y|^p. p = 1 is admitted for distances;
/// projections require p > 1.
struct CostExponent {
  double p;
  explicit CostExponent(double value);
};

/// Sparse coupling between two discrete measures.
struct TransportPlan {
  struct Entry {
    std::size_t source;
    std::size_t target;
    double mass;
  };

  DiscreteMeasure source;
  DiscreteMeasure target;
  std::vector<Entry> entries;

  /// Largest deviation of the row/column sums from the marginal weights.
  double marginal_error() const;
};

inline constexpr std::uint64_t kMaxDenseArcs = 10'000'000;

/// Dense transportation problem between two discrete measures, kept alive so
/// that several exponents can be solved from the previous optimal basis.
class TransportProblem {
 public:
  TransportProblem(DiscreteMeasure mu, DiscreteMeasure nu);

  /// Optimal plan for cost |x - y|^p.
  TransportPlan solve(CostExponent p);
  /// Optimal value sum mass * |x - y|^p of the last solve.
  double last_cost() const noexcept { return last_cost_; }
  std::uint64_t pivot_count() const { return simplex_.pivot_count(); }

 private:
  DiscreteMeasure mu_;
  DiscreteMeasure nu_;
  NetworkSimplex simplex_;
  double last_cost_ = 0.0;
};

/// Optimal plan by network simplex; SizeLimit when n * m > 1e7.
TransportPlan solve_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu, CostExponent p);

/// Sum over entries of mass * |x_i - y_j|^p.
double plan_cost(const TransportPlan& plan, CostExponent p);

/// W_p between two discrete measures (any dimension) via solve_exact.
double wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, CostExponent p);

/// W_p in one dimension from the quantile functions, exact.
double wasserstein_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu, CostExponent p);
double wasserstein_1d(const QuantileFn& a, const QuantileFn& b, CostExponent p);

/// Comonotone (north-west corner on sorted atoms) plan in one dimension.
TransportPlan monotone_plan_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

struct MonotonicityResult {
  bool pass;
  double worst_violation;  // max over tested tuples of cost(plan pairs) - cost(permuted pairs)
};

/// Samples `trials` k-tuples of support pairs and compares their cost with every
/// permutation (k <= 4) or every cyclic shift (k > 4).
MonotonicityResult check_cyclical_monotonicity(const TransportPlan& plan, CostExponent p, int k, int trials,
                                               std::uint64_t seed, double tolerance = 1e-9);

/// Shifts the target atoms by h and keeps the entries.
TransportPlan translate_plan(const TransportPlan& plan, std::span<const double> h);

/// Composition through shared middle marginals: with eta in Pi(rho, sigma),
/// a in Pi(rho, mu) and b in Pi(sigma, nu), returns the plan
/// gamma(x, y) = sum_ij eta(i, j) a(i, x) / rho_i b(j, y) / sigma_j in Pi(mu, nu).
TransportPlan glue(const TransportPlan& eta, const TransportPlan& a, const TransportPlan& b);

/// True when both measures have the same atoms and weights (within tolerance).
bool same_measure(const DiscreteMeasure& a, const DiscreteMeasure& b, double tolerance = 1e-9);

}  // namespace wproj
