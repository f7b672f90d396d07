#include "wproj/transport.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "wproj/error.hpp"
#include "wproj/kernels.hpp"

namespace wproj {

CostExponent::CostExponent(double value) : p(value) {
  if (!(value >= 1.0) || !std::isfinite(value)) throw Error(ErrorCode::InvalidSpec, "cost exponent must be >= 1");
}

double TransportPlan::marginal_error() const {
  std::vector<double> rows(source.size(), 0.0);
  std::vector<double> cols(target.size(), 0.0);
  for (const auto& e : entries) {
    rows[e.source] += e.mass;
    cols[e.target] += e.mass;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) worst = std::max(worst, std::abs(rows[i] - source.weight(i)));
  for (std::size_t j = 0; j < cols.size(); ++j) worst = std::max(worst, std::abs(cols[j] - target.weight(j)));
  return worst;
}

// ---------------------------------------------------------------------------

namespace {

NetworkSimplex::Node node_count_for(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim()) {
    throw Error(ErrorCode::DimMismatch,
                "measures have dims " + std::to_string(mu.dim()) + " and " + std::to_string(nu.dim()));
  }
  const std::uint64_t arcs = static_cast<std::uint64_t>(mu.size()) * nu.size();
  if (arcs > kMaxDenseArcs) {
    throw Error(ErrorCode::SizeLimit, std::to_string(mu.size()) + " x " + std::to_string(nu.size()) +
                                          " exceeds the dense transport limit");
  }
  return static_cast<NetworkSimplex::Node>(mu.size() + nu.size());
}

}  // namespace

TransportProblem::TransportProblem(DiscreteMeasure mu, DiscreteMeasure nu)
    : mu_(std::move(mu)), nu_(std::move(nu)), simplex_(node_count_for(mu_, nu_)) {
  const auto n = mu_.size();
  const auto m = nu_.size();
  simplex_.reserve_arcs(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    simplex_.set_supply(static_cast<NetworkSimplex::Node>(i), mu_.weight(i));
    for (std::size_t j = 0; j < m; ++j) {
      simplex_.add_arc(static_cast<NetworkSimplex::Node>(i), static_cast<NetworkSimplex::Node>(n + j), 0.0);
    }
  }
  for (std::size_t j = 0; j < m; ++j) simplex_.set_supply(static_cast<NetworkSimplex::Node>(n + j), -nu_.weight(j));
}

TransportPlan TransportProblem::solve(CostExponent p) {
  kernels::cost_matrix(mu_.coords(), nu_.coords(), mu_.dim(), p.p, simplex_.user_costs());
  if (simplex_.solve() != NetworkSimplex::Status::Optimal) {
    throw Error(ErrorCode::InvalidMeasure, "transportation problem reported infeasible");
  }
  TransportPlan plan{mu_, nu_, {}};
  const std::size_t m = nu_.size();
  double total = 0.0;
  for (NetworkSimplex::Arc a = 0; a < simplex_.arc_count(); ++a) {
    const double f = simplex_.flow(a);
    if (f <= 0.0) continue;
    const auto idx = static_cast<std::size_t>(a);
    plan.entries.push_back({idx / m, idx % m, f});
    total += f * simplex_.cost(a);
  }
  last_cost_ = total;
  return plan;
}

TransportPlan solve_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu, CostExponent p) {
  TransportProblem problem(mu, nu);
  return problem.solve(p);
}

double plan_cost(const TransportPlan& plan, CostExponent p) {
  double total = 0.0;
  for (const auto& e : plan.entries) {
    total += e.mass * kernels::power_cost(plan.source.point(e.source), plan.target.point(e.target), p.p);
  }
  return total;
}

double wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, CostExponent p) {
  return std::pow(plan_cost(solve_exact(mu, nu, p), p), 1.0 / p.p);
}

double wasserstein_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu, CostExponent p) {
  if (mu.dim() != 1 || nu.dim() != 1) throw Error(ErrorCode::DimMismatch, "wasserstein_1d needs 1-D measures");
  return wasserstein_1d(QuantileFn::of(mu), QuantileFn::of(nu), p);
}

double wasserstein_1d(const QuantileFn& a, const QuantileFn& b, CostExponent p) {
  return std::pow(quantile_distance_pow(a, b, p.p), 1.0 / p.p);
}

TransportPlan monotone_plan_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != 1 || nu.dim() != 1) throw Error(ErrorCode::DimMismatch, "monotone plan needs 1-D measures");
  auto sorted = [](const DiscreteMeasure& m) {
    std::vector<std::size_t> order(m.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return m.point(a)[0] < m.point(b)[0]; });
    return order;
  };
  const auto oi = sorted(mu);
  const auto oj = sorted(nu);
  TransportPlan plan{mu, nu, {}};
  // Merge the two cumulative weight sequences; the last level of each is 1.
  std::size_t i = 0;
  std::size_t j = 0;
  double below = 0.0;
  double cum_i = mu.weight(oi[0]);
  double cum_j = nu.weight(oj[0]);
  while (i < oi.size() && j < oj.size()) {
    if (i + 1 == oi.size()) cum_i = 1.0;
    if (j + 1 == oj.size()) cum_j = 1.0;
    const double top = std::min(cum_i, cum_j);
    if (top > below) plan.entries.push_back({oi[i], oj[j], top - below});
    below = std::max(below, top);
    const bool advance_i = cum_i <= cum_j;
    const bool advance_j = cum_j <= cum_i;
    if (advance_i && ++i < oi.size()) cum_i += mu.weight(oi[i]);
    if (advance_j && ++j < oj.size()) cum_j += nu.weight(oj[j]);
  }
  return plan;
}

MonotonicityResult check_cyclical_monotonicity(const TransportPlan& plan, CostExponent p, int k, int trials,
                                               std::uint64_t seed, double tolerance) {
  if (k < 2) throw Error(ErrorCode::InvalidSpec, "cyclical monotonicity needs k >= 2");
  if (plan.entries.empty()) return {true, 0.0};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, plan.entries.size() - 1);
  std::vector<std::size_t> tuple(static_cast<std::size_t>(k));
  std::vector<std::size_t> perm(static_cast<std::size_t>(k));
  double worst = -INFINITY;
  bool pass = true;
  const auto cost = [&](std::size_t src_entry, std::size_t tgt_entry) {
    return kernels::power_cost(plan.source.point(plan.entries[src_entry].source),
                               plan.target.point(plan.entries[tgt_entry].target), p.p);
  };
  for (int trial = 0; trial < trials; ++trial) {
    for (auto& t : tuple) t = pick(rng);
    double base = 0.0;
    for (auto t : tuple) base += cost(t, t);
    const double scale = std::max(1.0, base);
    auto test = [&](const std::vector<std::size_t>& sigma) {
      double permuted = 0.0;
      for (std::size_t i = 0; i < tuple.size(); ++i) permuted += cost(tuple[i], tuple[sigma[i]]);
      const double violation = base - permuted;
      worst = std::max(worst, violation);
      if (violation > tolerance * scale) pass = false;
    };
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    if (k <= 4) {
      while (std::next_permutation(perm.begin(), perm.end())) test(perm);
    } else {
      for (int shift = 1; shift < k; ++shift) {
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = (i + static_cast<std::size_t>(shift)) % perm.size();
        test(perm);
      }
    }
  }
  return {pass, std::max(worst, 0.0)};
}

TransportPlan translate_plan(const TransportPlan& plan, std::span<const double> h) {
  return TransportPlan{plan.source, translate(plan.target, h), plan.entries};
}

bool same_measure(const DiscreteMeasure& a, const DiscreteMeasure& b, double tolerance) {
  if (a.dim() != b.dim() || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a.weight(i) - b.weight(i)) > tolerance) return false;
    if (squared_distance(a.point(i), b.point(i)) > tolerance * tolerance) return false;
  }
  return true;
}

TransportPlan glue(const TransportPlan& eta, const TransportPlan& a, const TransportPlan& b) {
  if (!same_measure(eta.source, a.source)) throw Error(ErrorCode::MarginalMismatch, "a.source differs from eta.source");
  if (!same_measure(eta.target, b.source)) throw Error(ErrorCode::MarginalMismatch, "b.source differs from eta.target");

  auto rows_of = [](const TransportPlan& plan) {
    std::vector<std::vector<std::pair<std::size_t, double>>> rows(plan.source.size());
    for (const auto& e : plan.entries) rows[e.source].emplace_back(e.target, e.mass);
    return rows;
  };
  const auto a_rows = rows_of(a);
  const auto b_rows = rows_of(b);

  std::map<std::pair<std::size_t, std::size_t>, double> acc;
  for (const auto& e : eta.entries) {
    const double rho_i = eta.source.weight(e.source);
    const double sigma_j = eta.target.weight(e.target);
    for (const auto& [x, ax] : a_rows[e.source]) {
      const double left = e.mass * ax / rho_i;
      for (const auto& [y, by] : b_rows[e.target]) acc[{x, y}] += left * by / sigma_j;
    }
  }
  TransportPlan gamma{a.target, b.target, {}};
  gamma.entries.reserve(acc.size());
  for (const auto& [key, mass] : acc) {
    if (mass > 0.0) gamma.entries.push_back({key.first, key.second, mass});
  }
  return gamma;
}

}  // namespace wproj
