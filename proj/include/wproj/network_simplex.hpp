#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace wproj {

/// Primal network simplex for min-cost flow with double costs.
///
/// The initial basis is the usual strongly feasible tree of artificial arcs
/// hanging from a virtual root; the leaving arc is chosen with the
/// first-side-strict / second-side-inclusive tie rule, which keeps the tree
/// strongly feasible and rules out cycling on degenerate pivots. Pricing is
/// block search over the arc list with block size ~ sqrt(arc count).
///
/// After a solve, costs may be changed and solve() called again: the current
/// basis stays primal feasible, so it is reused as a warm start.
class NetworkSimplex {
 public:
  using Node = std::int32_t;
  using Arc = std::int32_t;
  static constexpr double kInfinity = std::numeric_limits<double>::infinity();

  enum class Status { Optimal, Infeasible };

  explicit NetworkSimplex(Node node_count);

  Arc add_arc(Node from, Node to, double cost, double capacity = kInfinity);
  void reserve_arcs(std::size_t n);
  void set_supply(Node node, double supply);
  void set_cost(Arc arc, double cost) { cost_[static_cast<std::size_t>(arc)] = cost; }
  /// Costs of the user arcs, in insertion order, for bulk updates between solves.
  std::span<double> user_costs() { return {cost_.data(), static_cast<std::size_t>(arc_count_)}; }
  /// Reduced costs below -tolerance * max(1, max |cost|) are eligible to enter.
  void set_pivot_tolerance(double tolerance) { pivot_tolerance_ = tolerance; }

  Status solve();

  Node node_count() const noexcept { return node_count_; }
  Arc arc_count() const noexcept { return arc_count_; }
  Node arc_source(Arc a) const { return source_[static_cast<std::size_t>(a)]; }
  Node arc_target(Arc a) const { return target_[static_cast<std::size_t>(a)]; }
  double flow(Arc a) const { return flow_[static_cast<std::size_t>(a)]; }
  double cost(Arc a) const { return cost_[static_cast<std::size_t>(a)]; }
  double total_cost() const;
  std::uint64_t pivot_count() const noexcept { return pivots_; }
  /// Smallest reduced cost (state-signed) over non-tree arcs; >= 0 at optimality.
  double min_reduced_cost() const;

 private:
  enum : std::int8_t { kUpper = -1, kTree = 0, kLower = 1 };

  void build_initial_tree();
  void recompute_potentials();
  // Potentials are big_[v] * art_ + pi_[v]; artificial arcs cost exactly one
  // unit of art_. Keeping the two parts apart preserves full precision in the
  // reduced costs of real arcs.
  int big_cost(std::size_t a) const { return a >= static_cast<std::size_t>(arc_count_) ? 1 : 0; }
  double reduced_cost(std::size_t a) const {
    const auto s = static_cast<std::size_t>(source_[a]);
    const auto t = static_cast<std::size_t>(target_[a]);
    const int k = big_cost(a) + big_[s] - big_[t];
    const double small = cost_[a] + pi_[s] - pi_[t];
    return k == 0 ? small : small + k * art_;
  }
  bool find_entering_arc(std::size_t& entering);
  Node find_join(Node u, Node v) const;
  void pivot(std::size_t entering);
  void detach_child(Node child);
  void attach_child(Node parent, Node child);
  void shift_subtree(Node top, double shift, int big_shift);
  bool run_pivots();

  Node node_count_;
  Arc arc_count_ = 0;
  std::vector<double> supply_;

  // Arc arrays cover user arcs followed by one artificial arc per node.
  std::vector<Node> source_;
  std::vector<Node> target_;
  std::vector<double> cost_;
  std::vector<double> cap_;
  std::vector<double> flow_;
  std::vector<std::int8_t> state_;

  // Spanning tree: parent pointers plus sibling lists for subtree traversal.
  std::vector<Node> parent_;
  std::vector<Arc> pred_;
  std::vector<std::uint8_t> up_;  // pred arc points child -> parent
  std::vector<std::int32_t> depth_;
  std::vector<double> pi_;
  std::vector<std::int8_t> big_;
  double art_ = 1.0;
  std::vector<Node> first_child_;
  std::vector<Node> next_sibling_;
  std::vector<Node> prev_sibling_;
  std::vector<Node> stack_;

  bool initialized_ = false;
  double pivot_tolerance_ = 1e-12;
  double tolerance_ = 1e-12;
  std::size_t block_size_ = 0;
  std::size_t next_arc_ = 0;
  std::uint64_t pivots_ = 0;
};

}  // namespace wproj
