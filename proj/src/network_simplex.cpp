#include "wproj/network_simplex.hpp"

#include <algorithm>
#include <cmath>

#include "wproj/error.hpp"

namespace wproj {

NetworkSimplex::NetworkSimplex(Node node_count) : node_count_(node_count) {
  if (node_count < 1) throw Error(ErrorCode::InvalidSpec, "network needs at least one node");
  supply_.assign(static_cast<std::size_t>(node_count), 0.0);
}

void NetworkSimplex::reserve_arcs(std::size_t n) {
  const std::size_t total = n + static_cast<std::size_t>(node_count_);
  source_.reserve(total);
  target_.reserve(total);
  cost_.reserve(total);
  cap_.reserve(total);
}

NetworkSimplex::Arc NetworkSimplex::add_arc(Node from, Node to, double cost, double capacity) {
  if (initialized_) throw Error(ErrorCode::InvalidSpec, "arcs cannot be added after the first solve");
  if (from < 0 || from >= node_count_ || to < 0 || to >= node_count_) {
    throw Error(ErrorCode::InvalidSpec, "arc endpoint out of range");
  }
  if (!(capacity >= 0.0)) throw Error(ErrorCode::InvalidSpec, "arc capacity must be >= 0");
  if (arc_count_ == std::numeric_limits<Arc>::max() - node_count_) {
    throw Error(ErrorCode::SizeLimit, "too many arcs");
  }
  source_.push_back(from);
  target_.push_back(to);
  cost_.push_back(cost);
  cap_.push_back(capacity);
  return arc_count_++;
}

void NetworkSimplex::set_supply(Node node, double supply) {
  if (initialized_) throw Error(ErrorCode::InvalidSpec, "supplies are fixed after the first solve");
  supply_.at(static_cast<std::size_t>(node)) = supply;
}

double NetworkSimplex::total_cost() const {
  double total = 0.0;
  for (std::size_t a = 0; a < static_cast<std::size_t>(arc_count_); ++a) total += cost_[a] * flow_[a];
  return total;
}

void NetworkSimplex::build_initial_tree() {
  const auto n = static_cast<std::size_t>(node_count_);
  const std::size_t root = n;
  const auto m = static_cast<std::size_t>(arc_count_);

  double balance = 0.0;
  double magnitude = 0.0;
  for (double b : supply_) {
    balance += b;
    magnitude += std::abs(b);
  }
  if (std::abs(balance) > 1e-9 * std::max(1.0, magnitude)) {
    throw Error(ErrorCode::InvalidSpec, "supplies do not balance");
  }

  double cmax = 0.0;
  for (std::size_t a = 0; a < m; ++a) cmax = std::max(cmax, std::abs(cost_[a]));
  art_ = (cmax + 1.0) * static_cast<double>(n + 1);
  tolerance_ = pivot_tolerance_ * std::max(1.0, cmax);

  flow_.assign(m, 0.0);
  state_.assign(m, kLower);
  parent_.assign(n + 1, -1);
  pred_.assign(n + 1, -1);
  up_.assign(n + 1, 0);
  depth_.assign(n + 1, 0);
  pi_.assign(n + 1, 0.0);
  big_.assign(n + 1, 0);
  first_child_.assign(n + 1, -1);
  next_sibling_.assign(n + 1, -1);
  prev_sibling_.assign(n + 1, -1);

  for (std::size_t u = 0; u < n; ++u) {
    const auto node = static_cast<Node>(u);
    const bool out = supply_[u] >= 0.0;
    source_.push_back(out ? node : static_cast<Node>(root));
    target_.push_back(out ? static_cast<Node>(root) : node);
    cost_.push_back(0.0);
    cap_.push_back(kInfinity);
    flow_.push_back(std::abs(supply_[u]));
    state_.push_back(kTree);
    parent_[u] = static_cast<Node>(root);
    pred_[u] = static_cast<Arc>(m + u);
    up_[u] = out ? 1 : 0;
    depth_[u] = 1;
    big_[u] = static_cast<std::int8_t>(out ? -1 : 1);
    attach_child(static_cast<Node>(root), node);
  }
  block_size_ = std::max<std::size_t>(10, static_cast<std::size_t>(std::sqrt(static_cast<double>(m + n))));
  next_arc_ = 0;
}

void NetworkSimplex::attach_child(Node parent, Node child) {
  const auto p = static_cast<std::size_t>(parent);
  const auto c = static_cast<std::size_t>(child);
  const Node head = first_child_[p];
  next_sibling_[c] = head;
  prev_sibling_[c] = -1;
  if (head >= 0) prev_sibling_[static_cast<std::size_t>(head)] = child;
  first_child_[p] = child;
}

void NetworkSimplex::detach_child(Node child) {
  const auto c = static_cast<std::size_t>(child);
  const Node prev = prev_sibling_[c];
  const Node next = next_sibling_[c];
  if (prev >= 0) {
    next_sibling_[static_cast<std::size_t>(prev)] = next;
  } else {
    first_child_[static_cast<std::size_t>(parent_[c])] = next;
  }
  if (next >= 0) prev_sibling_[static_cast<std::size_t>(next)] = prev;
  next_sibling_[c] = -1;
  prev_sibling_[c] = -1;
}

void NetworkSimplex::recompute_potentials() {
  const auto root = static_cast<Node>(node_count_);
  pi_[static_cast<std::size_t>(root)] = 0.0;
  big_[static_cast<std::size_t>(root)] = 0;
  depth_[static_cast<std::size_t>(root)] = 0;
  stack_.clear();
  stack_.push_back(root);
  while (!stack_.empty()) {
    const auto v = static_cast<std::size_t>(stack_.back());
    stack_.pop_back();
    for (Node c = first_child_[v]; c >= 0; c = next_sibling_[static_cast<std::size_t>(c)]) {
      const auto ci = static_cast<std::size_t>(c);
      const auto e = static_cast<std::size_t>(pred_[ci]);
      pi_[ci] = up_[ci] ? pi_[v] - cost_[e] : pi_[v] + cost_[e];
      big_[ci] = static_cast<std::int8_t>(up_[ci] ? big_[v] - big_cost(e) : big_[v] + big_cost(e));
      depth_[ci] = depth_[v] + 1;
      stack_.push_back(c);
    }
  }
}

void NetworkSimplex::shift_subtree(Node top, double shift, int big_shift) {
  stack_.clear();
  stack_.push_back(top);
  while (!stack_.empty()) {
    const auto v = static_cast<std::size_t>(stack_.back());
    stack_.pop_back();
    pi_[v] += shift;
    big_[v] = static_cast<std::int8_t>(big_[v] + big_shift);
    depth_[v] = depth_[static_cast<std::size_t>(parent_[v])] + 1;
    for (Node c = first_child_[v]; c >= 0; c = next_sibling_[static_cast<std::size_t>(c)]) stack_.push_back(c);
  }
}

bool NetworkSimplex::find_entering_arc(std::size_t& entering) {
  const std::size_t total = state_.size();
  double best = 0.0;
  std::size_t best_arc = 0;
  std::size_t count = block_size_;
  std::size_t e = next_arc_;
  for (std::size_t scanned = 0; scanned < total; ++scanned) {
    const double c = state_[e] * reduced_cost(e);
    if (c < best) {
      best = c;
      best_arc = e;
    }
    if (++e == total) e = 0;
    if (--count == 0) {
      if (best < -tolerance_) {
        next_arc_ = e;
        entering = best_arc;
        return true;
      }
      count = block_size_;
    }
  }
  if (best < -tolerance_) {
    next_arc_ = e;
    entering = best_arc;
    return true;
  }
  return false;
}

NetworkSimplex::Node NetworkSimplex::find_join(Node u, Node v) const {
  while (u != v) {
    const auto ui = static_cast<std::size_t>(u);
    const auto vi = static_cast<std::size_t>(v);
    if (depth_[ui] > depth_[vi]) {
      u = parent_[ui];
    } else if (depth_[vi] > depth_[ui]) {
      v = parent_[vi];
    } else {
      u = parent_[ui];
      v = parent_[vi];
    }
  }
  return u;
}

void NetworkSimplex::pivot(std::size_t in) {
  const Node src = source_[in];
  const Node tgt = target_[in];
  const bool at_lower = state_[in] == kLower;
  const Node first = at_lower ? src : tgt;
  const Node second = at_lower ? tgt : src;
  const Node join = find_join(src, tgt);

  // Leaving arc: bottleneck of the cycle with the strongly-feasible tie rule.
  double delta = cap_[in];
  int side = 0;
  Node u_out = -1;
  bool out_to_upper = false;
  for (Node w = first; w != join; w = parent_[static_cast<std::size_t>(w)]) {
    const auto wi = static_cast<std::size_t>(w);
    const auto e = static_cast<std::size_t>(pred_[wi]);
    const bool decreases = up_[wi] != 0;
    const double d = decreases ? flow_[e] : (std::isinf(cap_[e]) ? kInfinity : cap_[e] - flow_[e]);
    if (d < delta) {
      delta = d;
      u_out = w;
      side = 1;
      out_to_upper = !decreases;
    }
  }
  for (Node w = second; w != join; w = parent_[static_cast<std::size_t>(w)]) {
    const auto wi = static_cast<std::size_t>(w);
    const auto e = static_cast<std::size_t>(pred_[wi]);
    const bool decreases = up_[wi] == 0;
    const double d = decreases ? flow_[e] : (std::isinf(cap_[e]) ? kInfinity : cap_[e] - flow_[e]);
    if (d <= delta) {
      delta = d;
      u_out = w;
      side = 2;
      out_to_upper = !decreases;
    }
  }
  if (std::isinf(delta)) throw Error(ErrorCode::InvalidSpec, "unbounded min-cost flow (negative cycle)");

  if (delta > 0.0) {
    const double val = state_[in] * delta;
    flow_[in] += val;
    for (Node w = src; w != join; w = parent_[static_cast<std::size_t>(w)]) {
      const auto wi = static_cast<std::size_t>(w);
      flow_[static_cast<std::size_t>(pred_[wi])] += up_[wi] ? -val : val;
    }
    for (Node w = tgt; w != join; w = parent_[static_cast<std::size_t>(w)]) {
      const auto wi = static_cast<std::size_t>(w);
      flow_[static_cast<std::size_t>(pred_[wi])] += up_[wi] ? val : -val;
    }
  }

  if (side == 0) {
    // The entering arc saturates itself: bound flip, tree unchanged.
    flow_[in] = at_lower ? cap_[in] : 0.0;
    state_[in] = at_lower ? kUpper : kLower;
    return;
  }

  const auto leaving = static_cast<std::size_t>(pred_[static_cast<std::size_t>(u_out)]);
  flow_[leaving] = out_to_upper ? cap_[leaving] : 0.0;
  state_[leaving] = out_to_upper ? kUpper : kLower;
  state_[in] = kTree;

  const Node u_in = side == 1 ? first : second;
  const Node v_in = side == 1 ? second : first;
  const auto in_s = static_cast<std::size_t>(src);
  const auto in_t = static_cast<std::size_t>(tgt);
  const double rc_small = cost_[in] + pi_[in_s] - pi_[in_t];
  const int rc_big = big_cost(in) + big_[in_s] - big_[in_t];

  // Reverse the tree path u_in -> ... -> u_out and hang it below v_in.
  Node w = u_in;
  Node new_parent = v_in;
  Arc new_pred = static_cast<Arc>(in);
  std::uint8_t new_up = source_[in] == u_in ? 1 : 0;
  while (true) {
    const auto wi = static_cast<std::size_t>(w);
    const Node old_parent = parent_[wi];
    const Arc old_pred = pred_[wi];
    const std::uint8_t old_up = up_[wi];
    detach_child(w);
    parent_[wi] = new_parent;
    pred_[wi] = new_pred;
    up_[wi] = new_up;
    attach_child(new_parent, w);
    if (w == u_out) break;
    new_parent = w;
    new_pred = old_pred;
    new_up = old_up ? 0 : 1;
    w = old_parent;
  }

  if (u_in == tgt) {
    shift_subtree(u_in, rc_small, rc_big);
  } else {
    shift_subtree(u_in, -rc_small, -rc_big);
  }
}

bool NetworkSimplex::run_pivots() {
  const auto refresh = static_cast<std::uint64_t>(node_count_) + 1;
  std::uint64_t since_refresh = 0;
  std::size_t entering = 0;
  bool any = false;
  while (find_entering_arc(entering)) {
    pivot(entering);
    ++pivots_;
    any = true;
    if (++since_refresh >= refresh) {
      recompute_potentials();
      since_refresh = 0;
    }
  }
  return any;
}

double NetworkSimplex::min_reduced_cost() const {
  double best = 0.0;
  for (std::size_t a = 0; a < state_.size(); ++a) {
    if (state_[a] == kTree) continue;
    best = std::min(best, state_[a] * reduced_cost(a));
  }
  return best;
}

NetworkSimplex::Status NetworkSimplex::solve() {
  if (!initialized_) {
    build_initial_tree();
    initialized_ = true;
  } else {
    const auto m = static_cast<std::size_t>(arc_count_);
    double cmax = 0.0;
    for (std::size_t a = 0; a < m; ++a) cmax = std::max(cmax, std::abs(cost_[a]));
    art_ = (cmax + 1.0) * static_cast<double>(node_count_ + 1);
    tolerance_ = pivot_tolerance_ * std::max(1.0, cmax);
    recompute_potentials();
  }

  // Pivot until a sweep with freshly propagated potentials finds nothing.
  for (int round = 0; round < 8; ++round) {
    run_pivots();
    recompute_potentials();
    if (min_reduced_cost() >= -tolerance_) break;
  }

  double magnitude = 0.0;
  for (double b : supply_) magnitude += std::abs(b);
  for (std::size_t a = static_cast<std::size_t>(arc_count_); a < flow_.size(); ++a) {
    if (flow_[a] > 1e-9 * std::max(1.0, magnitude)) return Status::Infeasible;
  }
  return Status::Optimal;
}

}  // namespace wproj
