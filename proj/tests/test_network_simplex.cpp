#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "wproj/network_simplex.hpp"

namespace wproj {
namespace {

// Successive shortest paths with Bellman-Ford on the residual graph. Slow but
// independent of the simplex code.
struct SspArc {
  int from, to;
  double cap, cost, flow = 0.0;
};

double ssp_min_cost(int nodes, std::vector<SspArc> arcs, const std::vector<double>& supply, bool& feasible) {
  const int s = nodes, t = nodes + 1;
  const double inf = std::numeric_limits<double>::infinity();
  double need = 0.0;
  for (int v = 0; v < nodes; ++v) {
    if (supply[v] > 0) {
      arcs.push_back({s, v, supply[v], 0.0});
      need += supply[v];
    } else if (supply[v] < 0) {
      arcs.push_back({v, t, -supply[v], 0.0});
    }
  }
  double sent = 0.0, cost = 0.0;
  while (sent < need - 1e-12) {
    std::vector<double> dist(nodes + 2, inf);
    std::vector<int> via(nodes + 2, -1);  // arc index * 2 + (reverse ? 1 : 0)
    dist[s] = 0.0;
    for (int it = 0; it < nodes + 2; ++it) {
      bool changed = false;
      for (std::size_t a = 0; a < arcs.size(); ++a) {
        const auto& e = arcs[a];
        if (e.cap - e.flow > 1e-12 && dist[e.from] + e.cost < dist[e.to] - 1e-14) {
          dist[e.to] = dist[e.from] + e.cost;
          via[e.to] = static_cast<int>(2 * a);
          changed = true;
        }
        if (e.flow > 1e-12 && dist[e.to] - e.cost < dist[e.from] - 1e-14) {
          dist[e.from] = dist[e.to] - e.cost;
          via[e.from] = static_cast<int>(2 * a + 1);
          changed = true;
        }
      }
      if (!changed) break;
    }
    if (dist[t] == inf) {
      feasible = false;
      return cost;
    }
    double push = need - sent;
    for (int v = t; v != s;) {
      const auto& e = arcs[static_cast<std::size_t>(via[v] / 2)];
      const bool rev = via[v] % 2 == 1;
      push = std::min(push, rev ? e.flow : e.cap - e.flow);
      v = rev ? e.to : e.from;
    }
    for (int v = t; v != s;) {
      auto& e = arcs[static_cast<std::size_t>(via[v] / 2)];
      const bool rev = via[v] % 2 == 1;
      e.flow += rev ? -push : push;
      cost += rev ? -push * e.cost : push * e.cost;
      v = rev ? e.to : e.from;
    }
    sent += push;
  }
  feasible = true;
  return cost;
}

double brute_assignment(const std::vector<std::vector<double>>& c) {
  std::vector<int> perm(c.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i][static_cast<std::size_t>(perm[i])];
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

TEST(NetworkSimplex, AssignmentMatchesBruteForce) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 6;
    std::vector<std::vector<double>> c(n, std::vector<double>(n));
    NetworkSimplex ns(2 * n);
    for (int i = 0; i < n; ++i) {
      ns.set_supply(i, 1.0);
      ns.set_supply(n + i, -1.0);
      for (int j = 0; j < n; ++j) {
        c[i][j] = trial % 3 == 0 ? std::floor(u(rng)) : u(rng);  // integer costs force degeneracy
        ns.add_arc(i, n + j, c[i][j]);
      }
    }
    ASSERT_EQ(ns.solve(), NetworkSimplex::Status::Optimal);
    EXPECT_NEAR(ns.total_cost(), brute_assignment(c), 1e-10) << "trial " << trial;
    EXPECT_GE(ns.min_reduced_cost(), -1e-10);
  }
}

TEST(NetworkSimplex, CapacitatedFlowMatchesSuccessiveShortestPaths) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 4 + trial % 5;
    std::vector<double> supply(n, 0.0);
    const double amount = 0.5 + u(rng);
    supply[0] = amount;
    supply[1] = 0.5 * amount;
    supply[n - 1] = -0.75 * amount;
    supply[n - 2] = -0.75 * amount;
    std::vector<SspArc> arcs;
    NetworkSimplex ns(n);
    for (int v = 0; v < n; ++v) ns.set_supply(v, supply[v]);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j || u(rng) < 0.4) continue;
        const double cap = 0.2 + u(rng);
        const double cost = 1.0 + 5.0 * u(rng);
        arcs.push_back({i, j, cap, cost});
        ns.add_arc(i, j, cost, cap);
      }
    }
    bool feasible = false;
    const double expected = ssp_min_cost(n, arcs, supply, feasible);
    const auto status = ns.solve();
    if (!feasible) {
      EXPECT_EQ(status, NetworkSimplex::Status::Infeasible) << "trial " << trial;
      continue;
    }
    ASSERT_EQ(status, NetworkSimplex::Status::Optimal) << "trial " << trial;
    EXPECT_NEAR(ns.total_cost(), expected, 1e-9) << "trial " << trial;
    std::vector<double> balance(n, 0.0);
    for (int a = 0; a < ns.arc_count(); ++a) {
      EXPECT_GE(ns.flow(a), -1e-12);
      balance[ns.arc_source(a)] += ns.flow(a);
      balance[ns.arc_target(a)] -= ns.flow(a);
    }
    for (int v = 0; v < n; ++v) EXPECT_NEAR(balance[v], supply[v], 1e-9);
  }
}

TEST(NetworkSimplex, ReportsInfeasibleCapacity) {
  NetworkSimplex ns(2);
  ns.set_supply(0, 1.0);
  ns.set_supply(1, -1.0);
  ns.add_arc(0, 1, 1.0, 0.5);
  EXPECT_EQ(ns.solve(), NetworkSimplex::Status::Infeasible);
}

TEST(NetworkSimplex, WarmStartEqualsColdSolve) {
  const int n = 30;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(n), y(n);
  for (auto& v : x) v = u(rng);
  for (auto& v : y) v = u(rng);
  auto build = [&](double p) {
    NetworkSimplex ns(2 * n);
    for (int i = 0; i < n; ++i) {
      ns.set_supply(i, 1.0 / n);
      ns.set_supply(n + i, -1.0 / n);
      for (int j = 0; j < n; ++j) ns.add_arc(i, n + j, std::pow(std::abs(x[i] - y[j]), p));
    }
    return ns;
  };
  auto warm = build(1.0);
  ASSERT_EQ(warm.solve(), NetworkSimplex::Status::Optimal);
  for (double p : {1.25, 1.5, 2.0, 3.0}) {
    auto costs = warm.user_costs();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) costs[static_cast<std::size_t>(i * n + j)] = std::pow(std::abs(x[i] - y[j]), p);
    ASSERT_EQ(warm.solve(), NetworkSimplex::Status::Optimal);
    auto cold = build(p);
    ASSERT_EQ(cold.solve(), NetworkSimplex::Status::Optimal);
    EXPECT_NEAR(warm.total_cost(), cold.total_cost(), 1e-13) << "p=" << p;
  }
}

}  // namespace
}  // namespace wproj
