// Copyright 2026 The collab developers. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "collab/model.hpp"

namespace collab {

/// Complete bipartite player-vs-position weights, w[i][t] for player i at
/// 1-based time t+1.
struct AssignmentProblem {
  std::vector<std::vector<double>> weights;

  int size() const { return static_cast<int>(weights.size()); }

  void validate() const {
    for (const auto& row : weights) {
      if (row.size() != weights.size())
        throw std::invalid_argument("assignment: matrix not square");
      for (double w : row)
        if (!std::isfinite(w))
          throw std::invalid_argument("assignment: non-finite weight");
    }
  }
};

struct AssignmentResult {
  Ordering order;  // player_at[t] = player matched with position t
  double weight = 0;
};

namespace detail {

/// Shortest-augmenting-path assignment (Jonker-Volgenant flavour), O(n^3).
/// Rows are positions, columns are players.
inline std::vector<int> solve_assignment_rows(
    const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> match(n + 1, 0);  // match[col 1..n] = row
  std::vector<int> way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n);
  for (int j = 1; j <= n; ++j) row_to_col[match[j] - 1] = j - 1;
  return row_to_col;
}

inline double matching_weight(const AssignmentProblem& problem,
                              const std::vector<int>& player_at) {
  double acc = 0;
  for (std::size_t t = 0; t < player_at.size(); ++t)
    acc += problem.weights[player_at[t]][t];
  return acc;
}

}  // namespace detail

/// Minimum-weight perfect matching between players and positions. Among
/// minimum matchings the lexicographically smallest publication order wins
/// (refined greedily, position by position, for n <= 32).
inline AssignmentResult min_cost_assignment(const AssignmentProblem& problem) {
  problem.validate();
  const int n = problem.size();
  if (n == 0) throw std::invalid_argument("assignment: empty problem");

  // rows = positions, cols = players, so the solver returns player_at.
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < n; ++t) cost[t][i] = problem.weights[i][t];

  std::vector<int> player_at = detail::solve_assignment_rows(cost);
  const double best = detail::matching_weight(problem, player_at);

  if (n <= 32) {
    // Fix positions front to back with the smallest player index that still
    // completes to an optimal matching.
    std::vector<int> fixed;
    std::vector<bool> taken(n, false);
    for (int t = 0; t < n; ++t) {
      for (int candidate = 0; candidate < n; ++candidate) {
        if (taken[candidate]) continue;
        // Solve the residual problem with candidate pinned at position t.
        const int m = n - t - 1;
        double prefix = problem.weights[candidate][t];
        for (int tt = 0; tt < t; ++tt) prefix += problem.weights[fixed[tt]][tt];
        double completion = 0;
        if (m > 0) {
          std::vector<int> free_players;
          for (int p = 0; p < n; ++p)
            if (!taken[p] && p != candidate) free_players.push_back(p);
          std::vector<std::vector<double>> sub(m, std::vector<double>(m));
          for (int tt = 0; tt < m; ++tt)
            for (int pp = 0; pp < m; ++pp)
              sub[tt][pp] = problem.weights[free_players[pp]][t + 1 + tt];
          const auto sub_match = detail::solve_assignment_rows(sub);
          for (int tt = 0; tt < m; ++tt)
            completion += sub[tt][sub_match[tt]];
        }
        if (prefix + completion <= best + kTol) {
          fixed.push_back(candidate);
          taken[candidate] = true;
          break;
        }
      }
      if (static_cast<int>(fixed.size()) != t + 1)
        throw std::logic_error("assignment: lexicographic refinement failed");
    }
    player_at = fixed;
  }
  return AssignmentResult{Ordering(player_at), detail::matching_weight(problem, player_at)};
}

/// Mechanism edge weights: w(i,t) = alpha_i/beta^t + (n-t) mu_i, which makes a
/// matching's weight equal the ordering cost of the induced permutation.
inline AssignmentProblem build_assignment(const Instance& inst) {
  const auto* nd = std::get_if<NDimBounds>(&inst.bounds);
  if (!nd) throw std::invalid_argument("build_assignment: needs NDim bounds");
  AssignmentProblem problem;
  problem.weights.assign(inst.n, std::vector<double>(inst.n));
  for (int i = 0; i < inst.n; ++i)
    for (int t = 1; t <= inst.n; ++t)
      problem.weights[i][t - 1] =
          inst.alpha[i] / std::pow(inst.beta, t) + (inst.n - t) * nd->mu[i];
  return problem;
}

namespace detail {

/// Backward schedule construction from the sufficiency recursion, anchored
/// at delta_{pi(n)} = smax; each gap is alpha/beta^t plus what the
/// predecessor may have learned, widened by epsilon. Every recursion step
/// (t = n..2) is tight; the whole remaining budget pools at t = 1.
inline ProposedOutcome build_schedule(const Instance& inst, const Ordering& order) {
  std::vector<double> delta(inst.n, 0.0);
  delta[order.player_at[inst.n - 1]] = inst.smax;
  for (int t = inst.n; t >= 2; --t) {
    const double gap = inst.alpha[order.player_at[t - 1]] / std::pow(inst.beta, t) +
                       lambda_of(inst.bounds, order, t - 1) + inst.epsilon;
    delta[order.player_at[t - 2]] = delta[order.player_at[t - 1]] - gap;
  }
  return ProposedOutcome{order, delta};
}

}  // namespace detail

/// The polynomial-time mechanism: minimum-weight matching picks the
/// ordering, the backward recursion prices the proposed outputs. Returns
/// nullopt exactly when no ordering fits the budget.
inline std::optional<ProposedOutcome> share_data(const Instance& inst) {
  inst.validate();
  if (!std::holds_alternative<NDimBounds>(inst.bounds))
    throw std::invalid_argument("share_data: needs NDim bounds; use decide_nsq");
  const auto assignment = min_cost_assignment(build_assignment(inst));
  if (assignment.weight > feasibility_budget(inst) + kTol) return std::nullopt;
  return detail::build_schedule(inst, assignment.order);
}

/// Test oracle: enumerate every permutation, apply the summed feasibility
/// inequality directly, and rebuild the witness schedule with the same
/// recursion. Handles all bound variants.
inline std::optional<ProposedOutcome> brute_force_equilibrium(const Instance& inst) {
  inst.validate();
  if (inst.n > 8) throw std::invalid_argument("brute_force: capped at n <= 8");
  std::vector<int> perm(inst.n);
  for (int i = 0; i < inst.n; ++i) perm[i] = i;
  const double budget = feasibility_budget(inst);
  do {
    const Ordering order{std::vector<int>(perm)};
    if (ordering_cost(inst, order) <= budget + kTol)
      return detail::build_schedule(inst, order);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

struct NsqDecision {
  bool feasible = false;
  std::optional<Ordering> witness;
};

/// Exact decision for n^2-dimensional bounds via branch-and-bound over
/// partial orderings: placing a player adds its discounted outside option
/// plus the pairwise bounds toward everyone already placed, and any partial
/// sum beyond the budget prunes the subtree.
inline NsqDecision decide_nsq(const Instance& inst) {
  inst.validate();
  const auto* ns = std::get_if<NSquaredBounds>(&inst.bounds);
  if (!ns) throw std::invalid_argument("decide_nsq: needs NSquared bounds");
  if (inst.n > 10) throw std::invalid_argument("decide_nsq: capped at n <= 10");

  const double budget = feasibility_budget(inst);
  std::vector<int> prefix;
  std::vector<bool> used(inst.n, false);
  std::optional<Ordering> witness;

  auto recurse = [&](auto&& self, double cost) -> bool {
    if (static_cast<int>(prefix.size()) == inst.n) {
      witness = Ordering{std::vector<int>(prefix)};
      return true;
    }
    const int t = static_cast<int>(prefix.size()) + 1;
    for (int player = 0; player < inst.n; ++player) {
      if (used[player]) continue;
      double added = inst.alpha[player] / std::pow(inst.beta, t);
      for (int placed : prefix)
        if (placed != player) added += ns->mu[player][placed];
      if (cost + added > budget + kTol) continue;
      used[player] = true;
      prefix.push_back(player);
      if (self(self, cost + added)) return true;
      prefix.pop_back();
      used[player] = false;
    }
    return false;
  };
  const bool feasible = recurse(recurse, 0.0);
  return NsqDecision{feasible, witness};
}

// -- feedback-arc-set reduction harness ------------------------------------

struct FasEdge {
  int from = 0;
  int to = 0;
  double weight = 0;
};

struct FasInstance {
  int n = 0;
  std::vector<FasEdge> edges;
  double gamma = 0;

  void validate() const {
    if (n < 1) throw std::invalid_argument("fas: need n >= 1");
    if (!(gamma >= 0)) throw std::invalid_argument("fas: negative threshold");
    for (const auto& e : edges) {
      if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
        throw std::invalid_argument("fas: edge endpoint out of range");
      if (!(e.weight >= 0)) throw std::invalid_argument("fas: negative edge weight");
    }
  }
};

/// Encodes min-weight-FAS <= gamma as an n^2-dimensional feasibility
/// question: alpha = 0, beta = 1, mu_{i,j} = w(i,j), budget gamma. A
/// permutation's pairwise cost is exactly its back-edge weight.
inline Instance fas_to_instance(const FasInstance& fas) {
  fas.validate();
  NSquaredBounds bounds;
  bounds.mu.assign(fas.n, std::vector<double>(fas.n, 0.0));
  for (const auto& e : fas.edges) bounds.mu[e.from][e.to] += e.weight;
  Instance inst;
  inst.n = fas.n;
  inst.alpha.assign(fas.n, 0.0);
  inst.beta = 1.0;
  inst.bounds = bounds;
  inst.s0 = 0.0;
  inst.smax = fas.gamma;
  inst.epsilon = 0.0;
  return inst;
}

/// Exact minimum feedback-arc-set weight by ordering enumeration (n <= 8):
/// minimal FAS sets are exactly the back-edge sets of vertex orderings.
inline double min_fas_weight_brute(const FasInstance& fas) {
  fas.validate();
  if (fas.n > 8) throw std::invalid_argument("min_fas: capped at n <= 8");
  std::vector<int> perm(fas.n);
  for (int i = 0; i < fas.n; ++i) perm[i] = i;
  std::vector<int> pos(fas.n);
  double best = std::numeric_limits<double>::infinity();
  do {
    for (int t = 0; t < fas.n; ++t) pos[perm[t]] = t;
    double w = 0;
    for (const auto& e : fas.edges)
      if (pos[e.from] > pos[e.to]) w += e.weight;
    best = std::min(best, w);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace collab
