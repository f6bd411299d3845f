// Copyright 2026 The collab developers. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace collab {

/// Absolute tolerance for every real comparison in the model layer.
inline constexpr double kTol = 1e-9;

/// Publication ordering. Internally players and positions are 0-based;
/// `player_at[t]` is the player who publishes at time t+1.
struct Ordering {
  std::vector<int> player_at;

  Ordering() = default;
  explicit Ordering(std::vector<int> order) : player_at(std::move(order)) { validate(); }

  static Ordering identity(int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    return Ordering(std::move(v));
  }

  int size() const { return static_cast<int>(player_at.size()); }

  /// 0-based position at which `player` publishes.
  int position_of(int player) const {
    for (int t = 0; t < size(); ++t)
      if (player_at[t] == player) return t;
    throw std::out_of_range("ordering: unknown player");
  }

  void validate() const {
    std::vector<bool> seen(player_at.size(), false);
    for (int p : player_at) {
      if (p < 0 || p >= size() || seen[p])
        throw std::invalid_argument("ordering: not a permutation");
      seen[p] = true;
    }
  }

  friend bool operator==(const Ordering& a, const Ordering& b) {
    return a.player_at == b.player_at;
  }
  friend bool operator<(const Ordering& a, const Ordering& b) {
    return a.player_at < b.player_at;
  }
};

// -- learning bounds -----------------------------------------------------

/// lambda_{pi,pi(t)} = sum_{tau<t} mu_{pi(tau)}: per-teacher caps.
struct NDimBounds {
  std::vector<double> mu;
};

/// lambda_{pi,pi(t)} = sum_{tau<t} mu_{pi(t),pi(tau)}: per-pair caps.
/// Diagonal entries are never read (a player does not learn from her own
/// publication).
struct NSquaredBounds {
  std::vector<std::vector<double>> mu;
};

/// Explicit (ordering, player) -> lambda map. The object is n!*n-dimensional,
/// so it is only admitted for n <= 6.
struct GeneralBounds {
  std::map<std::pair<std::vector<int>, int>, double> lambda;
};

using LearningBounds = std::variant<NDimBounds, NSquaredBounds, GeneralBounds>;

inline constexpr int kGeneralBoundsMaxN = 6;

inline void validate_bounds(const LearningBounds& bounds, int n) {
  if (const auto* nd = std::get_if<NDimBounds>(&bounds)) {
    if (static_cast<int>(nd->mu.size()) != n)
      throw std::invalid_argument("bounds: mu dimension mismatch");
    for (double m : nd->mu)
      if (!(m >= 0)) throw std::invalid_argument("bounds: negative mu");
  } else if (const auto* ns = std::get_if<NSquaredBounds>(&bounds)) {
    if (static_cast<int>(ns->mu.size()) != n)
      throw std::invalid_argument("bounds: mu dimension mismatch");
    for (const auto& row : ns->mu) {
      if (static_cast<int>(row.size()) != n)
        throw std::invalid_argument("bounds: mu matrix not square");
      for (double m : row)
        if (!(m >= 0)) throw std::invalid_argument("bounds: negative mu");
    }
  } else if (const auto* g = std::get_if<GeneralBounds>(&bounds)) {
    if (n > kGeneralBoundsMaxN)
      throw std::invalid_argument("bounds: general variant capped at n <= 6");
    for (const auto& [key, lam] : g->lambda)
      if (!(lam >= 0)) throw std::invalid_argument("bounds: negative lambda");
  }
}

/// A collaboration problem. `min_improvement` is the strictness slack
/// epsilon: 0 admits equal consecutive publication scores, positive values
/// force gaps and tighten the feasibility budget by n*epsilon.
struct Instance {
  int n = 0;
  std::vector<double> alpha;
  double beta = 1.0;
  LearningBounds bounds = NDimBounds{};
  double s0 = 0.0;
  double smax = 0.0;
  double epsilon = 0.0;

  void validate() const {
    if (n < 1) throw std::invalid_argument("instance: need n >= 1");
    if (static_cast<int>(alpha.size()) != n)
      throw std::invalid_argument("instance: alpha dimension mismatch");
    for (double a : alpha)
      if (!(a >= 0)) throw std::invalid_argument("instance: negative alpha");
    if (!(beta > 0.0 && beta <= 1.0))
      throw std::invalid_argument("instance: beta must lie in (0,1]");
    if (!(s0 <= smax + kTol)) throw std::invalid_argument("instance: s0 > smax");
    if (!(epsilon >= 0)) throw std::invalid_argument("instance: negative epsilon");
    validate_bounds(bounds, n);
  }
};

/// An ordering plus a monotone score schedule, delta indexed by player.
struct ProposedOutcome {
  Ordering order;
  std::vector<double> delta;
};

inline void validate_outcome(const Instance& inst, const ProposedOutcome& outcome) {
  if (outcome.order.size() != inst.n ||
      static_cast<int>(outcome.delta.size()) != inst.n)
    throw std::invalid_argument("outcome: dimension mismatch");
  outcome.order.validate();
  const double min_gap = inst.epsilon > 0 ? inst.epsilon - kTol : -kTol;
  double prev = inst.s0;
  for (int t = 0; t < inst.n; ++t) {
    const double d = outcome.delta[outcome.order.player_at[t]];
    if (d - prev < min_gap)
      throw std::invalid_argument("outcome: schedule not monotone");
    prev = d;
  }
  if (prev > inst.smax + kTol)
    throw std::invalid_argument("outcome: schedule exceeds smax");
}

// -- operations ----------------------------------------------------------

/// R_t = beta^t * (s(Z_{pi(t)}) - s(Z_{pi(t-1)})), with s0 standing in for
/// the predecessor at t = 1. `t` is the 1-based time index.
inline double reward(int t, const Ordering& order, const std::vector<double>& z_scores,
                     const Instance& inst) {
  if (t < 1 || t > inst.n) throw std::out_of_range("reward: t out of range");
  if (static_cast<int>(z_scores.size()) != inst.n)
    throw std::invalid_argument("reward: score vector dimension mismatch");
  const double cur = z_scores[order.player_at[t - 1]];
  const double prev = t > 1 ? z_scores[order.player_at[t - 2]] : inst.s0;
  return std::pow(inst.beta, t) * (cur - prev);
}

/// lambda_{pi,pi(t)} for 1-based time index t: how much the player who
/// publishes t-th can have learned from the t-1 earlier publications.
inline double lambda_of(const LearningBounds& bounds, const Ordering& order, int t) {
  const int n = order.size();
  if (t < 1 || t > n) throw std::out_of_range("lambda_of: t out of range");
  if (const auto* nd = std::get_if<NDimBounds>(&bounds)) {
    double acc = 0;
    for (int tau = 0; tau < t - 1; ++tau) acc += nd->mu[order.player_at[tau]];
    return acc;
  }
  if (const auto* ns = std::get_if<NSquaredBounds>(&bounds)) {
    const int learner = order.player_at[t - 1];
    double acc = 0;
    for (int tau = 0; tau < t - 1; ++tau) {
      const int teacher = order.player_at[tau];
      if (teacher != learner) acc += ns->mu[learner][teacher];
    }
    return acc;
  }
  const auto& g = std::get<GeneralBounds>(bounds);
  const auto it = g.lambda.find({order.player_at, order.player_at[t - 1]});
  if (it == g.lambda.end())
    throw std::invalid_argument("lambda_of: general bounds missing entry");
  return it->second;
}

struct Interval {
  double lo = 0;
  double hi = 0;
};

/// Per-player inferred-score envelope [delta, delta + lambda].
inline std::vector<Interval> inferred_envelope(const ProposedOutcome& outcome,
                                               const LearningBounds& bounds,
                                               const Instance& inst) {
  validate_outcome(inst, outcome);
  std::vector<Interval> env(inst.n);
  for (int t = 1; t <= inst.n; ++t) {
    const int player = outcome.order.player_at[t - 1];
    const double d = outcome.delta[player];
    env[player] = Interval{d, d + lambda_of(bounds, outcome.order, t)};
  }
  return env;
}

struct EquilibriumVerdict {
  bool ok = false;
  int violated_t = 0;  // 1-based first failing time index when !ok
};

/// Worst-case equilibrium check: the predecessor published at the top of her
/// envelope, the current player at the bottom of hers. Throws on a
/// non-monotone schedule (distinct from returning false).
inline EquilibriumVerdict is_collaborative_equilibrium(const Instance& inst,
                                                       const ProposedOutcome& outcome) {
  validate_outcome(inst, outcome);
  for (int t = 1; t <= inst.n; ++t) {
    const double cur = outcome.delta[outcome.order.player_at[t - 1]];
    const double prev =
        t > 1 ? outcome.delta[outcome.order.player_at[t - 2]] : inst.s0;
    const double prev_lambda = t > 1 ? lambda_of(inst.bounds, outcome.order, t - 1) : 0.0;
    const double worst_reward = std::pow(inst.beta, t) * (cur - prev - prev_lambda);
    if (worst_reward < inst.alpha[outcome.order.player_at[t - 1]] - kTol)
      return EquilibriumVerdict{false, t};
  }
  return EquilibriumVerdict{true, 0};
}

/// Total budget an ordering must fit into: sum_t alpha_{pi(t)}/beta^t plus
/// the summed learning bounds sum_t lambda_{pi,pi(t)}. For NDim bounds the
/// lambda sum telescopes to sum_t (n-t) mu_{pi(t)}.
inline double ordering_cost(const Instance& inst, const Ordering& order) {
  double acc = 0;
  for (int t = 1; t <= inst.n; ++t) {
    acc += inst.alpha[order.player_at[t - 1]] / std::pow(inst.beta, t);
    acc += lambda_of(inst.bounds, order, t);
  }
  return acc;
}

inline double feasibility_budget(const Instance& inst) {
  return inst.smax - inst.s0 - inst.n * inst.epsilon;
}

/// Closed-form feasibility test for one ordering; NDim bounds only.
inline bool supports_equilibrium(const Instance& inst, const Ordering& order) {
  inst.validate();
  if (!std::holds_alternative<NDimBounds>(inst.bounds))
    throw std::invalid_argument(
        "supports_equilibrium: closed form needs NDim bounds; use the "
        "exhaustive engine for other variants");
  if (order.size() != inst.n)
    throw std::invalid_argument("supports_equilibrium: ordering size mismatch");
  return ordering_cost(inst, order) <= feasibility_budget(inst) + kTol;
}

// -- superadditivity -----------------------------------------------------

struct SuperadditivityVerdict {
  bool ok = false;
  std::uint32_t witness_a = 0;  // violating disjoint pair when !ok
  std::uint32_t witness_b = 0;
};

/// Exhaustive superadditivity check over all disjoint non-empty subset pairs.
/// Subsets are bitmasks over [n]; the table must cover every non-empty mask.
inline SuperadditivityVerdict auxiliary_score_is_superadditive(
    const std::map<std::uint32_t, double>& table, int n) {
  if (n < 1 || n > 12)
    throw std::invalid_argument("superadditive: need 1 <= n <= 12");
  const std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t s = 1; s <= full; ++s)
    if (!table.count(s))
      throw std::invalid_argument("superadditive: table missing a subset");
  for (std::uint32_t a = 1; a <= full; ++a) {
    // Enumerate subsets of the complement so every pair is disjoint.
    const std::uint32_t comp = full & ~a;
    for (std::uint32_t b = comp; b; b = (b - 1) & comp) {
      if (table.at(a) + table.at(b) > table.at(a | b) + kTol)
        return SuperadditivityVerdict{false, a, b};
    }
  }
  return SuperadditivityVerdict{true, 0, 0};
}

}  // namespace collab
