// Copyright 2026 The collab developers. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "collab/model.hpp"
#include "json.hpp"

namespace collab {

/// Opaque realization of a target score. The mechanism layer only ever looks
/// at `score`; `detail` carries the model-specific structure for reports.
struct RealizedOutput {
  double score = 0;
  nlohmann::json detail;
};

/// Score-level view of one model setting. realize() must hit any requested
/// score in [prior_score, max_score] to within 1e-9 (output divisibility);
/// that is what lets the mechanism's backward recursion pick exact targets.
class ScoreModel {
 public:
  virtual ~ScoreModel() = default;
  virtual int player_count() const = 0;
  virtual double prior_score() const = 0;
  virtual double max_score() const = 0;
  virtual double alpha_of(int player) const = 0;
  virtual RealizedOutput realize(double target) const = 0;
  virtual std::string name() const = 0;
};

namespace detail {

inline double binary_entropy(double q) {
  if (q <= 0.0 || q >= 1.0) return 0.0;
  return -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
}

/// Smallest q in [0, 1/2] with 1 - H_b(q) = target, by bisection.
inline double bias_for_entropy_gain(double target) {
  double lo = 0.0, hi = 0.5;
  for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (1.0 - binary_entropy(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// -- secret reconstruction (Toy Example I) --------------------------------

/// Players hold XOR shares of a uniform L-bit secret; score is the entropy
/// already removed from the secret. Nobody learns anything alone, so every
/// outside option is zero while pooling reveals everything.
class XorSecretModel final : public ScoreModel {
 public:
  XorSecretModel(int n, int bit_length) : n_(n), bits_(bit_length) {
    if (n < 1 || bit_length < 1)
      throw std::invalid_argument("xor_secret: need n >= 1 and bits >= 1");
  }

  int player_count() const override { return n_; }
  double prior_score() const override { return 0.0; }
  double max_score() const override { return bits_; }
  double alpha_of(int) const override { return 0.0; }
  std::string name() const override { return "xor_secret"; }

  /// Reveals floor(target) bits outright; a fractional remainder is carried
  /// by one more bit published with the bias whose entropy gain matches.
  RealizedOutput realize(double target) const override {
    check_range(target);
    int whole = static_cast<int>(std::floor(target + kTol));
    double frac = target - whole;
    if (frac < kTol) frac = 0.0;
    if (whole > bits_) whole = bits_;
    const double bias = frac > 0 ? detail::bias_for_entropy_gain(frac) : 0.5;
    const double score = whole + (frac > 0 ? 1.0 - detail::binary_entropy(bias) : 0.0);
    return RealizedOutput{
        score,
        {{"revealed_bits", whole}, {"partial_bit_bias", frac > 0 ? bias : 0.5}}};
  }

 private:
  void check_range(double target) const {
    if (target < -kTol || target > bits_ + kTol)
      throw std::domain_error("xor_secret: target score out of range");
  }
  int n_;
  int bits_;
};

// -- network flow (Toy Example II) ----------------------------------------

struct FlowEdge {
  int from = 0;
  int to = 0;
};

/// Players hold disjoint edge sets of a directed graph; score counts
/// source-to-sink paths certified by a published edge distribution. Integer
/// scores count paths known with certainty; fractional targets hold the
/// next canonical path at the matching certainty, which keeps the score
/// divisible.
class PathFlowModel final : public ScoreModel {
 public:
  PathFlowModel(int vertex_count, std::vector<FlowEdge> edges, int source, int sink,
                std::vector<std::vector<int>> edge_partition)
      : vertices_(vertex_count),
        edges_(std::move(edges)),
        source_(source),
        sink_(sink),
        partition_(std::move(edge_partition)) {
    if (edges_.size() > 16)
      throw std::invalid_argument("path_flow: graphs capped at 16 edges");
    for (const auto& e : edges_)
      if (e.from < 0 || e.from >= vertices_ || e.to < 0 || e.to >= vertices_)
        throw std::invalid_argument("path_flow: edge endpoint out of range");
    std::vector<bool> owned(edges_.size(), false);
    for (const auto& part : partition_)
      for (int ei : part) {
        if (ei < 0 || ei >= static_cast<int>(edges_.size()) || owned[ei])
          throw std::invalid_argument("path_flow: partition must cover edges once");
        owned[ei] = true;
      }
    enumerate_paths();
  }

  int player_count() const override { return static_cast<int>(partition_.size()); }
  double prior_score() const override { return 0.0; }
  double max_score() const override { return static_cast<double>(paths_.size()); }
  std::string name() const override { return "path_flow"; }

  /// Paths certain from the player's own edges alone.
  double alpha_of(int player) const override {
    std::vector<bool> has(edges_.size(), false);
    for (int ei : partition_.at(player)) has[ei] = true;
    int count = 0;
    for (const auto& path : paths_) {
      bool all = true;
      for (int ei : path)
        if (!has[ei]) {
          all = false;
          break;
        }
      if (all) ++count;
    }
    return count;
  }

  RealizedOutput realize(double target) const override {
    if (target < -kTol || target > max_score() + kTol)
      throw std::domain_error("path_flow: target score out of range");
    int whole = static_cast<int>(std::floor(target + kTol));
    double frac = target - whole;
    if (frac < kTol) frac = 0.0;
    if (whole > static_cast<int>(paths_.size())) whole = static_cast<int>(paths_.size());
    nlohmann::json certain = nlohmann::json::array();
    for (int i = 0; i < whole; ++i) certain.push_back(path_vertices(i));
    nlohmann::json partial;
    if (frac > 0) partial = {{"path", path_vertices(whole)}, {"certainty", frac}};
    return RealizedOutput{whole + frac,
                          {{"certain_paths", certain}, {"partial", partial}}};
  }

  int path_count() const { return static_cast<int>(paths_.size()); }

  /// Vertex sequence of the i-th canonical path.
  std::vector<int> path_vertices(int i) const {
    std::vector<int> verts{source_};
    for (int ei : paths_.at(i)) verts.push_back(edges_[ei].to);
    return verts;
  }

 private:
  // Canonical order: depth-first over ascending edge indices, so path i is
  // well defined for realize().
  void enumerate_paths() {
    std::vector<int> current;
    std::vector<bool> visited(vertices_, false);
    visited[source_] = true;
    dfs(source_, current, visited);
  }

  void dfs(int v, std::vector<int>& current, std::vector<bool>& visited) {
    if (v == sink_) {
      paths_.push_back(current);
      return;
    }
    for (int ei = 0; ei < static_cast<int>(edges_.size()); ++ei) {
      if (edges_[ei].from != v || visited[edges_[ei].to]) continue;
      visited[edges_[ei].to] = true;
      current.push_back(ei);
      dfs(edges_[ei].to, current, visited);
      current.pop_back();
      visited[edges_[ei].to] = false;
    }
  }

  int vertices_;
  std::vector<FlowEdge> edges_;
  int source_;
  int sink_;
  std::vector<std::vector<int>> partition_;
  std::vector<std::vector<int>> paths_;  // each path = edge-index sequence
};

// -- gene loci (Example III) ----------------------------------------------

/// Score of an inclusion-probability vector r over loci:
/// sum over true loci of r minus sum over false loci of r. The prior holds
/// every locus at 1/2; realize() interpolates between prior and truth with a
/// single global parameter, located by bisection.
class GeneLociModel final : public ScoreModel {
 public:
  GeneLociModel(std::vector<bool> truth, std::vector<std::vector<double>> evidence)
      : truth_(std::move(truth)), evidence_(std::move(evidence)) {
    for (const auto& ev : evidence_) {
      if (ev.size() != truth_.size())
        throw std::invalid_argument("gene_loci: evidence dimension mismatch");
      for (double p : ev)
        if (!(p >= 0.0 && p <= 1.0))
          throw std::invalid_argument("gene_loci: probabilities must lie in [0,1]");
    }
  }

  int player_count() const override { return static_cast<int>(evidence_.size()); }
  double prior_score() const override {
    return score_of(std::vector<double>(truth_.size(), 0.5));
  }
  double max_score() const override {
    return static_cast<double>(std::count(truth_.begin(), truth_.end(), true));
  }
  std::string name() const override { return "gene_loci"; }

  double alpha_of(int player) const override {
    return std::max(0.0, score_of(evidence_.at(player)) - prior_score());
  }

  RealizedOutput realize(double target) const override {
    if (target < prior_score() - kTol || target > max_score() + kTol)
      throw std::domain_error("gene_loci: target score out of range");
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (score_of(interpolate(mid)) < target)
        lo = mid;
      else
        hi = mid;
    }
    const double theta = 0.5 * (lo + hi);
    const auto probs = interpolate(theta);
    return RealizedOutput{score_of(probs),
                          {{"theta", theta}, {"inclusion_probs", probs}}};
  }

  double score_of(const std::vector<double>& inclusion) const {
    double acc = 0;
    for (std::size_t g = 0; g < truth_.size(); ++g)
      acc += truth_[g] ? inclusion[g] : -inclusion[g];
    return acc;
  }

  const std::vector<bool>& truth() const { return truth_; }

 private:
  std::vector<double> interpolate(double theta) const {
    std::vector<double> probs(truth_.size());
    for (std::size_t g = 0; g < truth_.size(); ++g)
      probs[g] = 0.5 + theta * ((truth_[g] ? 1.0 : 0.0) - 0.5);
    return probs;
  }

  std::vector<bool> truth_;
  std::vector<std::vector<double>> evidence_;
};

// -- statistical estimation (Example IV) ----------------------------------

/// Pooled-mean estimation with k_i samples per player. Scores are variance
/// reductions below the sigma^2 baseline, so the pooled reward
/// sigma^2*(1 - 1/sum k) is concave in the sample count and collaboration
/// generally fails.
class GaussianMeanModel final : public ScoreModel {
 public:
  GaussianMeanModel(double sigma, std::vector<int> sample_counts)
      : sigma_(sigma), counts_(std::move(sample_counts)) {
    if (!(sigma > 0)) throw std::invalid_argument("gaussian_mean: sigma must be positive");
    for (int k : counts_)
      if (k < 1) throw std::invalid_argument("gaussian_mean: sample counts must be >= 1");
  }

  int player_count() const override { return static_cast<int>(counts_.size()); }
  double prior_score() const override { return 0.0; }
  double max_score() const override {
    long long total = 0;
    for (int k : counts_) total += k;
    return sigma_ * sigma_ * (1.0 - 1.0 / static_cast<double>(total));
  }
  double alpha_of(int player) const override {
    return sigma_ * sigma_ * (1.0 - 1.0 / counts_.at(player));
  }
  std::string name() const override { return "gaussian_mean"; }

  RealizedOutput realize(double target) const override {
    if (target < -kTol || target > max_score() + kTol)
      throw std::domain_error("gaussian_mean: target score out of range");
    return RealizedOutput{target, {{"estimator_variance", sigma_ * sigma_ - target}}};
  }

 private:
  double sigma_;
  std::vector<int> counts_;
};

/// The four-player diamond: two two-edge routes from source to sink, one
/// edge per player, so nobody knows a path alone.
inline std::shared_ptr<PathFlowModel> diamond_path_flow() {
  // vertices: 0=source, 1=top, 2=bottom, 3=sink
  std::vector<FlowEdge> edges{{0, 1}, {1, 3}, {0, 2}, {2, 3}};
  return std::make_shared<PathFlowModel>(4, edges, 0, 3,
                                         std::vector<std::vector<int>>{{0}, {1}, {2}, {3}});
}

}  // namespace collab
