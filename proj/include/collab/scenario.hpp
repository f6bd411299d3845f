// Copyright 2026 The collab developers. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cmath>
#include <memory>
#include <string>

#include "collab/mechanism.hpp"
#include "collab/ordered_mpc.hpp"
#include "collab/score_models.hpp"
#include "collab/serialization.hpp"

namespace collab {

/// One of the four shipped model settings, wired end to end: score model ->
/// instance -> mechanism -> ordered protocol run.
struct Scenario {
  std::string name;
  std::shared_ptr<ScoreModel> model;
  Instance instance;
  bool expected_feasible = false;
};

inline Scenario make_scenario(const std::string& name, const nlohmann::json& raw_params) {
  const nlohmann::json params =
      raw_params.is_object() ? raw_params : nlohmann::json::object();
  Scenario scenario;
  scenario.name = name;
  const double beta = params.value("beta", 1.0);

  if (name == "xor_secret") {
    const int n = params.value("n", 4);
    const int bits = params.value("bits", n);
    scenario.model = std::make_shared<XorSecretModel>(n, bits);
    // Epsilon 1 prices one fresh digit per publication, the worked
    // mechanism's schedule.
    scenario.instance.epsilon = params.value("epsilon", 1.0);
    scenario.expected_feasible = true;
  } else if (name == "path_flow_diamond") {
    scenario.model = diamond_path_flow();
    scenario.instance.epsilon = params.value("epsilon", 0.5);
    scenario.expected_feasible = true;
  } else if (name == "gene_loci") {
    // Six loci, half of them real; every player holds weak evidence on two.
    const std::vector<bool> truth{true, true, true, false, false, false};
    std::vector<std::vector<double>> evidence;
    for (int player = 0; player < 3; ++player) {
      std::vector<double> probs(6, 0.5);
      probs[player] = 0.6;           // a true locus, nudged toward inclusion
      probs[3 + player] = 0.45;      // a false locus, nudged away
      evidence.push_back(probs);
    }
    scenario.model = std::make_shared<GeneLociModel>(truth, evidence);
    scenario.instance.epsilon = params.value("epsilon", 0.0);
    scenario.expected_feasible = true;
  } else if (name == "gaussian_mean") {
    const double sigma = params.value("sigma", 1.0);
    const auto counts = params.value("k", std::vector<int>{2, 2});
    scenario.model = std::make_shared<GaussianMeanModel>(sigma, counts);
    scenario.instance.epsilon = params.value("epsilon", 0.0);
    scenario.expected_feasible = false;
  } else {
    throw std::invalid_argument("unknown scenario: " + name);
  }

  const int n = scenario.model->player_count();
  scenario.instance.n = n;
  scenario.instance.beta = beta;
  scenario.instance.alpha.clear();
  for (int i = 0; i < n; ++i)
    scenario.instance.alpha.push_back(scenario.model->alpha_of(i));
  scenario.instance.bounds =
      NDimBounds{params.value("mu", std::vector<double>(n, 0.0))};
  scenario.instance.s0 = scenario.model->prior_score();
  scenario.instance.smax = scenario.model->max_score();
  scenario.instance.validate();
  return scenario;
}

struct ScenarioReport {
  Scenario scenario;
  std::optional<ProposedOutcome> outcome;
  nlohmann::json json;
};

/// Runs the mechanism on the scenario's instance; when it yields an
/// equilibrium, feeds (pi, per-player realized outputs) through the ordered
/// protocol and folds the verdicts into the report.
inline ScenarioReport scenario_run(const std::string& name, const nlohmann::json& params,
                                   std::uint64_t seed) {
  ScenarioReport report;
  report.scenario = make_scenario(name, params);
  const auto& inst = report.scenario.instance;

  report.json["scenario"] = name;
  report.json["instance"] = instance_to_json(inst);
  report.outcome = share_data(inst);
  report.json["feasible"] = report.outcome.has_value();

  if (!report.outcome) {
    report.json["outcome"] = infeasible_outcome_json();
    return report;
  }

  const auto& outcome = *report.outcome;
  report.json["outcome"] = outcome_to_json(outcome, true);
  report.json["equilibrium"] = is_collaborative_equilibrium(inst, outcome).ok;

  // Realized outputs, in publication order.
  nlohmann::json realized = nlohmann::json::array();
  for (int t = 0; t < inst.n; ++t) {
    const int player = outcome.order.player_at[t];
    const auto output = report.scenario.model->realize(outcome.delta[player]);
    realized.push_back({{"player", player + 1},
                        {"score", output.score},
                        {"detail", output.detail}});
  }
  report.json["realized"] = realized;

  // Decentralized run: p is the mechanism's ordering, f hands each player a
  // fixed-point encoding of its target score (realizations stay local, the
  // engine is score-level throughout).
  OrderedSpec spec;
  spec.n = inst.n;
  spec.output_bits = 62;
  spec.f.kind = FunctionSpec::Kind::Const;
  for (double d : outcome.delta)
    spec.f.const_outputs.push_back(
        static_cast<std::uint64_t>(std::llround(d * (1 << 20))));
  spec.p.kind = OrderFunctionSpec::Kind::Const;
  spec.p.const_order = outcome.order.player_at;
  spec.mode = ThresholdMode::HonestMajority;

  SimConfig sim;
  sim.n = inst.n;
  sim.seed = seed;
  std::vector<std::uint64_t> inputs(inst.n, 0);
  const auto run = run_ordered(spec, inputs, sim);

  report.json["protocol"] = {
      {"ordered_delivery", verify_ordered_delivery(run.transcript, run.order)},
      {"prefix_fair", verify_prefix_fairness(run.transcript, run.order)},
      {"delivery_order", [&] {
         nlohmann::json order = nlohmann::json::array();
         for (int player : run.order.player_at) order.push_back(player + 1);
         return order;
       }()}};
  // Rewards against the outside options, step by step.
  nlohmann::json rewards = nlohmann::json::array();
  for (int t = 1; t <= inst.n; ++t) {
    std::vector<double> scores = outcome.delta;
    const double r = reward(t, outcome.order, scores, inst);
    rewards.push_back({{"t", t},
                       {"player", outcome.order.player_at[t - 1] + 1},
                       {"reward", r},
                       {"alpha", inst.alpha[outcome.order.player_at[t - 1]]}});
  }
  report.json["rewards"] = rewards;
  return report;
}

}  // namespace collab
