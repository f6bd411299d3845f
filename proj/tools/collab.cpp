// Copyright 2026 The collab developers. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unified command line: `mech` solves collaboration instances, `mpc` runs
// the ordered and timed-delay protocols in the simulator, `puzzle` locks and
// solves timed-release puzzles, `scenario` wires the shipped model settings
// end to end.
//
// Exit codes: 0 success, 1 infeasible instance or violated verdict,
// 2 usage/input error, 3 internal error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "collab/mechanism.hpp"
#include "collab/scenario.hpp"
#include "collab/serialization.hpp"
#include "collab/timed_delay.hpp"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& err) {
    throw CLI::ValidationError(path + ": " + err.what());
  }
}

void emit(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

void write_transcript(const std::string& path, const collab::Transcript& transcript) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw CLI::ValidationError("cannot write " + path);
  out << transcript.to_jsonl();
}

std::vector<int> parse_corrupt(const std::string& csv, int n) {
  std::vector<int> out;
  if (csv.empty()) return out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const int player = std::stoi(item);
    if (player < 1 || player > n)
      throw CLI::ValidationError("corrupt player out of range: " + item);
    out.push_back(player - 1);
  }
  return out;
}

std::vector<collab::Rational> parse_speeds(const std::string& csv, int n) {
  std::vector<collab::Rational> out;
  if (csv.empty()) return out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(collab::parse_rational(item));
  if (static_cast<int>(out.size()) != n)
    throw CLI::ValidationError("need one speed per party");
  return out;
}

std::vector<std::int64_t> parse_delays(const std::string& csv) {
  std::vector<std::int64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace collab;

  CLI::App app{"collaboration mechanisms and ordered/timed MPC simulation"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may trail subcommand arguments
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "seed for all randomized paths");
  bool json_only = false;
  app.add_flag("--json", json_only, "machine JSON output (the default)");
  double tolerance = 1e-9;
  app.add_option("--tolerance", tolerance,
                 "absolute comparison tolerance (the engine pins 1e-9)");

  int exit_code = kExitOk;

  // ---- mech ----------------------------------------------------------
  auto* mech = app.add_subcommand("mech", "data-sharing mechanism");
  std::string mech_instance_path, mech_graph_path;
  double mech_gamma = 0.0;

  auto* mech_solve = mech->add_subcommand("solve", "polynomial-time mechanism");
  mech_solve->add_option("instance", mech_instance_path, "instance JSON")->required();
  mech_solve->callback([&] {
    const auto inst = instance_from_json(load_json(mech_instance_path));
    const auto outcome = share_data(inst);
    emit(outcome ? outcome_to_json(*outcome, true) : infeasible_outcome_json());
    if (!outcome) exit_code = kExitVerdict;
  });

  auto* mech_brute = mech->add_subcommand("brute", "permutation-enumeration oracle");
  mech_brute->add_option("instance", mech_instance_path, "instance JSON")->required();
  mech_brute->callback([&] {
    const auto inst = instance_from_json(load_json(mech_instance_path));
    const auto outcome = brute_force_equilibrium(inst);
    emit(outcome ? outcome_to_json(*outcome, true) : infeasible_outcome_json());
    if (!outcome) exit_code = kExitVerdict;
  });

  auto* mech_nsq = mech->add_subcommand("nsq", "pairwise-bounds exact decision");
  mech_nsq->add_option("instance", mech_instance_path, "instance JSON")->required();
  mech_nsq->callback([&] {
    const auto inst = instance_from_json(load_json(mech_instance_path));
    const auto decision = decide_nsq(inst);
    nlohmann::json j{{"feasible", decision.feasible}};
    if (decision.witness) {
      nlohmann::json pi = nlohmann::json::array();
      for (int player : decision.witness->player_at) pi.push_back(player + 1);
      j["pi"] = pi;
    }
    emit(j);
    if (!decision.feasible) exit_code = kExitVerdict;
  });

  auto* mech_fas = mech->add_subcommand("fas", "feedback-arc-set reduction");
  mech_fas->add_option("graph", mech_graph_path, "graph JSON")->required();
  mech_fas->add_option("--gamma", mech_gamma, "weight threshold")->required();
  mech_fas->callback([&] {
    const auto graph = graph_from_json(load_json(mech_graph_path), mech_gamma);
    const auto decision = decide_nsq(fas_to_instance(graph));
    nlohmann::json j{{"feasible", decision.feasible}, {"gamma", mech_gamma}};
    if (graph.n <= 8) j["min_fas_weight"] = min_fas_weight_brute(graph);
    emit(j);
    if (!decision.feasible) exit_code = kExitVerdict;
  });

  // ---- mpc -----------------------------------------------------------
  auto* mpc = app.add_subcommand("mpc", "protocol simulation");
  std::string mpc_spec_path, mpc_inputs_path, mpc_corrupt, mpc_transcript_path;
  std::string mpc_mode = "honest-majority", mpc_speeds, mpc_scheme = "hash";
  int mpc_abort_phase = -1, mpc_abort_round = 0;
  std::int64_t mpc_gap = 0, mpc_bound = 2;
  int mpc_kappa = 64;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--spec", mpc_spec_path, "function/order spec JSON")->required();
    cmd->add_option("--inputs", mpc_inputs_path, "inputs JSON")->required();
    cmd->add_option("--corrupt", mpc_corrupt, "corrupt players, e.g. 2,4");
    cmd->add_option("--abort-phase", mpc_abort_phase, "abort at this phase");
    cmd->add_option("--abort-round", mpc_abort_round, "round within the phase");
    cmd->add_option("--mode", mpc_mode, "honest-majority | dishonest-majority");
    cmd->add_option("--transcript", mpc_transcript_path, "write JSONL here");
  };

  auto make_run = [&] {
    auto spec = ordered_spec_from_json(load_json(mpc_spec_path));
    spec.mode = mpc_mode == "dishonest-majority" ? ThresholdMode::DishonestMajority
                                                 : ThresholdMode::HonestMajority;
    const auto inputs_json = load_json(mpc_inputs_path);
    const auto inputs = inputs_json.at("inputs").get<std::vector<std::uint64_t>>();
    SimConfig sim;
    sim.n = spec.n;
    sim.seed = seed;
    sim.adversary.corrupt = parse_corrupt(mpc_corrupt, spec.n);
    if (mpc_abort_phase >= 0)
      sim.adversary.abort_at = {{mpc_abort_phase, mpc_abort_round}};
    return std::tuple{spec, inputs, sim};
  };

  auto* mpc_ordered = mpc->add_subcommand("ordered", "ordered output delivery");
  add_common(mpc_ordered);
  mpc_ordered->callback([&] {
    auto [spec, inputs, sim] = make_run();
    const auto result = run_ordered(spec, inputs, sim);
    write_transcript(mpc_transcript_path, result.transcript);
    const bool ordered = verify_ordered_delivery(result.transcript, result.order);
    const bool fair = verify_prefix_fairness(result.transcript, result.order);
    nlohmann::json received = nlohmann::json::object();
    for (const auto& [party, value] : result.received)
      received[std::to_string(party + 1)] = value;
    emit({{"ordered_delivery", ordered}, {"prefix_fair", fair}, {"received", received}});
    if (!fair || (sim.adversary.corrupt.empty() && !ordered)) exit_code = kExitVerdict;
  });

  auto* mpc_dummy = mpc->add_subcommand("dummy", "timed delays via dummy rounds");
  add_common(mpc_dummy);
  mpc_dummy->add_option("--G", mpc_gap, "clock evaluations between outputs")->required();
  mpc_dummy->callback([&] {
    auto [spec, inputs, sim] = make_run();
    const auto result = run_dummy_delay(spec, inputs, sim, static_cast<int>(mpc_gap));
    write_transcript(mpc_transcript_path, result.transcript);
    const bool ordered = verify_ordered_delivery(result.transcript, result.order);
    const bool fair = verify_prefix_fairness(result.transcript, result.order);
    nlohmann::json windows = nlohmann::json::array();
    if (result.transcript.checkpoints().size() == static_cast<std::size_t>(spec.n))
      for (const auto& window : clock_window_counts(result.transcript, spec.n, spec.n))
        windows.push_back(window);
    emit({{"ordered_delivery", ordered},
          {"prefix_fair", fair},
          {"clock_windows", windows}});
    if (!fair || (sim.adversary.corrupt.empty() && !ordered)) exit_code = kExitVerdict;
  });

  auto* mpc_timelock = mpc->add_subcommand("timelock", "timed delays via puzzles");
  add_common(mpc_timelock);
  mpc_timelock->add_option("--G", mpc_gap, "clock evaluations between outputs")
      ->required();
  mpc_timelock->add_option("--B", mpc_bound, "speed-ratio bound");
  mpc_timelock->add_option("--speeds", mpc_speeds, "per-party steps per tick");
  mpc_timelock->add_option("--scheme", mpc_scheme, "hash | square");
  mpc_timelock->add_option("--kappa", mpc_kappa, "prime bits for the square scheme");
  mpc_timelock->callback([&] {
    auto [spec, inputs, sim] = make_run();
    sim.speeds = parse_speeds(mpc_speeds, spec.n);
    const auto schedule = delay_schedule(spec.n, mpc_bound, mpc_gap);
    const auto result = run_timelock_delay(spec, inputs, sim, schedule,
                                           scheme_from_name(mpc_scheme), mpc_kappa);
    write_transcript(mpc_transcript_path, result.transcript);
    const SolverProfile profile{sim.speeds.empty()
                                    ? std::vector<Rational>(spec.n, Rational(1))
                                    : sim.speeds};
    const bool gaps = verify_delay_gaps(result.transcript, mpc_gap, schedule, profile);
    nlohmann::json ticks = nlohmann::json::object();
    for (const auto& [party, tick] : result.unlock_ticks)
      ticks[std::to_string(party + 1)] = tick;
    emit({{"order_ok", result.order_ok},
          {"gaps_ok", gaps},
          {"unlock_ticks", ticks},
          {"delays", schedule.delays}});
    if (!result.order_ok || !gaps) exit_code = kExitVerdict;
  });

  // ---- puzzle --------------------------------------------------------
  auto* puzzle = app.add_subcommand("puzzle", "time-lock and time-line puzzles");
  std::string puzzle_data_hex, puzzle_path, puzzle_items_path, puzzle_delays,
      puzzle_scheme = "hash", puzzle_out;
  std::int64_t puzzle_t = 1;
  int puzzle_kappa = kDefaultKappa;

  auto* puzzle_lock_cmd = puzzle->add_subcommand("lock", "lock data for t steps");
  puzzle_lock_cmd->add_option("--data", puzzle_data_hex, "hex payload")->required();
  puzzle_lock_cmd->add_option("--t", puzzle_t, "sequential steps")->required();
  puzzle_lock_cmd->add_option("--scheme", puzzle_scheme, "hash | square");
  puzzle_lock_cmd->add_option("--kappa", puzzle_kappa, "prime bits (square)");
  puzzle_lock_cmd->add_option("--out", puzzle_out, "write puzzle JSON here");
  puzzle_lock_cmd->callback([&] {
    auto rng = seeded_rng(seed, "cli/puzzle");
    const auto locked = lock(hex_to_bytes(puzzle_data_hex), puzzle_t,
                             scheme_from_name(puzzle_scheme), puzzle_kappa, rng);
    const auto j = puzzle_to_json(locked);
    if (!puzzle_out.empty()) {
      std::ofstream out(puzzle_out);
      out << j.dump(2) << "\n";
    }
    emit(j);
  });

  auto* puzzle_solve_cmd = puzzle->add_subcommand("solve", "solve a puzzle file");
  puzzle_solve_cmd->add_option("file", puzzle_path, "puzzle JSON")->required();
  puzzle_solve_cmd->callback([&] {
    const auto j = load_json(puzzle_path);
    if (j.contains("t_vec")) {
      const auto line = line_puzzle_from_json(j);
      const auto work = make_solver_work(line.scheme, line.a);
      ChainSolver solver(*work, line.x);
      nlohmann::json items = nlohmann::json::array();
      // One pass over the chain in delay order.
      std::vector<std::size_t> order(line.t.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return line.t[a] < line.t[b]; });
      for (std::size_t i : order) {
        solver.advance_to(line.t[i]);
        items.push_back({{"index", i},
                         {"t", line.t[i]},
                         {"data", bytes_to_hex(unlock_line_at(line, i, solver.state()))}});
      }
      emit({{"items", items}, {"total_steps", solver.steps_used()}});
    } else {
      const auto locked = puzzle_from_json(j);
      emit({{"data", bytes_to_hex(complete_unlock(locked))}, {"steps", locked.t}});
    }
  });

  auto* puzzle_line_cmd = puzzle->add_subcommand("line", "lock items on one chain");
  puzzle_line_cmd->add_option("--items", puzzle_items_path, "JSON: {\"items\":[hex,..]}")
      ->required();
  puzzle_line_cmd->add_option("--delays", puzzle_delays, "e.g. 1,7,49")->required();
  puzzle_line_cmd->add_option("--scheme", puzzle_scheme, "hash | square");
  puzzle_line_cmd->add_option("--kappa", puzzle_kappa, "prime bits (square)");
  puzzle_line_cmd->add_option("--out", puzzle_out, "write puzzle JSON here");
  puzzle_line_cmd->callback([&] {
    auto rng = seeded_rng(seed, "cli/puzzle-line");
    const auto items_json = load_json(puzzle_items_path);
    std::vector<Bytes> items;
    for (const auto& hex : items_json.at("items"))
      items.push_back(hex_to_bytes(hex.get<std::string>()));
    const auto line = lock_line(items, parse_delays(puzzle_delays),
                                scheme_from_name(puzzle_scheme), puzzle_kappa, rng);
    const auto j = line_puzzle_to_json(line);
    if (!puzzle_out.empty()) {
      std::ofstream out(puzzle_out);
      out << j.dump(2) << "\n";
    }
    emit(j);
  });

  // ---- scenario ------------------------------------------------------
  auto* scenario_cmd = app.add_subcommand("scenario", "run a shipped model setting");
  std::string scenario_name, scenario_params_path;
  scenario_cmd->add_option("name", scenario_name,
                           "xor_secret | path_flow_diamond | gene_loci | gaussian_mean")
      ->required();
  scenario_cmd->add_option("--params", scenario_params_path, "parameter JSON");
  scenario_cmd->callback([&] {
    nlohmann::json params = nlohmann::json::object();
    if (!scenario_params_path.empty()) params = load_json(scenario_params_path);
    const auto report = scenario_run(scenario_name, params, seed);
    emit(report.json);
    if (!report.outcome) exit_code = kExitVerdict;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? kExitOk : kExitUsage;
  } catch (const nlohmann::json::exception& err) {
    std::cerr << "input error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& err) {
    std::cerr << "input error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return kExitInternal;
  }
  return exit_code;
}
