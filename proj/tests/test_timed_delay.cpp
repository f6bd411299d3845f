// Copyright 2026 The collab developers. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "collab/rng.hpp"
#include "collab/timed_delay.hpp"

using namespace collab;

namespace {

OrderedSpec identity_spec(int n, ThresholdMode mode = ThresholdMode::HonestMajority) {
  OrderedSpec spec;
  spec.n = n;
  spec.output_bits = 16;
  spec.f.kind = FunctionSpec::Kind::Identity;
  spec.p.kind = OrderFunctionSpec::Kind::Identity;
  spec.mode = mode;
  return spec;
}

SimConfig sim_for(int n, std::uint64_t seed) {
  SimConfig config;
  config.n = n;
  config.seed = seed;
  return config;
}

}  // namespace

TEST_CASE("delay schedules follow the geometric law") {
  CHECK(delay_schedule(3, 2, 3).delays == std::vector<std::int64_t>{1, 7, 49});
  CHECK(delay_schedule(1, 2, 3).delays == std::vector<std::int64_t>{1});
  CHECK(delay_schedule(5, 1, 1).delays == std::vector<std::int64_t>{1, 2, 4, 8, 16});
  const auto schedule = delay_schedule(6, 3, 4);
  for (int i = 0; i + 1 < 6; ++i)
    CHECK(schedule.delays[i + 1] == 13 * schedule.delays[i]);
  CHECK_THROWS_AS(delay_schedule(64, 9, 9), std::overflow_error);
}

TEST_CASE("solver profiles report their spread") {
  SolverProfile profile{{Rational(1), Rational(3, 2), Rational(2)}};
  CHECK(profile.ratio() == Rational(2));
  CHECK(profile.slowest() == Rational(1));
  CHECK(profile.compliant(2));
  CHECK_FALSE(profile.compliant(1));
}

TEST_CASE("dummy-round runs degenerate to the plain protocol at G = 0") {
  const auto spec = identity_spec(3);
  const std::vector<std::uint64_t> inputs{3, 1, 2};
  const auto plain = run_ordered(spec, inputs, sim_for(3, 5));
  const auto dummy = run_dummy_delay(spec, inputs, sim_for(3, 5), 0);
  CHECK(plain.received == dummy.received);
  CHECK(plain.transcript.to_jsonl() == dummy.transcript.to_jsonl());
}

TEST_CASE("every window and party clocks at least G dummy executions") {
  const int n = 3, g = 5;
  const auto result = run_dummy_delay(identity_spec(n), {7, 8, 9}, sim_for(n, 6), g);
  REQUIRE(result.transcript.checkpoints().size() == static_cast<std::size_t>(n));
  const auto counts = clock_window_counts(result.transcript, n, n);
  REQUIRE(counts.size() == static_cast<std::size_t>(n - 1));
  for (const auto& window : counts)
    for (const auto count : window) {
      CHECK(count >= g);
      CHECK(count == g * (n - 1));  // one handling per challenger per round
    }
  CHECK(verify_ordered_delivery(result.transcript, result.order));
}

TEST_CASE("aborts during dummy rounds preserve prefix-fairness") {
  auto rng = seeded_rng(71, "dummy-abort");
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const int g = 1 + static_cast<int>(rng() % 4);
    OrderedSpec spec = identity_spec(
        n, rng() % 2 ? ThresholdMode::DishonestMajority : ThresholdMode::HonestMajority);
    SimConfig config = sim_for(n, rng());
    config.adversary.corrupt = {static_cast<int>(rng() % n)};
    // Random abort anywhere inside a phase, dummy rounds included.
    config.adversary.abort_at = {{static_cast<int>(rng() % (n + 1)),
                                  static_cast<int>(rng() % (2 * g + 3))}};
    std::vector<std::uint64_t> inputs(n);
    for (auto& x : inputs) x = rng() & 0xff;

    const auto result = run_dummy_delay(spec, inputs, config, g);
    REQUIRE(verify_prefix_fairness(result.transcript, result.order));
  }
}

TEST_CASE("uniform speeds unlock in schedule proportion") {
  const auto schedule = delay_schedule(3, 2, 3);
  const auto result = run_timelock_delay(identity_spec(3), {5, 6, 7}, sim_for(3, 7),
                                         schedule, PuzzleScheme::HashChain, 16);
  REQUIRE(result.order_ok);
  // Unlock ticks sit at issue + t_i for unit speeds.
  const auto outs = result.transcript.outputs();
  REQUIRE(outs.size() == 3);
  std::vector<std::int64_t> ticks;
  for (const auto& out : outs) ticks.push_back(out.tick);
  std::sort(ticks.begin(), ticks.end());
  CHECK(ticks[1] - ticks[0] == 6);   // 7 - 1
  CHECK(ticks[2] - ticks[1] == 42);  // 49 - 7
  for (int j = 0; j < 3; ++j) CHECK(result.received.at(j) == result.expected[j]);
  CHECK(result.transcript.checkpoints().size() == 3);

  // All puzzles are issued at one tick.
  std::set<std::int64_t> issue_ticks;
  for (const auto& e : result.transcript.events)
    if (const auto* m = std::get_if<MsgEvent>(&e))
      if (m->from == kHostNode) issue_ticks.insert(m->tick);
  CHECK(issue_ticks.size() == 1);
}

TEST_CASE("a factor-two speed spread cannot bend the order") {
  const auto schedule = delay_schedule(2, 2, 3);  // (1, 7)
  SimConfig config = sim_for(2, 8);
  config.speeds = {Rational(1), Rational(2)};
  const auto result = run_timelock_delay(identity_spec(2), {4, 5}, config, schedule,
                                         PuzzleScheme::HashChain, 16);
  CHECK(result.order_ok);
  CHECK(verify_delay_gaps(result.transcript, 3, schedule,
                          SolverProfile{config.speeds}));
}

TEST_CASE("an eight-fold speed spread violates the order (pinned regression)") {
  // Position 2's solver computes 7 steps inside one tick while position 1
  // needs a full tick for a single step: exact instants 7/8 < 1.
  const auto schedule = delay_schedule(2, 2, 3);
  SimConfig config = sim_for(2, 9);
  config.speeds = {Rational(1), Rational(8)};
  const auto result = run_timelock_delay(identity_spec(2), {4, 5}, config, schedule,
                                         PuzzleScheme::HashChain, 16);
  CHECK_FALSE(result.order_ok);
  CHECK_FALSE(verify_delay_gaps(result.transcript, 3, schedule,
                                SolverProfile{config.speeds}));
}

TEST_CASE("gap verdicts follow the schedule arithmetic") {
  const auto schedule = delay_schedule(3, 2, 3);  // gaps (7-1)/2 = 3, (49-7)/2 = 21
  const auto result = run_timelock_delay(identity_spec(3), {1, 2, 3}, sim_for(3, 10),
                                         schedule, PuzzleScheme::HashChain, 16);
  const SolverProfile uniform{{Rational(1), Rational(1), Rational(1)}};
  CHECK(verify_delay_gaps(result.transcript, 3, schedule, uniform));
  // A target gap above the guaranteed minimum fails.
  CHECK_FALSE(verify_delay_gaps(result.transcript, 4, schedule, uniform));
}

TEST_CASE("compliant random profiles keep order and gaps") {
  auto rng = seeded_rng(72, "profiles");
  for (int trial = 0; trial < 80; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const std::int64_t speed_bound = 2;
    const auto schedule = delay_schedule(n, speed_bound, 3);
    SimConfig config = sim_for(n, rng());
    // Speeds in [1, 2] as exact rationals: ratio <= B.
    config.speeds.clear();
    for (int j = 0; j < n; ++j)
      config.speeds.push_back(Rational(4 + static_cast<int>(rng() % 5), 4));
    std::vector<std::uint64_t> inputs(n);
    for (auto& x : inputs) x = rng() & 0xff;

    const auto result = run_timelock_delay(identity_spec(n), inputs, config, schedule,
                                           PuzzleScheme::HashChain, 16);
    REQUIRE(result.order_ok);
    REQUIRE(verify_delay_gaps(result.transcript, 3, schedule,
                              SolverProfile{config.speeds}));
    for (int j = 0; j < n; ++j) REQUIRE(result.received.at(j) == result.expected[j]);
  }
}

TEST_CASE("squaring-scheme runs unlock correctly too") {
  // The protocol payload is 8 bytes, so the modulus must span at least that:
  // 40-bit primes give a 10-byte element.
  const auto schedule = delay_schedule(2, 1, 2);  // (1, 3)
  const auto result = run_timelock_delay(identity_spec(2), {9, 10}, sim_for(2, 11),
                                         schedule, PuzzleScheme::Squaring, 40);
  CHECK(result.order_ok);
  for (int j = 0; j < 2; ++j) CHECK(result.received.at(j) == result.expected[j]);
}
