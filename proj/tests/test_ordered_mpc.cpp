// Copyright 2026 The collab developers. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "collab/ordered_mpc.hpp"
#include "collab/rng.hpp"

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

/// Audits the backend ledger: every leaked item must concern a corrupt
/// party and carry that party's own input, output, or position.
void audit_leakage(const OrderedRunResult& result, const OrderedSpec& spec,
                   const std::vector<std::uint64_t>& inputs,
                   const std::vector<int>& corrupt) {
  const std::set<int> corrupt_set(corrupt.begin(), corrupt.end());
  for (const auto& entry : result.leakage) {
    REQUIRE(corrupt_set.count(entry.party) == 1);
    switch (entry.kind) {
      case LeakageEntry::Kind::Input:
        REQUIRE(entry.value == inputs[entry.party]);
        break;
      case LeakageEntry::Kind::Output:
        REQUIRE(entry.value == result.expected[entry.party]);
        break;
      case LeakageEntry::Kind::Position:
        REQUIRE(entry.value ==
                static_cast<std::uint64_t>(result.order.position_of(entry.party) + 1));
        break;
    }
  }
  (void)spec;
}

}  // namespace

TEST_CASE("masked phase vectors carry exactly one real slot") {
  const Ordering order = Ordering::identity(3);
  const std::vector<std::uint64_t> y{7, 8, 9};

  // Zero masks make the vector readable directly.
  const auto plain = masked_phase_vector(order, y, 1, {0, 0, 0}, 16);
  CHECK(plain.z[0] == 7);
  CHECK(plain.z[1] == tag_bottom(16));
  CHECK(plain.z[2] == tag_bottom(16));

  auto rng = seeded_rng(41, "mask");
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::uint64_t> masks(3);
    for (auto& m : masks) m = random_mask(rng, 16);
    for (int phase = 1; phase <= 3; ++phase) {
      const auto masked = masked_phase_vector(order, y, phase, masks, 16);
      int real = 0;
      for (int j = 0; j < 3; ++j) {
        const auto value = recover(masked.z[j], masks[j], 16);
        if (value) {
          ++real;
          REQUIRE(*value == y[j]);
          REQUIRE(order.position_of(j) + 1 == phase);
        }
      }
      REQUIRE(real == 1);
    }
  }
}

TEST_CASE("identity run: party t learns its own input at phase t") {
  const auto spec = identity_spec(3);
  const std::vector<std::uint64_t> inputs{11, 22, 33};
  const auto result = run_ordered(spec, inputs, sim_for(3, 1));

  REQUIRE(result.received.size() == 3);
  for (int j = 0; j < 3; ++j) CHECK(result.received.at(j) == inputs[j]);
  CHECK(verify_ordered_delivery(result.transcript, result.order));
  CHECK(verify_prefix_fairness(result.transcript, result.order));
  CHECK(result.transcript.checkpoints().size() == 3);
}

TEST_CASE("descending-input ordering delivers (2,1,3) on inputs (5,9,1)") {
  OrderedSpec spec = identity_spec(3);
  spec.p.kind = OrderFunctionSpec::Kind::SortDesc;
  const auto result = run_ordered(spec, {5, 9, 1}, sim_for(3, 2));
  REQUIRE(result.order.player_at == std::vector<int>{1, 0, 2});
  CHECK(verify_ordered_delivery(result.transcript, result.order));

  // First output event belongs to player 2 (1-based), i.e. index 1.
  REQUIRE_FALSE(result.transcript.outputs().empty());
  CHECK(result.transcript.outputs().front().party == 1);
}

TEST_CASE("dishonest-majority aborts cut a prefix") {
  // Abort at phase 2: depending on the round within the phase the adversary
  // either starves phase 2 or lets it finish, so the received set is
  // {pi(1)} or {pi(1), pi(2)} and always a prefix.
  for (int round = 0; round < 3; ++round) {
    SimConfig config = sim_for(4, 77 + round);
    config.adversary.corrupt = {2};
    config.adversary.abort_at = {{2, round}};
    const auto spec = identity_spec(4, ThresholdMode::DishonestMajority);
    const auto result = run_ordered(spec, {1, 2, 3, 4}, config);

    std::set<int> received;
    for (const auto& out : result.transcript.outputs()) received.insert(out.party);
    const std::set<int> prefix1{result.order.player_at[0]};
    const std::set<int> prefix2{result.order.player_at[0], result.order.player_at[1]};
    CHECK((received == prefix1 || received == prefix2));
    CHECK(verify_prefix_fairness(result.transcript, result.order));
    CHECK_FALSE(verify_ordered_delivery(result.transcript, result.order));
  }
}

TEST_CASE("honest-majority runs ride out muted parties") {
  SimConfig config = sim_for(5, 5);
  config.adversary.corrupt = {1, 3};
  config.adversary.abort_at = {{2, 0}};
  const auto spec = identity_spec(5, ThresholdMode::HonestMajority);
  const auto result = run_ordered(spec, {10, 20, 30, 40, 50}, config);

  // Every party's output is still delivered (dropout masks default to zero),
  // so delivery and fairness both hold.
  CHECK(result.received.size() == 5);
  CHECK(verify_ordered_delivery(result.transcript, result.order));
  CHECK(verify_prefix_fairness(result.transcript, result.order));
}

TEST_CASE("ideal backend round-trips and leaks nothing for an empty corrupt set") {
  const auto spec = identity_spec(3);
  const auto eval = ideal_backend_eval(spec, {4, 5, 6}, {});
  CHECK(eval.outputs == std::vector<std::uint64_t>{4, 5, 6});
  CHECK(eval.leakage.empty());

  const auto leaky = ideal_backend_eval(spec, {4, 5, 6}, {1});
  CHECK(leaky.leakage.size() == 3);
  for (const auto& entry : leaky.leakage) CHECK(entry.party == 1);
}

TEST_CASE("share phase then reconstruction equals direct evaluation") {
  auto rng = seeded_rng(42, "share-phase");
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    OrderedSpec spec = identity_spec(n);
    spec.p.kind = OrderFunctionSpec::Kind::SortDesc;
    std::vector<std::uint64_t> inputs(n);
    for (auto& x : inputs) x = rng() & 0xffff;

    IdealBackend backend(rng());
    const auto shared =
        backend.share_phase(spec, inputs, std::vector<bool>(n, true), {});
    const auto blob = reconstruct_blob(shared.shares, spec.threshold());
    REQUIRE(blob.has_value());
    const auto [order, y] = unpack_order_outputs(*blob);
    REQUIRE(order == spec.p.evaluate(inputs));
    REQUIRE(y == spec.f.evaluate(inputs));
  }
}

TEST_CASE("privacy audit across random runs") {
  auto rng = seeded_rng(43, "audit");
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    OrderedSpec spec = identity_spec(
        n, rng() % 2 ? ThresholdMode::HonestMajority : ThresholdMode::DishonestMajority);
    spec.f.kind = rng() % 2 ? FunctionSpec::Kind::Identity : FunctionSpec::Kind::XorSum;
    spec.p.kind = rng() % 2 ? OrderFunctionSpec::Kind::Identity
                            : OrderFunctionSpec::Kind::SortDesc;
    std::vector<std::uint64_t> inputs(n);
    for (auto& x : inputs) x = rng() & 0xffff;

    SimConfig config = sim_for(n, rng());
    std::vector<int> corrupt;
    for (int j = 0; j < n; ++j)
      if (rng() % 3 == 0) corrupt.push_back(j);
    config.adversary.corrupt = corrupt;
    config.adversary.rushing = rng() % 2 == 0;

    const auto result = run_ordered(spec, inputs, config);
    audit_leakage(result, spec, inputs, corrupt);
  }
}

TEST_CASE("randomized delivery and fairness sweep") {
  auto rng = seeded_rng(44, "sweep");
  int honest_majority_runs = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    OrderedSpec spec = identity_spec(n);
    spec.p.kind = rng() % 2 ? OrderFunctionSpec::Kind::Identity
                            : OrderFunctionSpec::Kind::SortDesc;
    std::vector<std::uint64_t> inputs(n);
    for (auto& x : inputs) x = rng() & 0xffff;

    SimConfig config = sim_for(n, rng());
    const bool dishonest = rng() % 2 == 0;
    spec.mode = dishonest ? ThresholdMode::DishonestMajority
                          : ThresholdMode::HonestMajority;
    const int max_corrupt = dishonest ? n : (n - 1) / 2;
    std::vector<int> players(n);
    for (int i = 0; i < n; ++i) players[i] = i;
    std::shuffle(players.begin(), players.end(), rng);
    for (int i = 0; i < max_corrupt && i < static_cast<int>(rng() % (n + 1)); ++i)
      config.adversary.corrupt.push_back(players[i]);

    const bool with_abort = rng() % 2 == 0 && !config.adversary.corrupt.empty();
    if (with_abort)
      config.adversary.abort_at = {{static_cast<int>(rng() % (n + 1)),
                                    static_cast<int>(rng() % 3)}};

    const auto result = run_ordered(spec, inputs, config);
    CHECK(verify_prefix_fairness(result.transcript, result.order));
    if (!with_abort && !dishonest) {
      ++honest_majority_runs;
      CHECK(verify_ordered_delivery(result.transcript, result.order));
      // Everyone got the right value.
      for (int j = 0; j < n; ++j) REQUIRE(result.received.at(j) == result.expected[j]);
    }
  }
  CHECK(honest_majority_runs > 10);
}

TEST_CASE("delivery verdicts on synthetic transcripts match an event-sort oracle") {
  auto rng = seeded_rng(45, "synthetic");
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    std::vector<int> players(n);
    for (int i = 0; i < n; ++i) players[i] = i;
    std::shuffle(players.begin(), players.end(), rng);
    const Ordering order(players);

    // Synthetic out events at shuffled ticks (some possibly missing).
    Transcript transcript;
    std::vector<std::pair<std::int64_t, int>> events;  // (tick, party)
    for (int j = 0; j < n; ++j)
      if (rng() % 5 != 0) events.push_back({static_cast<std::int64_t>(rng() % 10), j});
    std::sort(events.begin(), events.end());
    for (const auto& [tick, party] : events)
      transcript.append(OutEvent{tick, party, 0, std::nullopt});

    // Oracle: all parties present and first-delivery ticks strictly sorted
    // along the ordering.
    bool expect = events.size() == static_cast<std::size_t>(n);
    if (expect) {
      std::map<int, std::int64_t> first;
      for (const auto& [tick, party] : events)
        if (!first.count(party)) first[party] = tick;
      for (int t = 1; t < n && expect; ++t)
        if (first[order.player_at[t - 1]] >= first[order.player_at[t]]) expect = false;
    }
    REQUIRE(verify_ordered_delivery(transcript, order) == expect);
  }
}

TEST_CASE("prefix verdicts on hand-built received sets") {
  const Ordering order({2, 0, 1});
  Transcript empty;
  CHECK(verify_prefix_fairness(empty, order));  // j = 0

  Transcript full;
  full.append(OutEvent{1, 2, 0, std::nullopt});
  full.append(OutEvent{2, 0, 0, std::nullopt});
  full.append(OutEvent{3, 1, 0, std::nullopt});
  CHECK(verify_prefix_fairness(full, order));

  Transcript hole;  // {pi(2)} alone is not a prefix
  hole.append(OutEvent{1, 0, 0, std::nullopt});
  CHECK_FALSE(verify_prefix_fairness(hole, order));
}

TEST_CASE("rushing only reorders in-round scheduling, not results") {
  const auto spec = identity_spec(4);
  SimConfig plain = sim_for(4, 9);
  plain.adversary.corrupt = {2};
  SimConfig rushing = plain;
  rushing.adversary.rushing = true;
  const auto a = run_ordered(spec, {1, 2, 3, 4}, plain);
  const auto b = run_ordered(spec, {1, 2, 3, 4}, rushing);
  CHECK(a.received == b.received);
}
