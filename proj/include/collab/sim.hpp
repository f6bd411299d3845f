// Copyright 2026 The collab developers. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "collab/rational.hpp"
#include "collab/rng.hpp"
#include "json.hpp"

namespace collab {

// Node 0 hosts protocol functionality (the simulated trusted evaluator);
// parties are nodes 1..n. Only parties can be corrupted.
inline constexpr int kHostNode = 0;

struct AdversaryConfig {
  std::vector<int> corrupt;  // 0-based party indices
  // After (phase, round-within-phase), corrupt parties send nothing.
  std::optional<std::pair<int, int>> abort_at;
  bool rushing = false;
};

struct SimConfig {
  int n = 0;
  std::uint64_t seed = 0;
  AdversaryConfig adversary;
  std::vector<Rational> speeds;  // defaults to 1 per party when empty

  Rational speed_of(int party) const {
    if (speeds.empty()) return Rational(1);
    return speeds.at(party);
  }

  void validate() const {
    if (n < 1) throw std::invalid_argument("sim: need n >= 1");
    if (!speeds.empty() && static_cast<int>(speeds.size()) != n)
      throw std::invalid_argument("sim: speeds dimension mismatch");
    for (const auto& s : speeds)
      if (s.num <= 0) throw std::invalid_argument("sim: speeds must be positive");
    for (int c : adversary.corrupt)
      if (c < 0 || c >= n) throw std::invalid_argument("sim: corrupt index out of range");
  }

  bool is_corrupt(int party) const {
    return std::find(adversary.corrupt.begin(), adversary.corrupt.end(), party) !=
           adversary.corrupt.end();
  }
};

// -- transcript ------------------------------------------------------------

struct MsgEvent {
  std::int64_t tick = 0;
  int from = 0;
  int to = 0;
  std::uint64_t digest = 0;
};

struct CkptEvent {
  std::int64_t tick = 0;
  int index = 0;  // 1-based checkpoint number
};

struct OutEvent {
  std::int64_t tick = 0;
  int party = 0;
  std::uint64_t value = 0;
  std::optional<Rational> exact;  // sub-tick completion instant (puzzles)
};

struct ClkEvent {
  std::int64_t tick = 0;
  int party = 0;
  std::int64_t count = 0;
};

using Event = std::variant<MsgEvent, CkptEvent, OutEvent, ClkEvent>;

inline std::int64_t event_tick(const Event& e) {
  return std::visit([](const auto& ev) { return ev.tick; }, e);
}

/// Append-only, deterministic event log of one protocol run.
struct Transcript {
  std::vector<Event> events;
  bool timed_out = false;

  void append(Event e) {
    if (!events.empty() && event_tick(e) < event_tick(events.back()))
      throw std::logic_error("transcript: ticks must be non-decreasing");
    if (const auto* c = std::get_if<CkptEvent>(&e)) {
      for (const auto& prev : events)
        if (const auto* pc = std::get_if<CkptEvent>(&prev))
          if (pc->index >= c->index)
            throw std::logic_error("transcript: checkpoint indices must increase");
    }
    events.push_back(std::move(e));
  }

  std::vector<CkptEvent> checkpoints() const {
    std::vector<CkptEvent> out;
    for (const auto& e : events)
      if (const auto* c = std::get_if<CkptEvent>(&e)) out.push_back(*c);
    return out;
  }

  std::vector<OutEvent> outputs() const {
    std::vector<OutEvent> out;
    for (const auto& e : events)
      if (const auto* o = std::get_if<OutEvent>(&e)) out.push_back(*o);
    return out;
  }

  std::string to_jsonl() const {
    std::ostringstream os;
    for (const auto& e : events) {
      nlohmann::json j;
      if (const auto* m = std::get_if<MsgEvent>(&e)) {
        j = {{"tick", m->tick}, {"kind", "msg"}, {"from", m->from}, {"to", m->to},
             {"digest", m->digest}};
      } else if (const auto* c = std::get_if<CkptEvent>(&e)) {
        j = {{"tick", c->tick}, {"kind", "ckpt"}, {"index", c->index}};
      } else if (const auto* o = std::get_if<OutEvent>(&e)) {
        j = {{"tick", o->tick}, {"kind", "out"}, {"party", o->party},
             {"value", o->value}};
        if (o->exact) j["exact"] = {o->exact->num, o->exact->den};
      } else if (const auto* k = std::get_if<ClkEvent>(&e)) {
        j = {{"tick", k->tick}, {"kind", "clk"}, {"party", k->party},
             {"count", k->count}};
      }
      os << j.dump() << "\n";
    }
    return os.str();
  }
};

// -- party state machines ----------------------------------------------------

using Payload = std::vector<std::uint8_t>;

struct Message {
  int from = 0;
  int to = 0;
  Payload payload;
};

class SimContext;

/// One node's state machine. step() runs once per round with the node's
/// inbox; outgoing messages, outputs, clock work and halting all go through
/// the context.
class Node {
 public:
  virtual ~Node() = default;
  virtual void step(SimContext& ctx, const std::vector<Message>& inbox) = 0;
};

class Simulator;

class SimContext {
 public:
  SimContext(Simulator& sim, int self) : sim_(sim), self_(self) {}

  int self() const { return self_; }
  std::int64_t round() const;
  void send(int to, Payload payload);
  void broadcast(Payload payload);  // to every party, not the host
  void emit_output(std::uint64_t value, std::optional<Rational> exact = std::nullopt);
  void log_clock(std::int64_t evaluations);
  void mark_checkpoint(int index);   // host only
  void set_phase(int phase);         // host only; resets round-within-phase
  void halt();
  std::mt19937_64& rng();            // per-node deterministic stream

 private:
  Simulator& sim_;
  int self_;
};

inline constexpr std::int64_t kRoundCap = 1'000'000;

struct SimTimeout : std::runtime_error {
  explicit SimTimeout(Transcript partial)
      : std::runtime_error("simulation exceeded the round cap"),
        transcript(std::move(partial)) {}
  Transcript transcript;
};

/// Synchronous round-driven network: every message sent in round r is
/// delivered in round r+1. With rushing enabled, corrupt parties addition-
/// ally see the current round's honest messages before they step. All
/// scheduling is deterministic, so a (config, protocol) pair fixes the
/// transcript byte for byte.
class Simulator {
 public:
  Simulator(SimConfig config, std::vector<std::unique_ptr<Node>> nodes)
      : config_(std::move(config)), nodes_(std::move(nodes)) {
    config_.validate();
    if (nodes_.size() != static_cast<std::size_t>(config_.n) + 1)
      throw std::invalid_argument("sim: expected host plus n party nodes");
    halted_.assign(nodes_.size(), false);
    rngs_.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      rngs_.push_back(seeded_rng(config_.seed, "sim/node", i));
  }

  Transcript run() {
    std::vector<Message> pending;  // delivered next round
    while (!all_parties_halted()) {
      if (round_ >= kRoundCap) {
        transcript_.timed_out = true;
        throw SimTimeout(std::move(transcript_));
      }
      std::vector<Message> inboxes = std::move(pending);
      pending.clear();
      outgoing_.clear();

      // Honest-first step order within the round; a rushing adversary's
      // parties then see this round's honest traffic addressed to them.
      std::vector<int> order;
      order.push_back(kHostNode);
      for (int p = 0; p < config_.n; ++p)
        if (!config_.is_corrupt(p)) order.push_back(p + 1);
      for (int p = 0; p < config_.n; ++p)
        if (config_.is_corrupt(p)) order.push_back(p + 1);

      for (int node : order) {
        if (halted_[node]) continue;
        std::vector<Message> inbox;
        for (const auto& m : inboxes)
          if (m.to == node) inbox.push_back(m);
        if (config_.adversary.rushing && node != kHostNode &&
            config_.is_corrupt(node - 1)) {
          for (const auto& m : outgoing_)
            if (m.to == node) inbox.push_back(m);
        }
        SimContext ctx(*this, node);
        stepping_ = node;
        nodes_[node]->step(ctx, inbox);
      }
      stepping_ = -1;

      for (auto& m : outgoing_) pending.push_back(std::move(m));
      ++round_;
      ++round_in_phase_;
    }
    return std::move(transcript_);
  }

  const SimConfig& config() const { return config_; }

 private:
  friend class SimContext;

  bool all_parties_halted() const {
    // Corrupt parties that merely went mute do not keep the run alive.
    for (int p = 0; p < config_.n; ++p)
      if (!halted_[p + 1] && !config_.is_corrupt(p)) return false;
    return true;
  }

  bool sender_muted(int node) const {
    if (node == kHostNode || !config_.is_corrupt(node - 1)) return false;
    const auto& at = config_.adversary.abort_at;
    if (!at) return false;
    return phase_ > at->first ||
           (phase_ == at->first && round_in_phase_ >= at->second);
  }

  void do_send(int from, int to, Payload payload) {
    if (to < 0 || to >= static_cast<int>(nodes_.size()))
      throw std::invalid_argument("sim: bad recipient");
    if (sender_muted(from)) return;  // aborted corrupt parties send nothing
    transcript_.append(
        MsgEvent{round_, from, to, fnv1a_bytes(payload.data(), payload.size())});
    outgoing_.push_back(Message{from, to, std::move(payload)});
  }

  SimConfig config_;
  std::vector<std::unique_ptr<Node>> nodes_;
  std::vector<std::mt19937_64> rngs_;
  std::vector<bool> halted_;
  std::vector<Message> outgoing_;
  Transcript transcript_;
  std::int64_t round_ = 0;
  std::int64_t round_in_phase_ = 0;
  int phase_ = 0;
  int stepping_ = -1;
};

inline std::int64_t SimContext::round() const { return sim_.round_; }

inline void SimContext::send(int to, Payload payload) {
  sim_.do_send(self_, to, std::move(payload));
}

inline void SimContext::broadcast(Payload payload) {
  for (int p = 1; p <= sim_.config_.n; ++p)
    if (p != self_) sim_.do_send(self_, p, payload);
}

inline void SimContext::emit_output(std::uint64_t value, std::optional<Rational> exact) {
  sim_.transcript_.append(OutEvent{sim_.round_, self_ - 1, value, exact});
}

inline void SimContext::log_clock(std::int64_t evaluations) {
  if (evaluations > 0)
    sim_.transcript_.append(ClkEvent{sim_.round_, self_ - 1, evaluations});
}

inline void SimContext::mark_checkpoint(int index) {
  if (self_ != kHostNode) throw std::logic_error("sim: only the host marks checkpoints");
  sim_.transcript_.append(CkptEvent{sim_.round_, index});
}

inline void SimContext::set_phase(int phase) {
  if (self_ != kHostNode) throw std::logic_error("sim: only the host sets the phase");
  sim_.phase_ = phase;
  sim_.round_in_phase_ = 0;
}

inline void SimContext::halt() { sim_.halted_[self_] = true; }

inline std::mt19937_64& SimContext::rng() { return sim_.rngs_[self_]; }

/// Per-window, per-party clock-evaluation totals between consecutive
/// checkpoints: window w spans (tick of C_w, tick of C_{w+1}].
inline std::vector<std::vector<std::int64_t>> clock_window_counts(
    const Transcript& transcript, int expected_checkpoints, int parties) {
  const auto ckpts = transcript.checkpoints();
  if (static_cast<int>(ckpts.size()) != expected_checkpoints)
    throw std::invalid_argument("clock_window_counts: missing checkpoints");
  if (ckpts.size() < 2) return {};
  std::vector<std::vector<std::int64_t>> counts(
      ckpts.size() - 1, std::vector<std::int64_t>(parties, 0));
  for (const auto& e : transcript.events) {
    const auto* clk = std::get_if<ClkEvent>(&e);
    if (!clk) continue;
    for (std::size_t w = 0; w + 1 < ckpts.size(); ++w) {
      if (clk->tick > ckpts[w].tick && clk->tick <= ckpts[w + 1].tick) {
        counts[w][clk->party] += clk->count;
        break;
      }
    }
  }
  return counts;
}

}  // namespace collab
