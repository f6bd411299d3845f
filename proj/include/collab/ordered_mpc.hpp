// Copyright 2026 The collab developers. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <variant>
#include <vector>

#include "collab/model.hpp"
#include "collab/secret_sharing.hpp"
#include "collab/sim.hpp"

namespace collab {

// -- functionality specifications -------------------------------------------

/// f: builtin or explicit table mapping the input vector to per-party
/// outputs. Values are L-bit strings carried in uint64.
struct FunctionSpec {
  enum class Kind { Identity, XorSum, Table, Const } kind = Kind::Identity;
  std::map<std::vector<std::uint64_t>, std::vector<std::uint64_t>> table;
  std::vector<std::uint64_t> const_outputs;

  std::vector<std::uint64_t> evaluate(const std::vector<std::uint64_t>& x) const {
    switch (kind) {
      case Kind::Identity:
        return x;
      case Kind::XorSum: {
        std::uint64_t acc = 0;
        for (auto v : x) acc ^= v;
        return std::vector<std::uint64_t>(x.size(), acc);
      }
      case Kind::Table: {
        const auto it = table.find(x);
        if (it == table.end())
          throw std::invalid_argument("function table: input not covered");
        return it->second;
      }
      case Kind::Const:
        return const_outputs;
    }
    throw std::logic_error("function spec: bad kind");
  }
};

/// p: ordering function. SortDesc delivers higher inputs earlier, ties by
/// player index.
struct OrderFunctionSpec {
  enum class Kind { Identity, SortDesc, Table, Const } kind = Kind::Identity;
  std::map<std::vector<std::uint64_t>, std::vector<int>> table;
  std::vector<int> const_order;

  Ordering evaluate(const std::vector<std::uint64_t>& x) const {
    const int n = static_cast<int>(x.size());
    switch (kind) {
      case Kind::Identity:
        return Ordering::identity(n);
      case Kind::SortDesc: {
        std::vector<int> players(n);
        for (int i = 0; i < n; ++i) players[i] = i;
        std::stable_sort(players.begin(), players.end(),
                         [&](int a, int b) { return x[a] > x[b]; });
        return Ordering(players);
      }
      case Kind::Table: {
        const auto it = table.find(x);
        if (it == table.end())
          throw std::invalid_argument("ordering table: input not covered");
        return Ordering(it->second);
      }
      case Kind::Const:
        return Ordering(const_order);
    }
    throw std::logic_error("order spec: bad kind");
  }
};

enum class ThresholdMode { HonestMajority, DishonestMajority };

struct OrderedSpec {
  int n = 0;
  int output_bits = 16;  // L; the wire carries L+1 bits (tag + payload)
  FunctionSpec f;
  OrderFunctionSpec p;
  ThresholdMode mode = ThresholdMode::HonestMajority;

  int threshold() const {
    return mode == ThresholdMode::HonestMajority ? (n + 1) / 2 : n;
  }

  void validate() const {
    if (n < 1) throw std::invalid_argument("ordered spec: need n >= 1");
    if (output_bits < 1 || output_bits > 62)
      throw std::invalid_argument("ordered spec: output bits must lie in [1,62]");
  }
};

// -- masked phase outputs ----------------------------------------------------

/// Tagged encoding of an output slot: bit L set marks the bottom symbol,
/// the low L bits carry the value.
inline std::uint64_t tag_value(std::uint64_t value, int bits) {
  if (bits < 1 || bits > 62) throw std::invalid_argument("tag: bad width");
  const std::uint64_t payload_mask = (1ULL << bits) - 1;
  if (value & ~payload_mask) throw std::invalid_argument("tag: value too wide");
  return value;
}

inline std::uint64_t tag_bottom(int bits) { return 1ULL << bits; }

struct MaskedPhaseOutput {
  int phase = 0;  // 1-based
  std::vector<std::uint64_t> z;
};

/// Phase-i functionality: slot j carries y_j when player j's position is i,
/// the tagged bottom symbol otherwise, each XORed with that player's mask.
inline MaskedPhaseOutput masked_phase_vector(const Ordering& order,
                                             const std::vector<std::uint64_t>& y,
                                             int phase,
                                             const std::vector<std::uint64_t>& masks,
                                             int bits) {
  const int n = order.size();
  if (static_cast<int>(y.size()) != n || static_cast<int>(masks.size()) != n)
    throw std::invalid_argument("masked_phase_vector: dimension mismatch");
  if (phase < 1 || phase > n) throw std::out_of_range("masked_phase_vector: phase");
  MaskedPhaseOutput out;
  out.phase = phase;
  out.z.resize(n);
  for (int j = 0; j < n; ++j) {
    const bool real = order.position_of(j) + 1 == phase;
    const std::uint64_t tagged = real ? tag_value(y[j], bits) : tag_bottom(bits);
    out.z[j] = tagged ^ masks[j];
  }
  return out;
}

/// Unmask one slot; nullopt is the bottom symbol.
inline std::optional<std::uint64_t> recover(std::uint64_t z, std::uint64_t mask,
                                            int bits) {
  const std::uint64_t tagged = z ^ mask;
  if (tagged & tag_bottom(bits)) return std::nullopt;
  return tagged & ((1ULL << bits) - 1);
}

inline std::uint64_t random_mask(std::mt19937_64& rng, int bits) {
  return rng() & ((1ULL << (bits + 1)) - 1);
}

// -- ideal general-MPC backend ----------------------------------------------

struct LeakageEntry {
  enum class Kind { Input, Output, Position };
  int party = 0;  // whom the leaked value concerns (always corrupt in audits)
  Kind kind = Kind::Input;
  std::uint64_t value = 0;
};

/// Serialized (ordering, y) tuple carried through the share phase.
inline std::vector<std::uint8_t> pack_order_outputs(const Ordering& order,
                                                    const std::vector<std::uint64_t>& y) {
  std::vector<std::uint8_t> out;
  const int n = order.size();
  out.push_back(static_cast<std::uint8_t>(n));
  for (int t = 0; t < n; ++t) out.push_back(static_cast<std::uint8_t>(order.player_at[t]));
  for (int j = 0; j < n; ++j)
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(y[j] >> (8 * b)));
  return out;
}

inline std::pair<Ordering, std::vector<std::uint64_t>> unpack_order_outputs(
    const std::vector<std::uint8_t>& blob) {
  if (blob.empty()) throw std::invalid_argument("unpack: empty blob");
  const int n = blob[0];
  if (static_cast<int>(blob.size()) != 1 + n + 8 * n)
    throw std::invalid_argument("unpack: bad blob size");
  std::vector<int> order(n);
  for (int t = 0; t < n; ++t) order[t] = blob[1 + t];
  std::vector<std::uint64_t> y(n, 0);
  for (int j = 0; j < n; ++j)
    for (int b = 0; b < 8; ++b)
      y[j] |= static_cast<std::uint64_t>(blob[1 + n + 8 * j + b]) << (8 * b);
  return {Ordering(order), y};
}

struct SharePhaseResult {
  std::vector<BlobShare> shares;  // one per party
  Ordering order;                 // bookkeeping for the run report
  std::vector<std::uint64_t> outputs;
};

struct PhaseResult {
  MaskedPhaseOutput masked;
  std::vector<int> defaulted;  // parties whose mask was substituted with zero
};

/// Pluggable general-MPC stand-in. The shipped implementation evaluates the
/// functionality at a simulated trusted node, delivers only designated
/// outputs, and keeps an explicit ledger of everything corrupt parties
/// receive so tests can audit the information flow.
class GeneralMpcBackend {
 public:
  virtual ~GeneralMpcBackend() = default;

  virtual SharePhaseResult share_phase(const OrderedSpec& spec,
                                       const std::vector<std::uint64_t>& inputs,
                                       const std::vector<bool>& provided,
                                       const std::vector<int>& corrupt) = 0;

  /// Reconstructs (ordering, y) from the submitted shares and computes the
  /// phase functionality. nullopt when fewer than `threshold` shares came in.
  virtual std::optional<PhaseResult> output_phase(
      const OrderedSpec& spec, int phase,
      const std::vector<std::optional<BlobShare>>& shares,
      const std::vector<std::optional<std::uint64_t>>& masks,
      const std::vector<int>& corrupt) = 0;

  virtual const std::vector<LeakageEntry>& leakage() const = 0;
};

class IdealBackend final : public GeneralMpcBackend {
 public:
  explicit IdealBackend(std::uint64_t seed) : rng_(seeded_rng(seed, "backend")) {}

  SharePhaseResult share_phase(const OrderedSpec& spec,
                               const std::vector<std::uint64_t>& inputs,
                               const std::vector<bool>& provided,
                               const std::vector<int>& corrupt) override {
    const auto y = spec.f.evaluate(inputs);
    const auto order = spec.p.evaluate(inputs);
    for (int j : corrupt)
      if (provided[j])
        leakage_.push_back({j, LeakageEntry::Kind::Input, inputs[j]});
    auto blob = pack_order_outputs(order, y);
    auto shares = share_blob(blob, spec.threshold(), spec.n, rng_);
    return SharePhaseResult{std::move(shares), order, y};
  }

  std::optional<PhaseResult> output_phase(
      const OrderedSpec& spec, int phase,
      const std::vector<std::optional<BlobShare>>& shares,
      const std::vector<std::optional<std::uint64_t>>& masks,
      const std::vector<int>& corrupt) override {
    std::vector<BlobShare> submitted;
    for (const auto& s : shares)
      if (s) submitted.push_back(*s);
    const auto blob = reconstruct_blob(submitted, spec.threshold());
    if (!blob) return std::nullopt;
    const auto [order, y] = unpack_order_outputs(*blob);

    std::vector<std::uint64_t> mask_values(spec.n, 0);
    PhaseResult result;
    for (int j = 0; j < spec.n; ++j) {
      if (masks[j])
        mask_values[j] = *masks[j];
      else
        result.defaulted.push_back(j);  // dropout: zero mask by convention
    }
    result.masked = masked_phase_vector(order, y, phase, mask_values, spec.output_bits);

    const int recipient = order.player_at[phase - 1];
    auto is_corrupt = [&](int j) {
      return std::find(corrupt.begin(), corrupt.end(), j) != corrupt.end();
    };
    if (is_corrupt(recipient)) {
      leakage_.push_back({recipient, LeakageEntry::Kind::Output, y[recipient]});
      leakage_.push_back({recipient, LeakageEntry::Kind::Position,
                          static_cast<std::uint64_t>(phase)});
    }
    // A defaulted party's real slot goes out in the clear; that reveals the
    // same output/position pair to everyone, so it enters the ledger too.
    for (int j : result.defaulted) {
      if (j == recipient && !is_corrupt(j)) {
        leakage_.push_back({j, LeakageEntry::Kind::Output, y[j]});
        leakage_.push_back({j, LeakageEntry::Kind::Position,
                            static_cast<std::uint64_t>(phase)});
      }
    }
    return result;
  }

  const std::vector<LeakageEntry>& leakage() const override { return leakage_; }

 private:
  std::mt19937_64 rng_;
  std::vector<LeakageEntry> leakage_;
};

/// One-shot ideal evaluation: what a trusted node would deliver, plus the
/// leakage ledger restricted to the corrupt set.
struct IdealEvaluation {
  std::vector<std::uint64_t> outputs;
  Ordering order;
  std::vector<LeakageEntry> leakage;
};

inline IdealEvaluation ideal_backend_eval(const OrderedSpec& spec,
                                          const std::vector<std::uint64_t>& inputs,
                                          const std::vector<int>& corrupt) {
  spec.validate();
  IdealEvaluation eval;
  eval.outputs = spec.f.evaluate(inputs);
  eval.order = spec.p.evaluate(inputs);
  for (int j : corrupt) {
    eval.leakage.push_back({j, LeakageEntry::Kind::Input, inputs[j]});
    eval.leakage.push_back({j, LeakageEntry::Kind::Output, eval.outputs[j]});
    eval.leakage.push_back({j, LeakageEntry::Kind::Position,
                            static_cast<std::uint64_t>(eval.order.position_of(j) + 1)});
  }
  return eval;
}

// -- protocol nodes ----------------------------------------------------------

namespace wire {

inline void put_u64(Payload& p, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) p.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

inline std::uint64_t get_u64(const Payload& p, std::size_t& off) {
  if (off + 8 > p.size()) throw std::invalid_argument("wire: truncated");
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(p[off + b]) << (8 * b);
  off += 8;
  return v;
}

inline Payload encode_input(std::uint64_t x) {
  Payload p{'I'};
  put_u64(p, x);
  return p;
}

inline Payload encode_share(const BlobShare& share) {
  Payload p{'S'};
  put_u64(p, share.index);
  put_u64(p, share.values.size());
  for (const auto& v : share.values) {
    put_u64(p, v.value);
    put_u64(p, v.modulus);
  }
  return p;
}

inline BlobShare decode_share(const Payload& p, std::size_t& off) {
  BlobShare share;
  share.index = static_cast<std::uint32_t>(get_u64(p, off));
  const auto count = get_u64(p, off);
  share.values.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto value = get_u64(p, off);
    const auto modulus = get_u64(p, off);
    share.values.push_back(Fp{value, modulus});
  }
  return share;
}

inline Payload encode_phase_input(int phase, const BlobShare& share, std::uint64_t mask) {
  Payload p{'P'};
  put_u64(p, static_cast<std::uint64_t>(phase));
  put_u64(p, mask);
  const Payload s = encode_share(share);
  p.insert(p.end(), s.begin() + 1, s.end());
  return p;
}

inline Payload encode_phase_output(const MaskedPhaseOutput& out,
                                   const std::vector<int>& defaulted) {
  Payload p{'Z'};
  put_u64(p, static_cast<std::uint64_t>(out.phase));
  put_u64(p, out.z.size());
  for (auto z : out.z) put_u64(p, z);
  put_u64(p, defaulted.size());
  for (int d : defaulted) put_u64(p, static_cast<std::uint64_t>(d));
  return p;
}

}  // namespace wire

/// The functionality host: collects inputs, runs the share phase through
/// the backend, then drives the n output phases on a fixed round schedule.
/// Phase i occupies rounds [2 + (i-1)*stride, ...): G challenge/response
/// pairs, one share+mask submission round, one evaluation round, one
/// delivery round (where the checkpoint lands).
class OrderedHostNode final : public Node {
 public:
  OrderedHostNode(OrderedSpec spec, std::shared_ptr<GeneralMpcBackend> backend,
                  std::vector<int> corrupt, int dummy_rounds)
      : spec_(std::move(spec)),
        backend_(std::move(backend)),
        corrupt_(std::move(corrupt)),
        g_(dummy_rounds) {}

  void step(SimContext& ctx, const std::vector<Message>& inbox) override {
    const std::int64_t r = ctx.round();
    const std::int64_t stride = 2 * g_ + 3;
    if (r == 1) {
      std::vector<std::uint64_t> inputs(spec_.n, 0);
      std::vector<bool> provided(spec_.n, false);
      for (const auto& m : inbox) {
        if (m.payload.empty() || m.payload[0] != 'I') continue;
        std::size_t off = 1;
        inputs[m.from - 1] = wire::get_u64(m.payload, off);
        provided[m.from - 1] = true;
      }
      const bool all_in =
          std::all_of(provided.begin(), provided.end(), [](bool b) { return b; });
      if (!all_in && spec_.mode == ThresholdMode::DishonestMajority) {
        abort_all(ctx);
        return;
      }
      auto shared = backend_->share_phase(spec_, inputs, provided, corrupt_);
      for (int j = 0; j < spec_.n; ++j)
        ctx.send(j + 1, wire::encode_share(shared.shares[j]));
      return;
    }
    if (r < 2) return;

    const int phase = static_cast<int>((r - 2) / stride) + 1;
    const std::int64_t rel = (r - 2) % stride;
    if (phase > spec_.n) {
      ctx.halt();
      return;
    }
    if (rel == 0) ctx.set_phase(phase);
    if (rel == 2 * g_ + 1) {
      // Submission round: shares and masks for this phase are in the inbox.
      std::vector<std::optional<BlobShare>> shares(spec_.n);
      std::vector<std::optional<std::uint64_t>> masks(spec_.n);
      for (const auto& m : inbox) {
        if (m.payload.empty() || m.payload[0] != 'P') continue;
        std::size_t off = 1;
        const int ph = static_cast<int>(wire::get_u64(m.payload, off));
        if (ph != phase) continue;
        const std::uint64_t mask = wire::get_u64(m.payload, off);
        shares[m.from - 1] = wire::decode_share(m.payload, off);
        masks[m.from - 1] = mask;
      }
      auto result = backend_->output_phase(spec_, phase, shares, masks, corrupt_);
      if (!result) {
        abort_all(ctx);
        return;
      }
      pending_ = std::move(result);
      for (int j = 0; j < spec_.n; ++j)
        ctx.send(j + 1, wire::encode_phase_output(pending_->masked, pending_->defaulted));
      return;
    }
    if (rel == 2 * g_ + 2 && pending_) {
      ctx.mark_checkpoint(phase);  // z_i reaches every party this round
      pending_.reset();
      if (phase == spec_.n) ctx.halt();
    }
  }

 private:
  void abort_all(SimContext& ctx) {
    for (int j = 0; j < spec_.n; ++j) ctx.send(j + 1, Payload{'A'});
    ctx.halt();
  }

  OrderedSpec spec_;
  std::shared_ptr<GeneralMpcBackend> backend_;
  std::vector<int> corrupt_;
  int g_;
  std::optional<PhaseResult> pending_;
};

class OrderedPartyNode final : public Node {
 public:
  OrderedPartyNode(OrderedSpec spec, int self, std::uint64_t input, int dummy_rounds)
      : spec_(std::move(spec)), self_(self), input_(input), g_(dummy_rounds) {}

  void step(SimContext& ctx, const std::vector<Message>& inbox) override {
    for (const auto& m : inbox) {
      if (!m.payload.empty() && m.payload[0] == 'A') {
        ctx.halt();
        return;
      }
      if (m.from == kHostNode && !m.payload.empty() && m.payload[0] == 'S') {
        std::size_t off = 1;
        share_ = wire::decode_share(m.payload, off);
      }
    }

    const std::int64_t r = ctx.round();
    const std::int64_t stride = 2 * g_ + 3;
    if (r == 0) {
      ctx.send(kHostNode, wire::encode_input(input_));
      return;
    }
    if (r < 2) return;
    const int phase = static_cast<int>((r - 2) / stride) + 1;
    const std::int64_t rel = (r - 2) % stride;
    if (phase > spec_.n) {
      ctx.halt();
      return;
    }

    if (rel < 2 * g_) {
      run_dummy_round(ctx, inbox, rel);
      return;
    }
    if (rel == 2 * g_) {
      // Tail responses of the last dummy round arrive here.
      if (g_ > 0) note_peers(inbox, 'R');
      if (!share_) return;  // never received a share: nothing to contribute
      if (abort_detected_ && spec_.mode == ThresholdMode::DishonestMajority) return;
      mask_ = random_mask(ctx.rng(), spec_.output_bits);
      ctx.send(kHostNode, wire::encode_phase_input(phase, *share_, mask_));
      return;
    }
    if (rel == 2 * g_ + 2) {
      for (const auto& m : inbox) {
        if (m.from != kHostNode || m.payload.empty() || m.payload[0] != 'Z') continue;
        handle_phase_output(ctx, m.payload);
      }
      if (phase == spec_.n) ctx.halt();
    }
  }

 private:
  void run_dummy_round(SimContext& ctx, const std::vector<Message>& inbox,
                       std::int64_t rel) {
    if (rel % 2 == 0) {
      // Challenge round; previous round's responses are in the inbox.
      if (rel > 0) note_peers(inbox, 'R');
      ctx.broadcast(Payload{'C'});
    } else {
      note_peers(inbox, 'C');
      std::int64_t answered = 0;
      for (const auto& m : inbox) {
        if (m.payload.empty() || m.payload[0] != 'C') continue;
        ctx.send(m.from, Payload{'R'});
        ++answered;
      }
      ctx.log_clock(answered);  // one g_dum execution per challenge handled
    }
  }

  /// Every party must talk to every other party in each dummy round; in the
  /// dishonest-majority setting a silent peer means someone aborted.
  void note_peers(const std::vector<Message>& inbox, char tag) {
    if (spec_.mode != ThresholdMode::DishonestMajority) return;
    std::set<int> heard;
    for (const auto& m : inbox)
      if (!m.payload.empty() && m.payload[0] == tag) heard.insert(m.from);
    if (static_cast<int>(heard.size()) < spec_.n - 1) abort_detected_ = true;
  }

  void handle_phase_output(SimContext& ctx, const Payload& payload) {
    std::size_t off = 1;
    const int phase = static_cast<int>(wire::get_u64(payload, off));
    const auto count = wire::get_u64(payload, off);
    std::vector<std::uint64_t> z(count);
    for (auto& v : z) v = wire::get_u64(payload, off);
    const auto defaulted_count = wire::get_u64(payload, off);
    bool self_defaulted = false;
    for (std::uint64_t i = 0; i < defaulted_count; ++i)
      if (static_cast<int>(wire::get_u64(payload, off)) == self_)
        self_defaulted = true;
    const std::uint64_t mask = self_defaulted ? 0 : mask_;
    if (const auto value = recover(z[self_], mask, spec_.output_bits)) {
      ctx.emit_output(*value);
      (void)phase;
    }
  }

  OrderedSpec spec_;
  int self_;
  std::uint64_t input_;
  int g_;
  std::optional<BlobShare> share_;
  std::uint64_t mask_ = 0;
  bool abort_detected_ = false;
};

// -- running and verdicts ----------------------------------------------------

struct OrderedRunResult {
  Transcript transcript;
  Ordering order;                        // from the backend evaluation
  std::vector<std::uint64_t> expected;   // f on the (possibly defaulted) inputs
  std::map<int, std::uint64_t> received; // party -> output value
  std::vector<LeakageEntry> leakage;
};

/// Plain ordered delivery when dummy_rounds == 0; with a positive count,
/// each phase is clocked by that many challenge/response rounds.
inline OrderedRunResult run_ordered(const OrderedSpec& spec,
                                    const std::vector<std::uint64_t>& inputs,
                                    const SimConfig& sim_config,
                                    std::shared_ptr<GeneralMpcBackend> backend = nullptr,
                                    int dummy_rounds = 0) {
  spec.validate();
  if (static_cast<int>(inputs.size()) != spec.n)
    throw std::invalid_argument("run_ordered: inputs dimension mismatch");
  if (sim_config.n != spec.n)
    throw std::invalid_argument("run_ordered: simulator size mismatch");
  if (!backend) backend = std::make_shared<IdealBackend>(sim_config.seed);

  std::vector<std::unique_ptr<Node>> nodes;
  nodes.push_back(std::make_unique<OrderedHostNode>(spec, backend,
                                                    sim_config.adversary.corrupt,
                                                    dummy_rounds));
  for (int j = 0; j < spec.n; ++j)
    nodes.push_back(std::make_unique<OrderedPartyNode>(spec, j, inputs[j], dummy_rounds));

  Simulator simulator(sim_config, std::move(nodes));
  OrderedRunResult result;
  result.transcript = simulator.run();

  // The backend evaluation defines the reference ordering and outputs; when
  // a party aborted before supplying input, the defaults apply here too.
  std::vector<std::uint64_t> effective = inputs;
  if (sim_config.adversary.abort_at && sim_config.adversary.abort_at->first == 0 &&
      sim_config.adversary.abort_at->second == 0) {
    for (int c : sim_config.adversary.corrupt) effective[c] = 0;
  }
  result.expected = spec.f.evaluate(effective);
  result.order = spec.p.evaluate(effective);
  for (const auto& out : result.transcript.outputs())
    result.received.emplace(out.party, out.value);
  result.leakage = backend->leakage();
  return result;
}

/// Ordered output delivery: everyone got an output and the delivery
/// instants strictly follow the positions.
inline bool verify_ordered_delivery(const Transcript& transcript, const Ordering& order) {
  std::map<int, OutEvent> first;
  for (const auto& out : transcript.outputs()) first.emplace(out.party, out);
  if (static_cast<int>(first.size()) != order.size()) return false;
  for (int t = 1; t < order.size(); ++t) {
    const auto& prev = first.at(order.player_at[t - 1]);
    const auto& cur = first.at(order.player_at[t]);
    if (prev.exact && cur.exact) {
      if (!(*prev.exact < *cur.exact)) return false;
    } else if (!(prev.tick < cur.tick)) {
      return false;
    }
  }
  return true;
}

/// Prefix-fairness: the set of parties holding outputs is {pi(1)..pi(j)}
/// for some j in [0, n].
inline bool verify_prefix_fairness(const Transcript& transcript, const Ordering& order) {
  std::set<int> received;
  for (const auto& out : transcript.outputs()) received.insert(out.party);
  std::size_t j = 0;
  while (j < received.size()) {
    if (!received.count(order.player_at[static_cast<int>(j)])) return false;
    ++j;
  }
  return j == received.size();
}

}  // namespace collab
