// Copyright 2026 The collab developers. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "collab/ordered_mpc.hpp"
#include "collab/sim.hpp"
#include "collab/timed_crypto.hpp"

namespace collab {

// -- delay schedules -----------------------------------------------------------

/// Geometric unlock delays: t_1 = 1, t_{i+1} = (B*G+1) * t_i.
struct DelaySchedule {
  int n = 0;
  std::int64_t speed_bound = 1;  // B
  std::int64_t gap = 1;          // G, in clock evaluations
  std::vector<std::int64_t> delays;
};

inline DelaySchedule delay_schedule(int n, std::int64_t speed_bound, std::int64_t gap) {
  if (n < 1) throw std::invalid_argument("delay_schedule: need n >= 1");
  if (speed_bound < 1 || gap < 0)
    throw std::invalid_argument("delay_schedule: need B >= 1 and G >= 0");
  DelaySchedule schedule{n, speed_bound, gap, {}};
  const std::int64_t ratio = speed_bound * gap + 1;
  std::int64_t t = 1;
  for (int i = 0; i < n; ++i) {
    schedule.delays.push_back(t);
    if (i + 1 < n) {
      if (t > (std::int64_t{1} << 62) / ratio)
        throw std::overflow_error("delay_schedule: delays overflow 63 bits");
      t *= ratio;
    }
  }
  return schedule;
}

/// Per-party compute speeds, with the max/min ratio the Relative-Delay
/// Assumption bounds.
struct SolverProfile {
  std::vector<Rational> speeds;

  Rational ratio() const {
    if (speeds.empty()) return Rational(1);
    Rational lo = speeds.front(), hi = speeds.front();
    for (const auto& s : speeds) {
      if (s < lo) lo = s;
      if (hi < s) hi = s;
    }
    return hi / lo;
  }

  Rational slowest() const {
    if (speeds.empty()) return Rational(1);
    Rational lo = speeds.front();
    for (const auto& s : speeds)
      if (s < lo) lo = s;
    return lo;
  }

  bool compliant(std::int64_t speed_bound) const {
    return ratio() <= Rational(speed_bound);
  }
};

// -- timed delays via dummy rounds ---------------------------------------------

/// Ordered MPC with G challenge/response dummy rounds clocking each phase.
inline OrderedRunResult run_dummy_delay(const OrderedSpec& spec,
                                        const std::vector<std::uint64_t>& inputs,
                                        const SimConfig& sim_config, int gap,
                                        std::shared_ptr<GeneralMpcBackend> backend =
                                            nullptr) {
  if (gap < 0) throw std::invalid_argument("run_dummy_delay: need G >= 0");
  return run_ordered(spec, inputs, sim_config, std::move(backend), gap);
}

// -- timed delays via time-lock puzzles ------------------------------------------

/// Solver party for the time-lock variant: submits input and mask, receives a
/// puzzle, then solves it at its own speed. Chain work is advanced lazily in
/// whole ticks; the exact (rational) completion instant accompanies the
/// output event so ordering verdicts are not at the mercy of tick rounding.
class TimelockPartyNode final : public Node {
 public:
  TimelockPartyNode(std::uint64_t input, int output_bits, Rational speed)
      : input_(input), bits_(output_bits), speed_(speed) {}

  void step(SimContext& ctx, const std::vector<Message>& inbox) override {
    if (ctx.round() == 0) {
      mask_ = random_mask(ctx.rng(), bits_);
      Payload p{'I'};
      wire::put_u64(p, input_);
      wire::put_u64(p, mask_);
      ctx.send(kHostNode, p);
      return;
    }
    for (const auto& m : inbox) {
      if (m.payload.empty() || m.from != kHostNode) continue;
      if (m.payload[0] == 'A') {
        ctx.halt();
        return;
      }
      if (m.payload[0] == 'Q') {
        decode_puzzle(m.payload);
        issue_tick_ = ctx.round();
        solver_.emplace(*work_, puzzle_->x);
      }
    }
    if (!solver_ || done_) return;

    // Steps completed by the end of this tick; work begins the tick after
    // the puzzle arrives.
    const std::int64_t elapsed = ctx.round() - issue_tick_;
    const std::int64_t target =
        std::min<std::int64_t>(puzzle_->t, steps_completed(speed_, elapsed));
    const std::int64_t before = solver_->steps_used();
    solver_->advance_to(target);
    ctx.log_clock(solver_->steps_used() - before);
    if (solver_->depth() >= puzzle_->t) {
      const Bytes data = unlock(solver_->state(), puzzle_->b, puzzle_->data_len);
      std::uint64_t masked = 0;
      for (int b = 0; b < 8 && b < static_cast<int>(data.size()); ++b)
        masked |= static_cast<std::uint64_t>(data[b]) << (8 * b);
      const auto value = recover(masked, defaulted_ ? 0 : mask_, bits_);
      // Exact completion instant: issue + t / speed.
      const Rational exact = Rational(issue_tick_) + Rational(puzzle_->t) / speed_;
      ctx.emit_output(value ? *value : tag_bottom(bits_), exact);
      done_ = true;
      ctx.halt();
    }
  }

 private:
  void decode_puzzle(const Payload& p) {
    std::size_t off = 1;
    TimeLockPuzzle puzzle;
    puzzle.scheme = static_cast<PuzzleScheme>(wire::get_u64(p, off));
    puzzle.kappa = static_cast<int>(wire::get_u64(p, off));
    puzzle.t = static_cast<std::int64_t>(wire::get_u64(p, off));
    puzzle.data_len = static_cast<std::size_t>(wire::get_u64(p, off));
    defaulted_ = wire::get_u64(p, off) != 0;
    const auto xlen = wire::get_u64(p, off);
    for (std::uint64_t i = 0; i < xlen; ++i) puzzle.x.push_back(p.at(off++));
    const auto blen = wire::get_u64(p, off);
    for (std::uint64_t i = 0; i < blen; ++i) puzzle.b.push_back(p.at(off++));
    const auto alen = wire::get_u64(p, off);
    for (std::uint64_t i = 0; i < alen; ++i) puzzle.a.push_back(p.at(off++));
    puzzle_ = std::move(puzzle);
    work_ = make_solver_work(puzzle_->scheme, puzzle_->a);
  }

  std::uint64_t input_;
  int bits_;
  Rational speed_;
  std::uint64_t mask_ = 0;
  std::optional<TimeLockPuzzle> puzzle_;
  std::unique_ptr<WorkFunction> work_;
  std::optional<ChainSolver> solver_;
  std::int64_t issue_tick_ = 0;
  bool defaulted_ = false;
  bool done_ = false;
};

/// Host for the time-lock protocol: one backend evaluation, then every
/// party's masked output goes out locked under its position's delay, all at
/// the same tick. Checkpoints are the (omnisciently observed) solving
/// completions.
class TimelockHostNode final : public Node {
 public:
  TimelockHostNode(OrderedSpec spec, DelaySchedule schedule, PuzzleScheme scheme,
                   int kappa, std::vector<Rational> speeds)
      : spec_(std::move(spec)),
        schedule_(std::move(schedule)),
        scheme_(scheme),
        kappa_(kappa),
        speeds_(std::move(speeds)) {}

  void step(SimContext& ctx, const std::vector<Message>& inbox) override {
    if (ctx.round() == 1) {
      std::vector<std::uint64_t> inputs(spec_.n, 0), masks(spec_.n, 0);
      std::vector<bool> provided(spec_.n, false);
      for (const auto& m : inbox) {
        if (m.payload.empty() || m.payload[0] != 'I') continue;
        std::size_t off = 1;
        inputs[m.from - 1] = wire::get_u64(m.payload, off);
        masks[m.from - 1] = wire::get_u64(m.payload, off);
        provided[m.from - 1] = true;
      }
      const bool all_in =
          std::all_of(provided.begin(), provided.end(), [](bool b) { return b; });
      if (!all_in && spec_.mode == ThresholdMode::DishonestMajority) {
        for (int j = 0; j < spec_.n; ++j) ctx.send(j + 1, Payload{'A'});
        ctx.halt();
        return;
      }
      const auto y = spec_.f.evaluate(inputs);
      order_ = spec_.p.evaluate(inputs);
      auto rng = seeded_rng(ctx.rng()(), "timelock-host");
      // One puzzle per party: y_j XOR r_j locked for t_{position(j)+1} steps,
      // all issued in this single round.
      for (int j = 0; j < spec_.n; ++j) {
        const std::uint64_t tagged = tag_value(y[j], spec_.output_bits);
        const std::uint64_t masked = tagged ^ (provided[j] ? masks[j] : 0);
        Bytes data(8);
        for (int b = 0; b < 8; ++b)
          data[b] = static_cast<std::uint8_t>(masked >> (8 * b));
        const std::int64_t delay = schedule_.delays.at(order_.position_of(j));
        const auto puzzle = lock(data, delay, scheme_, kappa_, rng);
        ctx.send(j + 1, encode_puzzle(puzzle, !provided[j]));
      }
      // Expected completion instants, position by position, for checkpoints.
      for (int pos = 0; pos < spec_.n; ++pos) {
        const int player = order_.player_at[pos];
        const Rational speed = speeds_.empty() ? Rational(1) : speeds_.at(player);
        pending_ckpts_.push_back(
            {pos + 1, 2 + ticks_to_complete(speed, schedule_.delays[pos])});
      }
      return;
    }
    // Mark each checkpoint at the tick its party finishes solving.
    while (ckpt_next_ < pending_ckpts_.size() &&
           pending_ckpts_[ckpt_next_].second <= ctx.round()) {
      ctx.mark_checkpoint(pending_ckpts_[ckpt_next_].first);
      ++ckpt_next_;
    }
    if (ckpt_next_ == pending_ckpts_.size() && !pending_ckpts_.empty()) ctx.halt();
  }

 private:
  static Payload encode_puzzle(const TimeLockPuzzle& puzzle, bool defaulted) {
    Payload p{'Q'};
    wire::put_u64(p, static_cast<std::uint64_t>(puzzle.scheme));
    wire::put_u64(p, static_cast<std::uint64_t>(puzzle.kappa));
    wire::put_u64(p, static_cast<std::uint64_t>(puzzle.t));
    wire::put_u64(p, puzzle.data_len);
    wire::put_u64(p, defaulted ? 1 : 0);
    wire::put_u64(p, puzzle.x.size());
    p.insert(p.end(), puzzle.x.begin(), puzzle.x.end());
    wire::put_u64(p, puzzle.b.size());
    p.insert(p.end(), puzzle.b.begin(), puzzle.b.end());
    wire::put_u64(p, puzzle.a.size());
    p.insert(p.end(), puzzle.a.begin(), puzzle.a.end());
    return p;
  }

  OrderedSpec spec_;
  DelaySchedule schedule_;
  PuzzleScheme scheme_;
  int kappa_;
  std::vector<Rational> speeds_;
  Ordering order_;
  std::vector<std::pair<int, std::int64_t>> pending_ckpts_;  // (index, tick)
  std::size_t ckpt_next_ = 0;
};

struct TimedRunResult {
  Transcript transcript;
  Ordering order;
  std::vector<std::uint64_t> expected;
  std::map<int, std::uint64_t> received;
  std::map<int, std::int64_t> unlock_ticks;
  bool order_ok = false;  // unlock instants strictly follow the positions
};

inline TimedRunResult run_timelock_delay(const OrderedSpec& spec,
                                         const std::vector<std::uint64_t>& inputs,
                                         const SimConfig& sim_config,
                                         const DelaySchedule& schedule,
                                         PuzzleScheme scheme, int kappa) {
  spec.validate();
  if (static_cast<int>(inputs.size()) != spec.n || sim_config.n != spec.n)
    throw std::invalid_argument("run_timelock_delay: dimension mismatch");
  if (schedule.n != spec.n)
    throw std::invalid_argument("run_timelock_delay: schedule size mismatch");

  std::vector<std::unique_ptr<Node>> nodes;
  nodes.push_back(std::make_unique<TimelockHostNode>(spec, schedule, scheme, kappa,
                                                     sim_config.speeds));
  for (int j = 0; j < spec.n; ++j)
    nodes.push_back(std::make_unique<TimelockPartyNode>(inputs[j], spec.output_bits,
                                                        sim_config.speed_of(j)));

  Simulator simulator(sim_config, std::move(nodes));
  TimedRunResult result;
  result.transcript = simulator.run();
  result.expected = spec.f.evaluate(inputs);
  result.order = spec.p.evaluate(inputs);
  for (const auto& out : result.transcript.outputs()) {
    result.received.emplace(out.party, out.value);
    result.unlock_ticks.emplace(out.party, out.tick);
  }
  result.order_ok = verify_ordered_delivery(result.transcript, result.order);
  return result;
}

/// Gap verdict from the guarantee the relative-delay assumption provides:
/// between consecutive solving completions even the slowest party can run
/// (t_{i+1} - t_i)/B >= G*t_i clock evaluations. The transcript supplies the
/// checkpoints, the profile is checked against B.
inline bool verify_delay_gaps(const Transcript& transcript, std::int64_t gap,
                              const DelaySchedule& schedule,
                              const SolverProfile& profile) {
  const auto ckpts = transcript.checkpoints();
  if (static_cast<int>(ckpts.size()) != schedule.n) return false;
  for (std::size_t i = 0; i + 1 < ckpts.size(); ++i)
    if (ckpts[i + 1].tick < ckpts[i].tick) return false;
  if (!profile.compliant(schedule.speed_bound)) return false;
  for (int i = 0; i + 1 < schedule.n; ++i) {
    const std::int64_t guaranteed =
        (schedule.delays[i + 1] - schedule.delays[i]) / schedule.speed_bound;
    if (guaranteed < gap) return false;
  }
  return true;
}

}  // namespace collab
