// Copyright 2026 The collab developers. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <sodium.h>

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

namespace collab {

using Bytes = std::vector<std::uint8_t>;
using BigInt = boost::multiprecision::cpp_int;

enum class PuzzleScheme { HashChain, Squaring };

inline constexpr int kDefaultKappa = 512;  // prime bits for the squaring scheme
inline constexpr int kHashStateBytes = 32;

namespace detail {

inline void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw std::runtime_error("libsodium failed to initialize");
}

inline Bytes bigint_to_bytes(const BigInt& v, std::size_t width) {
  Bytes out(width, 0);
  BigInt x = v;
  for (std::size_t i = 0; i < width && x != 0; ++i) {
    out[i] = static_cast<std::uint8_t>(x & 0xff);
    x >>= 8;
  }
  if (x != 0) throw std::invalid_argument("bigint_to_bytes: value too wide");
  return out;
}

inline BigInt bytes_to_bigint(const Bytes& b) {
  BigInt x = 0;
  for (std::size_t i = b.size(); i-- > 0;) {
    x <<= 8;
    x += b[i];
  }
  return x;
}

inline BigInt random_bits(int bits, std::mt19937_64& rng) {
  BigInt x = 0;
  int remaining = bits;
  while (remaining > 0) {
    const int chunk = remaining >= 32 ? 32 : remaining;
    x <<= chunk;
    x += static_cast<std::uint32_t>(rng() & ((1ULL << chunk) - 1));
    remaining -= chunk;
  }
  return x;
}

inline BigInt random_prime(int bits, std::mt19937_64& rng) {
  if (bits < 4) throw std::invalid_argument("random_prime: need at least 4 bits");
  for (int attempt = 0; attempt < 100000; ++attempt) {
    BigInt candidate = random_bits(bits, rng);
    candidate |= BigInt(1) << (bits - 1);  // full width
    candidate |= 1;                        // odd
    if (boost::multiprecision::miller_rabin_test(candidate, 32, rng)) return candidate;
  }
  throw std::runtime_error("random_prime: generation failed");
}

}  // namespace detail

/// A puzzle's sequential step function. fast_power shortcuts t steps when a
/// trapdoor is available (squaring with known phi(N)); it always agrees with
/// iterating step().
class WorkFunction {
 public:
  virtual ~WorkFunction() = default;
  virtual std::size_t element_size() const = 0;
  virtual Bytes step(const Bytes& x) const = 0;
  virtual bool has_fast_path() const { return false; }
  virtual Bytes fast_power(const Bytes& x, std::int64_t t) const {
    (void)x;
    (void)t;
    throw std::logic_error("work function: no fast path without a trapdoor");
  }
};

/// Iterated keyed BLAKE2b. Treated as the inherently-sequential hash; the
/// sequentiality itself is an assumption, not something this code enforces.
class HashChainWork final : public WorkFunction {
 public:
  explicit HashChainWork(Bytes key) : key_(std::move(key)) {
    detail::ensure_sodium();
    if (key_.size() != kHashStateBytes)
      throw std::invalid_argument("hash chain: key must be 32 bytes");
  }

  std::size_t element_size() const override { return kHashStateBytes; }

  Bytes step(const Bytes& x) const override {
    Bytes out(kHashStateBytes);
    crypto_generichash(out.data(), out.size(), x.data(), x.size(), key_.data(),
                       key_.size());
    return out;
  }

 private:
  Bytes key_;
};

/// x -> x^2 mod N. With phi(N) retained (locking side only) the chain value
/// after t steps is x^(2^t mod phi) mod N.
class SquaringWork final : public WorkFunction {
 public:
  explicit SquaringWork(BigInt modulus, std::optional<BigInt> phi = std::nullopt)
      : n_(std::move(modulus)), phi_(std::move(phi)) {
    if (n_ < 4) throw std::invalid_argument("squaring: modulus too small");
    width_ = 0;
    for (BigInt x = n_; x != 0; x >>= 8) ++width_;
  }

  std::size_t element_size() const override { return width_; }

  Bytes step(const Bytes& x) const override {
    const BigInt v = detail::bytes_to_bigint(x);
    return detail::bigint_to_bytes((v * v) % n_, width_);
  }

  bool has_fast_path() const override { return phi_.has_value(); }

  Bytes fast_power(const Bytes& x, std::int64_t t) const override {
    if (!phi_) throw std::logic_error("squaring: trapdoor not available");
    const BigInt e = boost::multiprecision::powm(BigInt(2), BigInt(t), *phi_);
    const BigInt v = detail::bytes_to_bigint(x);
    return detail::bigint_to_bytes(boost::multiprecision::powm(v, e, n_), width_);
  }

  const BigInt& modulus() const { return n_; }

 private:
  BigInt n_;
  std::optional<BigInt> phi_;
  std::size_t width_ = 0;
};

/// Solver-side work function reconstructed from a puzzle's auxiliary data;
/// never carries a trapdoor.
inline std::unique_ptr<WorkFunction> make_solver_work(PuzzleScheme scheme,
                                                      const Bytes& aux) {
  if (scheme == PuzzleScheme::HashChain)
    return std::make_unique<HashChainWork>(aux);
  return std::make_unique<SquaringWork>(detail::bytes_to_bigint(aux));
}

inline Bytes iterate_time_step(const WorkFunction& work, Bytes x, std::int64_t t) {
  for (std::int64_t i = 0; i < t; ++i) x = work.step(x);
  return x;
}

// -- time-lock puzzles -------------------------------------------------------

struct TimeLockPuzzle {
  PuzzleScheme scheme = PuzzleScheme::HashChain;
  int kappa = kDefaultKappa;
  Bytes x;          // chain seed
  std::int64_t t = 1;
  Bytes b;          // data XOR chain value at depth t
  Bytes a;          // solver aux: hash key, or modulus N (trapdoor excluded)
  std::size_t data_len = 0;
};

namespace detail {

inline Bytes xor_bytes(Bytes lhs, const Bytes& rhs) {
  if (lhs.size() != rhs.size()) throw std::invalid_argument("xor: length mismatch");
  for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] ^= rhs[i];
  return lhs;
}

inline Bytes pad_to(const Bytes& data, std::size_t width) {
  if (data.size() > width) throw std::invalid_argument("lock: data exceeds element size");
  Bytes out = data;
  out.resize(width, 0);
  return out;
}

struct LockContext {
  std::unique_ptr<WorkFunction> work;  // trapdoored when squaring
  Bytes aux;                           // what the puzzle ships
  Bytes seed;
};

inline LockContext make_lock_context(PuzzleScheme scheme, int kappa,
                                     std::mt19937_64& rng) {
  LockContext ctx;
  if (scheme == PuzzleScheme::HashChain) {
    Bytes key(kHashStateBytes), seed(kHashStateBytes);
    for (auto& c : key) c = static_cast<std::uint8_t>(rng());
    for (auto& c : seed) c = static_cast<std::uint8_t>(rng());
    ctx.work = std::make_unique<HashChainWork>(key);
    ctx.aux = key;
    ctx.seed = std::move(seed);
    return ctx;
  }
  const BigInt p = random_prime(kappa, rng);
  BigInt q = random_prime(kappa, rng);
  while (q == p) q = random_prime(kappa, rng);
  const BigInt n = p * q;
  const BigInt phi = (p - 1) * (q - 1);
  auto work = std::make_unique<SquaringWork>(n, phi);
  BigInt x;
  do {
    x = random_bits(2 * kappa, rng) % n;
  } while (x < 2 || boost::multiprecision::gcd(x, n) != 1);
  ctx.seed = bigint_to_bytes(x, work->element_size());
  ctx.aux = bigint_to_bytes(n, work->element_size());
  ctx.work = std::move(work);
  return ctx;  // p, q, phi go out of scope with the trapdoored work function
}

inline Bytes chain_value(const LockContext& ctx, std::int64_t t) {
  if (ctx.work->has_fast_path()) return ctx.work->fast_power(ctx.seed, t);
  return iterate_time_step(*ctx.work, ctx.seed, t);
}

}  // namespace detail

inline TimeLockPuzzle lock(const Bytes& data, std::int64_t t, PuzzleScheme scheme,
                           int kappa, std::mt19937_64& rng) {
  if (t < 1) throw std::invalid_argument("lock: need t >= 1");
  auto ctx = detail::make_lock_context(scheme, kappa, rng);
  TimeLockPuzzle puzzle;
  puzzle.scheme = scheme;
  puzzle.kappa = kappa;
  puzzle.x = ctx.seed;
  puzzle.t = t;
  puzzle.a = ctx.aux;
  puzzle.data_len = data.size();
  puzzle.b = detail::xor_bytes(detail::pad_to(data, ctx.work->element_size()),
                               detail::chain_value(ctx, t));
  return puzzle;
}

inline Bytes unlock(const Bytes& chain_state, const Bytes& b, std::size_t data_len) {
  Bytes out = detail::xor_bytes(chain_state, b);
  out.resize(data_len);
  return out;
}

/// t sequential steps, then unmask.
inline Bytes complete_unlock(const TimeLockPuzzle& puzzle) {
  const auto work = make_solver_work(puzzle.scheme, puzzle.a);
  return unlock(iterate_time_step(*work, puzzle.x, puzzle.t), puzzle.b,
                puzzle.data_len);
}

// -- time-line puzzles -------------------------------------------------------

struct TimeLinePuzzle {
  PuzzleScheme scheme = PuzzleScheme::HashChain;
  int kappa = kDefaultKappa;
  Bytes x;
  std::vector<std::int64_t> t;
  std::vector<Bytes> b;
  Bytes a;
  std::vector<std::size_t> data_len;
  bool delays_sorted = true;

  /// Debug-only mask retention for the hiding harness; never serialized.
  std::vector<Bytes> debug_masks;
};

/// One chain, every item masked at its own depth. Squaring locks in
/// O(m log t_max) through the trapdoor; the hash scheme walks the chain once
/// to the deepest delay.
inline TimeLinePuzzle lock_line(const std::vector<Bytes>& items,
                                const std::vector<std::int64_t>& delays,
                                PuzzleScheme scheme, int kappa, std::mt19937_64& rng,
                                bool retain_masks_for_tests = false) {
  if (items.empty() || items.size() != delays.size())
    throw std::invalid_argument("lock_line: need matching non-empty items/delays");
  if (items.size() > 10000) throw std::invalid_argument("lock_line: m capped at 10^4");
  for (auto d : delays)
    if (d < 1) throw std::invalid_argument("lock_line: delays must be >= 1");

  auto ctx = detail::make_lock_context(scheme, kappa, rng);
  TimeLinePuzzle puzzle;
  puzzle.scheme = scheme;
  puzzle.kappa = kappa;
  puzzle.x = ctx.seed;
  puzzle.t = delays;
  puzzle.a = ctx.aux;
  puzzle.delays_sorted = std::is_sorted(delays.begin(), delays.end());

  std::vector<Bytes> masks(items.size());
  if (ctx.work->has_fast_path()) {
    for (std::size_t i = 0; i < delays.size(); ++i)
      masks[i] = ctx.work->fast_power(ctx.seed, delays[i]);
  } else {
    const std::int64_t deepest = *std::max_element(delays.begin(), delays.end());
    Bytes state = ctx.seed;
    for (std::int64_t depth = 1; depth <= deepest; ++depth) {
      state = ctx.work->step(state);
      for (std::size_t i = 0; i < delays.size(); ++i)
        if (delays[i] == depth) masks[i] = state;
    }
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    puzzle.data_len.push_back(items[i].size());
    puzzle.b.push_back(detail::xor_bytes(
        detail::pad_to(items[i], ctx.work->element_size()), masks[i]));
  }
  if (retain_masks_for_tests) puzzle.debug_masks = std::move(masks);
  return puzzle;
}

/// Unmask item i given the chain state at depth t_i.
inline Bytes unlock_line_at(const TimeLinePuzzle& puzzle, std::size_t i,
                            const Bytes& chain_state) {
  return unlock(chain_state, puzzle.b.at(i), puzzle.data_len.at(i));
}

// -- hybrid wrapping -----------------------------------------------------

/// Payloads beyond one element ride alongside the puzzle as a stream
/// cipher text; only the fresh key is locked.
struct WrappedPuzzle {
  TimeLockPuzzle key_puzzle;
  Bytes ciphertext;
};

namespace detail {

/// Keystream blocks: keyed BLAKE2b over a counter.
inline Bytes keystream_xor(const Bytes& key, Bytes data) {
  ensure_sodium();
  Bytes counter(8, 0);
  for (std::size_t off = 0; off < data.size(); off += kHashStateBytes) {
    Bytes block(kHashStateBytes);
    crypto_generichash(block.data(), block.size(), counter.data(), counter.size(),
                       key.data(), key.size());
    for (std::size_t i = 0; i < kHashStateBytes && off + i < data.size(); ++i)
      data[off + i] ^= block[i];
    for (auto& c : counter)
      if (++c != 0) break;
  }
  return data;
}

}  // namespace detail

inline WrappedPuzzle lock_wrapped(const Bytes& data, std::int64_t t,
                                  PuzzleScheme scheme, int kappa,
                                  std::mt19937_64& rng) {
  // The 32-byte wrapping key must itself fit one element.
  if (scheme == PuzzleScheme::Squaring && kappa < 129)
    throw std::invalid_argument("lock_wrapped: squaring needs kappa >= 129");
  Bytes key(kHashStateBytes);
  for (auto& c : key) c = static_cast<std::uint8_t>(rng());
  WrappedPuzzle wrapped;
  wrapped.ciphertext = detail::keystream_xor(key, data);
  wrapped.key_puzzle = lock(key, t, scheme, kappa, rng);
  return wrapped;
}

inline Bytes unlock_wrapped(const WrappedPuzzle& wrapped) {
  const Bytes key = complete_unlock(wrapped.key_puzzle);
  return detail::keystream_xor(key, wrapped.ciphertext);
}

/// Sequential solver with exact step accounting; one pass recovers every
/// item of a time-line puzzle in t_max total steps.
class ChainSolver {
 public:
  ChainSolver(const WorkFunction& work, Bytes seed)
      : work_(work), state_(std::move(seed)) {}

  void advance_to(std::int64_t depth) {
    while (depth_ < depth) {
      state_ = work_.step(state_);
      ++depth_;
      ++steps_used_;
    }
  }

  const Bytes& state() const { return state_; }
  std::int64_t depth() const { return depth_; }
  std::int64_t steps_used() const { return steps_used_; }

 private:
  const WorkFunction& work_;
  Bytes state_;
  std::int64_t depth_ = 0;
  std::int64_t steps_used_ = 0;
};

// -- the hiding experiment ----------------------------------------------------

/// What the challenger hands the adversary: the locked puzzle (seed, aux,
/// delays, masked items), an oracle for up to m-1 chain masks, and a
/// step-budgeted work function.
class HidingChallenge {
 public:
  HidingChallenge(const TimeLinePuzzle& puzzle, std::int64_t step_budget)
      : puzzle_(puzzle),
        work_(make_solver_work(puzzle.scheme, puzzle.a)),
        budget_(step_budget) {}

  const TimeLinePuzzle& puzzle() const { return puzzle_; }

  std::size_t items() const { return puzzle_.b.size(); }

  /// Reveals the chain mask for one index. Querying every index is allowed
  /// but makes the win condition (an unqueried target) unsatisfiable, so
  /// the challenger scores such a trial as a loss.
  const Bytes& query_mask(std::size_t i) {
    if (puzzle_.debug_masks.empty())
      throw std::logic_error("hiding: challenger did not retain masks");
    queried_.insert(i);
    return puzzle_.debug_masks.at(i);
  }

  const std::set<std::size_t>& queried() const { return queried_; }

  /// Budgeted sequential work; throws once the step budget runs out.
  Bytes step(const Bytes& x) {
    if (steps_used_ >= budget_) throw std::runtime_error("hiding: step budget spent");
    ++steps_used_;
    return work_->step(x);
  }

  std::int64_t steps_used() const { return steps_used_; }

 private:
  const TimeLinePuzzle& puzzle_;
  std::unique_ptr<WorkFunction> work_;
  std::set<std::size_t> queried_;
  std::int64_t budget_ = 0;
  std::int64_t steps_used_ = 0;
};

struct HidingGuess {
  std::size_t index = 0;
  int beta = 0;
};

class HidingAdversary {
 public:
  virtual ~HidingAdversary() = default;
  virtual HidingGuess play(HidingChallenge& challenge,
                           const std::vector<Bytes>& d0,
                           const std::vector<Bytes>& d1,
                           std::mt19937_64& rng) = 0;
};

/// Ignores the puzzle and flips coins.
class RandomGuessAdversary final : public HidingAdversary {
 public:
  HidingGuess play(HidingChallenge& challenge, const std::vector<Bytes>&,
                   const std::vector<Bytes>&, std::mt19937_64& rng) override {
    return HidingGuess{static_cast<std::size_t>(rng() % challenge.items()),
                       static_cast<int>(rng() & 1)};
  }
};

/// Solves the chain to the target depth and compares the unmasked item
/// against the two candidate vectors. Needs a budget of at least t_{i'}.
class ChainSolvingAdversary final : public HidingAdversary {
 public:
  explicit ChainSolvingAdversary(std::size_t target) : target_(target) {}

  HidingGuess play(HidingChallenge& challenge, const std::vector<Bytes>& d0,
                   const std::vector<Bytes>& d1, std::mt19937_64& rng) override {
    const auto& puzzle = challenge.puzzle();
    const std::size_t i = target_ < challenge.items() ? target_ : 0;
    Bytes state = puzzle.x;
    for (std::int64_t s = 0; s < puzzle.t.at(i); ++s) state = challenge.step(state);
    const Bytes data = unlock_line_at(puzzle, i, state);
    if (data == d0.at(i)) return HidingGuess{i, 0};
    if (data == d1.at(i)) return HidingGuess{i, 1};
    return HidingGuess{i, static_cast<int>(rng() & 1)};
  }

 private:
  std::size_t target_;
};

/// Uses only queried masks; with a budget below every delay it can never
/// reach an unqueried item's mask, so its target guess stays a coin flip.
class QueryOnlyAdversary final : public HidingAdversary {
 public:
  HidingGuess play(HidingChallenge& challenge, const std::vector<Bytes>& d0,
                   const std::vector<Bytes>& d1, std::mt19937_64& rng) override {
    const auto& puzzle = challenge.puzzle();
    const std::size_t m = challenge.items();
    // Unmask everything except the last item, then guess the last one.
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const Bytes data = unlock_line_at(puzzle, i, challenge.query_mask(i));
      (void)(data == d0.at(i) || data == d1.at(i));
    }
    return HidingGuess{m - 1, static_cast<int>(rng() & 1)};
  }
};

struct HidingExperimentConfig {
  PuzzleScheme scheme = PuzzleScheme::HashChain;
  int kappa = 16;
  std::vector<std::int64_t> delays;
  std::int64_t step_budget = 0;  // per trial
  int trials = 1000;
};

/// Empirical success frequency of an adversary in the hiding game: the
/// challenger hides a fresh coin vector each trial and the adversary wins by
/// predicting the coin of an unqueried index.
inline double hiding_experiment(HidingAdversary& adversary,
                                const std::vector<Bytes>& d0,
                                const std::vector<Bytes>& d1,
                                const HidingExperimentConfig& config,
                                std::mt19937_64& rng) {
  const std::size_t m = config.delays.size();
  if (d0.size() != m || d1.size() != m)
    throw std::invalid_argument("hiding: data vectors must have m entries");
  int wins = 0;
  for (int trial = 0; trial < config.trials; ++trial) {
    std::vector<int> beta(m);
    std::vector<Bytes> chosen(m);
    for (std::size_t i = 0; i < m; ++i) {
      beta[i] = static_cast<int>(rng() & 1);
      chosen[i] = beta[i] ? d1[i] : d0[i];
    }
    const auto puzzle = lock_line(chosen, config.delays, config.scheme, config.kappa,
                                  rng, /*retain_masks_for_tests=*/true);
    HidingChallenge challenge(puzzle, config.step_budget);
    HidingGuess guess;
    try {
      guess = adversary.play(challenge, d0, d1, rng);
    } catch (const std::runtime_error&) {
      continue;  // budget exhausted: counted as a loss
    }
    if (challenge.queried().count(guess.index)) continue;  // i' in I: loss
    if (challenge.queried().size() >= m) continue;
    if (guess.beta == beta[guess.index]) ++wins;
  }
  return static_cast<double>(wins) / config.trials;
}

}  // namespace collab
