// Copyright 2026 The collab developers. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "collab/field.hpp"

namespace collab {

/// One evaluation point of a k-out-of-n polynomial sharing.
struct Share {
  std::uint32_t index = 0;  // in [1, n]
  Fp value;
};

/// Shamir sharing: evaluations at 1..n of a degree-(k-1) polynomial whose
/// constant term is the secret and whose other coefficients are uniform.
inline std::vector<Share> share_secret(const Fp& secret, int k, int n,
                                       std::mt19937_64& rng) {
  if (k < 1 || k > n) throw std::invalid_argument("share: need 1 <= k <= n");
  if (static_cast<std::uint64_t>(n) >= secret.modulus)
    throw std::invalid_argument("share: n must be smaller than the field");

  std::vector<Fp> coeffs;
  coeffs.reserve(k);
  coeffs.push_back(secret);
  std::uniform_int_distribution<std::uint64_t> dist(0, secret.modulus - 1);
  for (int i = 1; i < k; ++i) coeffs.emplace_back(dist(rng), secret.modulus);

  std::vector<Share> out;
  out.reserve(n);
  for (int i = 1; i <= n; ++i) {
    const Fp x(static_cast<std::uint64_t>(i), secret.modulus);
    Fp acc = Fp::zero(secret.modulus);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    out.push_back(Share{static_cast<std::uint32_t>(i), acc});
  }
  return out;
}

/// Lagrange interpolation at zero; nullopt when fewer than k shares are given.
inline std::optional<Fp> reconstruct_secret(const std::vector<Share>& shares, int k) {
  if (static_cast<int>(shares.size()) < k) return std::nullopt;
  std::set<std::uint32_t> seen;
  for (const auto& s : shares)
    if (!seen.insert(s.index).second)
      throw std::invalid_argument("reconstruct: duplicate share index");

  const std::uint64_t p = shares.front().value.modulus;
  Fp acc = Fp::zero(p);
  for (std::size_t j = 0; j < shares.size(); ++j) {
    Fp num{1 % p, p};
    Fp den{1 % p, p};
    const Fp xj(shares[j].index, p);
    for (std::size_t l = 0; l < shares.size(); ++l) {
      if (l == j) continue;
      const Fp xl(shares[l].index, p);
      num = num * xl;
      den = den * (xl - xj);
    }
    acc = acc + shares[j].value * num * fp_inv(den);
  }
  return acc;
}

// -- byte-blob sharing --------------------------------------------------
//
// Longer secrets are split into 7-byte limbs (56 bits < 61), each limb shared
// independently. Used by the ordered-MPC share phase to carry (pi, y).

inline std::vector<Fp> bytes_to_limbs(const std::vector<std::uint8_t>& data,
                                      std::uint64_t p = kMersenne61) {
  std::vector<Fp> limbs;
  // Leading limb records the byte length so reassembly is exact.
  limbs.emplace_back(static_cast<std::uint64_t>(data.size()), p);
  for (std::size_t off = 0; off < data.size(); off += 7) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < 7 && off + i < data.size(); ++i)
      v |= static_cast<std::uint64_t>(data[off + i]) << (8 * i);
    limbs.emplace_back(v, p);
  }
  return limbs;
}

inline std::vector<std::uint8_t> limbs_to_bytes(const std::vector<Fp>& limbs) {
  if (limbs.empty()) throw std::invalid_argument("limbs_to_bytes: empty");
  const std::uint64_t len = limbs.front().value;
  std::vector<std::uint8_t> data;
  data.reserve(len);
  for (std::size_t li = 1; li < limbs.size() && data.size() < len; ++li) {
    std::uint64_t v = limbs[li].value;
    for (int i = 0; i < 7 && data.size() < len; ++i) {
      data.push_back(static_cast<std::uint8_t>(v & 0xff));
      v >>= 8;
    }
  }
  if (data.size() != len) throw std::invalid_argument("limbs_to_bytes: truncated");
  return data;
}

/// A party's share of a byte blob: one field share per limb, common index.
struct BlobShare {
  std::uint32_t index = 0;
  std::vector<Fp> values;
};

inline std::vector<BlobShare> share_blob(const std::vector<std::uint8_t>& data, int k,
                                         int n, std::mt19937_64& rng,
                                         std::uint64_t p = kMersenne61) {
  const auto limbs = bytes_to_limbs(data, p);
  std::vector<BlobShare> out(n);
  for (int i = 0; i < n; ++i) out[i].index = static_cast<std::uint32_t>(i + 1);
  for (const auto& limb : limbs) {
    const auto shares = share_secret(limb, k, n, rng);
    for (int i = 0; i < n; ++i) out[i].values.push_back(shares[i].value);
  }
  return out;
}

inline std::optional<std::vector<std::uint8_t>> reconstruct_blob(
    const std::vector<BlobShare>& shares, int k) {
  if (static_cast<int>(shares.size()) < k) return std::nullopt;
  const std::size_t limbs = shares.front().values.size();
  std::vector<Fp> secret_limbs;
  secret_limbs.reserve(limbs);
  for (std::size_t li = 0; li < limbs; ++li) {
    std::vector<Share> column;
    column.reserve(shares.size());
    for (const auto& bs : shares) {
      if (bs.values.size() != limbs)
        throw std::invalid_argument("reconstruct_blob: ragged shares");
      column.push_back(Share{bs.index, bs.values[li]});
    }
    auto limb = reconstruct_secret(column, k);
    if (!limb) return std::nullopt;
    secret_limbs.push_back(*limb);
  }
  return limbs_to_bytes(secret_limbs);
}

}  // namespace collab
