// Copyright 2026 The collab developers. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <stdexcept>

namespace collab {

/// Default production modulus: the Mersenne prime 2^61 - 1. Products fit a
/// 128-bit intermediate, so multiply-reduce needs no special casing.
inline constexpr std::uint64_t kMersenne61 = (1ULL << 61) - 1;

/// One element of Z_p for a runtime prime p. Small primes (7, 101) are used
/// by exhaustive tests, kMersenne61 everywhere else.
struct Fp {
  std::uint64_t value = 0;
  std::uint64_t modulus = kMersenne61;

  Fp() = default;
  Fp(std::uint64_t v, std::uint64_t p) : value(v % p), modulus(p) {}

  static Fp zero(std::uint64_t p) { return Fp(0, p); }

  friend bool operator==(const Fp& a, const Fp& b) {
    return a.value == b.value && a.modulus == b.modulus;
  }
};

namespace detail {
inline void check_same_field(const Fp& a, const Fp& b) {
  if (a.modulus != b.modulus) throw std::invalid_argument("field: mixed moduli");
}
}  // namespace detail

inline Fp operator+(const Fp& a, const Fp& b) {
  detail::check_same_field(a, b);
  std::uint64_t s = a.value + b.value;  // both < 2^61, no overflow
  if (s >= a.modulus) s -= a.modulus;
  return Fp{s, a.modulus};
}

inline Fp operator-(const Fp& a, const Fp& b) {
  detail::check_same_field(a, b);
  return Fp{a.value >= b.value ? a.value - b.value : a.modulus - (b.value - a.value),
            a.modulus};
}

inline Fp operator*(const Fp& a, const Fp& b) {
  detail::check_same_field(a, b);
  const auto prod = static_cast<unsigned __int128>(a.value) * b.value;
  return Fp{static_cast<std::uint64_t>(prod % a.modulus), a.modulus};
}

inline Fp fp_pow(Fp base, std::uint64_t e) {
  Fp acc{1 % base.modulus, base.modulus};
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

/// Multiplicative inverse by Fermat; modulus must be prime.
inline Fp fp_inv(const Fp& a) {
  if (a.value == 0) throw std::domain_error("field: inverse of zero");
  return fp_pow(a, a.modulus - 2);
}

}  // namespace collab
