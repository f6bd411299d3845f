// Copyright 2026 The collab developers. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace collab {

/// Exact non-negative rational, used for party speeds and sub-tick solving
/// instants. Kept tiny on purpose: the simulator never needs arbitrary
/// precision, only exact comparisons.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num(n), den(1) {}
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num * b.num, a.den * b.den);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw std::invalid_argument("rational: division by zero");
    return Rational(a.num * b.den, a.den * b.num);
  }
  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num * b.den < b.num * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return a.num * b.den <= b.num * a.den;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }
};

/// floor(r * ticks); how many whole work steps a party at speed r has
/// completed after `ticks` simulator ticks.
inline std::int64_t steps_completed(const Rational& speed, std::int64_t ticks) {
  return (speed.num * ticks) / speed.den;
}

/// Smallest tick count at which `steps` whole steps are done: ceil(steps/r).
inline std::int64_t ticks_to_complete(const Rational& speed, std::int64_t steps) {
  if (speed.num <= 0) throw std::invalid_argument("rational: speed must be positive");
  return (steps * speed.den + speed.num - 1) / speed.num;
}

/// Parses "2", "1.5" or "3/2".
inline Rational parse_rational(const std::string& text) {
  if (auto slash = text.find('/'); slash != std::string::npos) {
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  }
  if (auto dot = text.find('.'); dot != std::string::npos) {
    const std::string frac = text.substr(dot + 1);
    if (frac.size() > 9) throw std::invalid_argument("rational: too many decimals: " + text);
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const std::int64_t whole = dot == 0 ? 0 : std::stoll(text.substr(0, dot));
    return Rational(whole * den + (frac.empty() ? 0 : std::stoll(frac)), den);
  }
  return Rational(std::stoll(text));
}

}  // namespace collab
