#pragma once

#include <bit>
#include <cstdint>
#include <string>

#include "limprob/rational.hpp"

namespace limprob {

/// Largest horizon the exhaustive enumeration accepts.
inline constexpr int max_enumeration_n = 24;

/// A length-n coin-flip sequence. Bit i-1 of `bits` holds X_i.
struct Outcome {
  std::uint32_t bits = 0;
  int n = 0;

  /// X_i for 1 <= i <= n.
  int x(int i) const { return static_cast<int>((bits >> (i - 1)) & 1U); }
  int ones() const { return std::popcount(bits); }

  /// "X_1 X_2 ... X_n" without separators.
  std::string str() const {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int i = 1; i <= n; ++i)
      if (x(i)) s[static_cast<std::size_t>(i - 1)] = '1';
    return s;
  }

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// p^ones (1-p)^zeros.
inline Rational outcome_probability(const Outcome& o, const Rational& p) {
  Rational q = 1 - p;
  Rational r = 1;
  for (int i = 1; i <= o.n; ++i) r *= o.x(i) ? p : q;
  return r;
}

/// Outcome together with the running maximum and its last attaining index.
struct ProcessRow {
  Outcome outcome;
  Rational prob;
  int y = 0;  // max of X_1..X_n
  int z = 0;  // largest i <= n with X_i == y

  int n() const { return outcome.n; }

  friend bool operator==(const ProcessRow&, const ProcessRow&) = default;
};

/// Y_n and Z_n of an outcome. All-zero sequences have y = 0 and z = n.
inline std::pair<int, int> running_max_and_argmax(const Outcome& o) {
  const std::uint32_t mask = o.n >= 32 ? ~0U : ((1U << o.n) - 1U);
  const std::uint32_t b = o.bits & mask;
  if (b == 0) return {0, o.n};
  return {1, std::bit_width(b)};
}

inline ProcessRow make_row(const Outcome& o, Rational prob) {
  auto [y, z] = running_max_and_argmax(o);
  return ProcessRow{o, std::move(prob), y, z};
}

}  // namespace limprob
