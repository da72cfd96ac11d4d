#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "limprob/error.hpp"

namespace limprob {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// 2^-k as an exact rational.
inline Rational pow2_neg(unsigned k) {
  BigInt den = 1;
  den <<= k;
  return Rational(BigInt(1), den);
}

inline Rational pow2(unsigned k) {
  BigInt num = 1;
  num <<= k;
  return Rational(num);
}

/// Canonical "num/den" form; integers keep the "/1" denominator.
inline std::string format_rational(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

/// Short form used by human-readable tables: integers print without "/1".
inline std::string format_rational_short(const Rational& r) {
  if (boost::multiprecision::denominator(r) == 1) return boost::multiprecision::numerator(r).str();
  return format_rational(r);
}

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

inline BigInt parse_bigint(std::string_view s, std::string_view whole) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s))
    throw Error(ErrorCode::domain_error, "not a rational: '" + std::string(whole) + "'");
  BigInt v{std::string(s)};
  return neg ? BigInt(-v) : v;
}

}  // namespace detail

/// Accepts "a/b", "a" and terminating decimals such as "-0.25".
inline Rational parse_rational(std::string_view s) {
  const std::string_view whole = s;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = detail::parse_bigint(s.substr(0, slash), whole);
    BigInt den = detail::parse_bigint(s.substr(slash + 1), whole);
    if (den == 0) throw Error(ErrorCode::domain_error, "zero denominator in '" + std::string(whole) + "'");
    return Rational(num, den);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    bool neg = !int_part.empty() && int_part.front() == '-';
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) int_part.remove_prefix(1);
    if ((!int_part.empty() && !detail::all_digits(int_part)) || !detail::all_digits(frac))
      throw Error(ErrorCode::domain_error, "not a rational: '" + std::string(whole) + "'");
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt num = (int_part.empty() ? BigInt(0) : BigInt(std::string(int_part))) * scale + BigInt(std::string(frac));
    Rational r(num, scale);
    return neg ? Rational(-r) : r;
  }
  return Rational(detail::parse_bigint(s, whole));
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace limprob
