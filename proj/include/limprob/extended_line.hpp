#pragma once

#include <cmath>
#include <compare>
#include <cstdio>
#include <numbers>
#include <string>

#include "limprob/discrete_measure.hpp"

namespace limprob {

/// A point of [0, 1]. `exact` marks values carrying no rounding error:
/// the endpoints and the image 1/2 of the origin.
struct UnitReal {
  long double value = 0.0L;
  bool exact = false;

  friend bool operator==(const UnitReal&, const UnitReal&) = default;
  friend bool operator<(const UnitReal& a, const UnitReal& b) {
    return a.value < b.value || (a.value == b.value && a.exact < b.exact);
  }
};

/// 17 significant digits.
inline std::string format_unit_real(const UnitReal& u) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17Lg", u.value);
  return buf;
}

namespace detail {
inline constexpr long double pi_l = std::numbers::pi_v<long double>;

inline long double arctan_ext(const ExtReal& x) {
  if (x.is_pos_inf()) return pi_l / 2;
  if (x.is_neg_inf()) return -pi_l / 2;
  return std::atan(x.value().convert_to<long double>());
}
}  // namespace detail

/// The homeomorphism R̄ -> [0,1], x -> 1 - arccot(x)/pi.
///
/// arccot(x) = pi/2 - arctan(x), so the finite branch reduces to
/// 1/2 + arctan(x)/pi, which has no branch cut at the origin.
inline UnitReal h(const ExtReal& x) {
  if (x.is_neg_inf()) return {0.0L, true};
  if (x.is_pos_inf()) return {1.0L, true};
  if (x.value() == 0) return {0.5L, true};
  long double y = 0.5L + detail::arctan_ext(x) / detail::pi_l;
  // Keep finite images strictly inside (0, 1) even when the long double rounds.
  if (y <= 0.0L) y = std::nextafter(0.0L, 1.0L);
  if (y >= 1.0L) y = std::nextafter(1.0L, 0.0L);
  return {y, false};
}

/// Inverse of h: cot(pi (1 - y)) = tan(pi (y - 1/2)) on (0, 1).
inline ExtReal h_inv(const UnitReal& y) {
  if (!(y.value >= 0.0L && y.value <= 1.0L))
    throw Error(ErrorCode::domain_error, "h_inv argument " + format_unit_real(y) + " outside [0,1]");
  if (y.value == 0.0L) return ExtReal::neg_inf();
  if (y.value == 1.0L) return ExtReal::pos_inf();
  if (y.value == 0.5L) return ExtReal(0);
  const long double t = std::tan(detail::pi_l * (y.value - 0.5L));
  // Every finite binary float is an exact rational.
  return ExtReal(Rational(static_cast<double>(t)) +
                 Rational(static_cast<double>(t - static_cast<long double>(static_cast<double>(t)))));
}

/// d(x, y) = |arctan x - arctan y| with arctan(±inf) = ±pi/2.
inline long double metric_d(const ExtReal& x, const ExtReal& y) {
  if (x == y) return 0.0L;
  return std::fabs(detail::arctan_ext(x) - detail::arctan_ext(y));
}

/// Support point of a compactified measure. Ordered and compared by the
/// originating ExtReal so rounding in `image` can never merge two atoms.
struct UnitPoint {
  UnitReal image;
  ExtReal preimage;

  friend bool operator==(const UnitPoint& a, const UnitPoint& b) { return a.preimage == b.preimage; }
  friend std::strong_ordering operator<=>(const UnitPoint& a, const UnitPoint& b) {
    return a.preimage <=> b.preimage;
  }
};

using UnitMeasure = BasicDiscreteMeasure<UnitPoint>;

inline UnitMeasure compactify_measure(const DiscreteMeasure& m) {
  return m.pushforward([](const ExtReal& x) { return UnitPoint{h(x), x}; });
}

/// Mass sitting exactly at the image point 1 (preimage +inf).
inline Rational mass_at_one(const UnitMeasure& m) {
  return m.mass_at(UnitPoint{UnitReal{1.0L, true}, ExtReal::pos_inf()});
}

}  // namespace limprob
