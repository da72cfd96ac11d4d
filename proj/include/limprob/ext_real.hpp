#pragma once

#include <compare>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "limprob/rational.hpp"

namespace limprob {

/// A point of the extended real line: -inf, a finite rational, or +inf.
class ExtReal {
 public:
  enum class Tag { neg_inf, finite, pos_inf };

  ExtReal() : tag_(Tag::finite) {}
  ExtReal(Rational v) : tag_(Tag::finite), value_(std::move(v)) {}  // NOLINT: implicit by intent
  ExtReal(long long v) : tag_(Tag::finite), value_(v) {}             // NOLINT
  ExtReal(int v) : tag_(Tag::finite), value_(v) {}                   // NOLINT

  static ExtReal neg_inf() { return ExtReal(Tag::neg_inf); }
  static ExtReal pos_inf() { return ExtReal(Tag::pos_inf); }

  Tag tag() const noexcept { return tag_; }
  bool is_finite() const noexcept { return tag_ == Tag::finite; }
  bool is_pos_inf() const noexcept { return tag_ == Tag::pos_inf; }
  bool is_neg_inf() const noexcept { return tag_ == Tag::neg_inf; }

  /// Only meaningful when is_finite().
  const Rational& value() const noexcept { return value_; }

  double to_double() const {
    switch (tag_) {
      case Tag::neg_inf: return -std::numeric_limits<double>::infinity();
      case Tag::pos_inf: return std::numeric_limits<double>::infinity();
      case Tag::finite: break;
    }
    return value_.convert_to<double>();
  }

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.tag_ != b.tag_) return false;
    return a.tag_ != Tag::finite || a.value_ == b.value_;
  }

  friend std::strong_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
    if (a.tag_ != b.tag_) return static_cast<int>(a.tag_) <=> static_cast<int>(b.tag_);
    if (a.tag_ != Tag::finite) return std::strong_ordering::equal;
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  explicit ExtReal(Tag t) : tag_(t) {}

  Tag tag_;
  Rational value_;
};

/// "-inf" | "num/den" | "+inf".
inline std::string format_ext_real(const ExtReal& x) {
  switch (x.tag()) {
    case ExtReal::Tag::neg_inf: return "-inf";
    case ExtReal::Tag::pos_inf: return "+inf";
    case ExtReal::Tag::finite: break;
  }
  return format_rational(x.value());
}

inline std::string format_ext_real_short(const ExtReal& x) {
  if (!x.is_finite()) return format_ext_real(x);
  return format_rational_short(x.value());
}

inline ExtReal parse_ext_real(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s == "-inf" || s == "-oo") return ExtReal::neg_inf();
  if (s == "+inf" || s == "inf" || s == "+oo" || s == "oo") return ExtReal::pos_inf();
  return ExtReal(parse_rational(s));
}

inline std::ostream& operator<<(std::ostream& os, const ExtReal& x) { return os << format_ext_real(x); }

}  // namespace limprob
