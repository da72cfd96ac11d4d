#pragma once

#include <algorithm>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include "limprob/ext_real.hpp"

namespace limprob {

struct Interval {
  ExtReal lo;
  bool lo_closed = false;
  ExtReal hi;
  bool hi_closed = false;

  bool empty() const {
    if (lo < hi) return false;
    return !(lo == hi && lo_closed && hi_closed);
  }

  bool degenerate() const { return lo == hi && lo_closed && hi_closed; }

  bool contains(const ExtReal& x) const {
    const bool above = lo_closed ? lo <= x : lo < x;
    const bool below = hi_closed ? x <= hi : x < hi;
    return above && below;
  }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Which copy of the line a complement is taken in.
enum class Ambient { reals, extended_reals };

/// Finite union of intervals with ExtReal endpoints plus a finite point set,
/// always held in normal form: intervals sorted, disjoint and non-adjacent,
/// isolated points kept separately and never inside an interval.
class MeasurableSet {
 public:
  MeasurableSet() = default;

  static MeasurableSet empty_set() { return {}; }

  static MeasurableSet from_parts(std::vector<Interval> intervals, std::vector<ExtReal> points) {
    for (auto& p : points) intervals.push_back(Interval{p, true, p, true});
    return MeasurableSet(normalize(std::move(intervals)));
  }

  static MeasurableSet interval(ExtReal lo, bool lo_closed, ExtReal hi, bool hi_closed) {
    return from_parts({Interval{std::move(lo), lo_closed, std::move(hi), hi_closed}}, {});
  }

  static MeasurableSet points(std::vector<ExtReal> pts) { return from_parts({}, std::move(pts)); }
  static MeasurableSet point(ExtReal p) { return points({std::move(p)}); }

  /// (-inf, +inf)
  static MeasurableSet reals() { return interval(ExtReal::neg_inf(), false, ExtReal::pos_inf(), false); }
  /// [-inf, +inf]
  static MeasurableSet extended_reals() {
    return interval(ExtReal::neg_inf(), true, ExtReal::pos_inf(), true);
  }
  static MeasurableSet ambient(Ambient a) { return a == Ambient::reals ? reals() : extended_reals(); }

  /// I(x) = (-inf, x] as a subset of R.
  static MeasurableSet lower_ray(const ExtReal& x) {
    if (x.is_pos_inf()) return reals();
    return interval(ExtReal::neg_inf(), false, x, true);
  }

  /// Intervals of positive length (points excluded).
  std::vector<Interval> intervals() const {
    std::vector<Interval> out;
    for (const auto& iv : pieces_)
      if (!iv.degenerate()) out.push_back(iv);
    return out;
  }

  std::vector<ExtReal> isolated_points() const {
    std::vector<ExtReal> out;
    for (const auto& iv : pieces_)
      if (iv.degenerate()) out.push_back(iv.lo);
    return out;
  }

  /// All pieces in order, points as degenerate closed intervals.
  const std::vector<Interval>& pieces() const& noexcept { return pieces_; }
  std::vector<Interval> pieces() && { return std::move(pieces_); }

  bool is_empty() const noexcept { return pieces_.empty(); }

  bool contains(const ExtReal& x) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](const ExtReal& v, const Interval& iv) { return v < iv.lo; });
    if (it == pieces_.begin()) return false;
    return std::prev(it)->contains(x);
  }

  MeasurableSet unite(const MeasurableSet& other) const {
    std::vector<Interval> all = pieces_;
    all.insert(all.end(), other.pieces_.begin(), other.pieces_.end());
    return MeasurableSet(normalize(std::move(all)));
  }

  MeasurableSet intersect(const MeasurableSet& other) const {
    std::vector<Interval> out;
    for (const auto& a : pieces_)
      for (const auto& b : other.pieces_) {
        Interval c = intersect_pieces(a, b);
        if (!c.empty()) out.push_back(std::move(c));
      }
    return MeasurableSet(normalize(std::move(out)));
  }

  /// ambient \ *this. Callers name the ambient: R and R̄ give different answers
  /// whenever the set touches an infinite endpoint.
  MeasurableSet complement(Ambient amb) const {
    std::vector<Interval> gaps;
    ExtReal cursor = ExtReal::neg_inf();
    bool cursor_closed = true;
    for (const auto& iv : pieces_) {
      Interval g{cursor, cursor_closed, iv.lo, !iv.lo_closed};
      if (!g.empty()) gaps.push_back(std::move(g));
      cursor = iv.hi;
      cursor_closed = !iv.hi_closed;
    }
    Interval tail{cursor, cursor_closed, ExtReal::pos_inf(), true};
    if (!tail.empty()) gaps.push_back(std::move(tail));
    return MeasurableSet(normalize(std::move(gaps))).intersect(ambient(amb));
  }

  MeasurableSet minus(const MeasurableSet& other) const {
    return intersect(other.complement(Ambient::extended_reals));
  }

  bool subset_of(const MeasurableSet& other) const { return minus(other).is_empty(); }

  bool disjoint_from(const MeasurableSet& other) const { return intersect(other).is_empty(); }

  friend bool operator==(const MeasurableSet&, const MeasurableSet&) = default;

 private:
  explicit MeasurableSet(std::vector<Interval> normalized) : pieces_(std::move(normalized)) {}

  static Interval intersect_pieces(const Interval& a, const Interval& b) {
    Interval c;
    if (a.lo < b.lo) {
      c.lo = b.lo, c.lo_closed = b.lo_closed;
    } else if (b.lo < a.lo) {
      c.lo = a.lo, c.lo_closed = a.lo_closed;
    } else {
      c.lo = a.lo, c.lo_closed = a.lo_closed && b.lo_closed;
    }
    if (a.hi < b.hi) {
      c.hi = a.hi, c.hi_closed = a.hi_closed;
    } else if (b.hi < a.hi) {
      c.hi = b.hi, c.hi_closed = b.hi_closed;
    } else {
      c.hi = a.hi, c.hi_closed = a.hi_closed && b.hi_closed;
    }
    return c;
  }

  static std::vector<Interval> normalize(std::vector<Interval> in) {
    std::erase_if(in, [](const Interval& iv) { return iv.empty(); });
    // Closed lower endpoints sort first so merging sees the widest start.
    std::sort(in.begin(), in.end(), [](const Interval& a, const Interval& b) {
      if (a.lo != b.lo) return a.lo < b.lo;
      return a.lo_closed && !b.lo_closed;
    });
    std::vector<Interval> out;
    for (auto& iv : in) {
      if (!out.empty()) {
        Interval& cur = out.back();
        const bool touches = iv.lo < cur.hi || (iv.lo == cur.hi && (cur.hi_closed || iv.lo_closed));
        if (touches) {
          if (cur.hi < iv.hi) {
            cur.hi = iv.hi;
            cur.hi_closed = iv.hi_closed;
          } else if (cur.hi == iv.hi) {
            cur.hi_closed = cur.hi_closed || iv.hi_closed;
          }
          continue;
        }
      }
      out.push_back(std::move(iv));
    }
    return out;
  }

  std::vector<Interval> pieces_;
};

inline std::string format_interval(const Interval& iv) {
  if (iv.degenerate()) return "{" + format_ext_real_short(iv.lo) + "}";
  return std::string(iv.lo_closed ? "[" : "(") + format_ext_real_short(iv.lo) + ", " +
         format_ext_real_short(iv.hi) + (iv.hi_closed ? "]" : ")");
}

inline std::string format_set(const MeasurableSet& s) {
  if (s.is_empty()) return "{}";
  std::string out;
  for (const auto& iv : s.pieces()) {
    if (!out.empty()) out += " u ";
    out += format_interval(iv);
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const MeasurableSet& s) { return os << format_set(s); }

}  // namespace limprob
