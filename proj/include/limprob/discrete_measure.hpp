#pragma once

#include <concepts>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "limprob/ext_real.hpp"
#include "limprob/measurable_set.hpp"

namespace limprob {

/// Finite atom map Point -> positive rational mass with total <= 1.
///
/// Instances are immutable; every constructor drops zero masses, merges
/// duplicate points and rejects negative masses or totals above one.
template <typename Point, typename Compare = std::less<Point>>
class BasicDiscreteMeasure {
 public:
  using point_type = Point;
  using atom_map = std::map<Point, Rational, Compare>;

  BasicDiscreteMeasure() = default;

  static BasicDiscreteMeasure from_mass_pairs(const std::vector<std::pair<Point, Rational>>& pairs) {
    atom_map atoms;
    for (const auto& [point, mass] : pairs) {
      if (mass < 0)
        throw Error(ErrorCode::negative_mass, "mass " + format_rational(mass) + " is negative");
      if (mass == 0) continue;
      atoms[point] += mass;
    }
    return BasicDiscreteMeasure(std::move(atoms));
  }

  static BasicDiscreteMeasure dirac(Point p) {
    atom_map atoms;
    atoms.emplace(std::move(p), Rational(1));
    return BasicDiscreteMeasure(std::move(atoms));
  }

  const atom_map& atoms() const& noexcept { return atoms_; }
  atom_map atoms() && { return std::move(atoms_); }
  const Rational& total() const noexcept { return total_; }
  bool is_probability() const { return total_ == 1; }
  bool is_subprobability() const { return total_ < 1; }
  bool empty() const noexcept { return atoms_.empty(); }

  /// Mass of the singleton {p}.
  Rational mass_at(const Point& p) const {
    auto it = atoms_.find(p);
    return it == atoms_.end() ? Rational(0) : it->second;
  }

  template <typename F>
  auto pushforward(F&& f) const {
    using Target = std::decay_t<std::invoke_result_t<F&, const Point&>>;
    std::vector<std::pair<Target, Rational>> pairs;
    pairs.reserve(atoms_.size());
    for (const auto& [point, mass] : atoms_) pairs.emplace_back(f(point), mass);
    return BasicDiscreteMeasure<Target>::from_mass_pairs(pairs);
  }

  friend bool operator==(const BasicDiscreteMeasure& a, const BasicDiscreteMeasure& b) {
    return a.atoms_ == b.atoms_;
  }

 private:
  template <typename, typename>
  friend class BasicDiscreteMeasure;

  explicit BasicDiscreteMeasure(atom_map atoms) : atoms_(std::move(atoms)) {
    for (const auto& [point, mass] : atoms_) total_ += mass;
    if (total_ > 1)
      throw Error(ErrorCode::total_exceeds_one, "total mass " + format_rational(total_) + " exceeds 1");
  }

  atom_map atoms_;
  Rational total_ = 0;
};

using DiscreteMeasure = BasicDiscreteMeasure<ExtReal>;

inline DiscreteMeasure dirac(ExtReal point) { return DiscreteMeasure::dirac(std::move(point)); }

inline DiscreteMeasure from_mass_pairs(const std::vector<std::pair<ExtReal, Rational>>& pairs) {
  return DiscreteMeasure::from_mass_pairs(pairs);
}

inline Rational mass_of_set(const DiscreteMeasure& m, const MeasurableSet& s) {
  Rational sum = 0;
  for (const auto& [point, mass] : m.atoms())
    if (s.contains(point)) sum += mass;
  return sum;
}

/// Mass of [-inf, x].
inline Rational cdf(const DiscreteMeasure& m, const ExtReal& x) {
  Rational sum = 0;
  for (const auto& [point, mass] : m.atoms()) {
    if (x < point) break;
    sum += mass;
  }
  return sum;
}

inline DiscreteMeasure restrict_to_reals(const DiscreteMeasure& m) {
  std::vector<std::pair<ExtReal, Rational>> kept;
  for (const auto& [point, mass] : m.atoms())
    if (point.is_finite()) kept.emplace_back(point, mass);
  return from_mass_pairs(kept);
}

template <typename F>
auto pushforward(const DiscreteMeasure& m, F&& f) {
  return m.pushforward(std::forward<F>(f));
}

struct AdditivityReport {
  Rational mass_a;
  Rational mass_b;
  Rational mass_union;
  Rational sum;
  bool disjoint = false;  // A ∩ B carries no atom of the measure
  bool eligible = false;  // sum is the probability of an event (namely A ∪ B)
};

/// Whether mass(A) + mass(B) is itself an event probability. Disjointness is
/// judged on the measure's atoms: sets overlapping only off the support still
/// add correctly.
inline AdditivityReport check_additivity(const DiscreteMeasure& m, const MeasurableSet& a,
                                         const MeasurableSet& b) {
  AdditivityReport r;
  r.mass_a = mass_of_set(m, a);
  r.mass_b = mass_of_set(m, b);
  r.mass_union = mass_of_set(m, a.unite(b));
  r.sum = r.mass_a + r.mass_b;
  r.disjoint = true;
  for (const auto& [point, mass] : m.atoms())
    if (a.contains(point) && b.contains(point)) r.disjoint = false;
  r.eligible = r.disjoint && r.sum == r.mass_union;
  return r;
}

}  // namespace limprob
