#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "limprob/discrete_measure.hpp"
#include "limprob/extended_line.hpp"
#include "limprob/family.hpp"

namespace limprob {

/// Length of the trailing window used to read limits off finite sequences.
inline constexpr int limit_window = 8;

/// Exact limit of a sequence whose tail is constant or a geometric series.
///
/// With successive differences d_i, a constant tail has every d_i = 0; a
/// geometric tail has d_{i+1} = r d_i with a fixed 0 < |r| < 1, and then the
/// limit is v_last + d_last r / (1 - r). Anything else yields nullopt.
inline std::optional<Rational> extrapolate_limit(const std::vector<Rational>& values) {
  if (values.empty()) return std::nullopt;
  std::vector<Rational> d;
  for (std::size_t i = 1; i < values.size(); ++i) d.push_back(values[i] - values[i - 1]);
  if (std::all_of(d.begin(), d.end(), [](const Rational& x) { return x == 0; })) return values.back();
  if (d.size() < 2) return std::nullopt;
  if (std::any_of(d.begin(), d.end(), [](const Rational& x) { return x == 0; })) return std::nullopt;
  const Rational r = d[1] / d[0];
  for (std::size_t i = 2; i < d.size(); ++i)
    if (d[i] / d[i - 1] != r) return std::nullopt;
  if (r >= 1 || r <= -1) return std::nullopt;
  return values.back() + d.back() * r / (1 - r);
}

inline std::vector<Rational> trailing(const std::vector<Rational>& v, std::size_t len) {
  if (v.size() <= len) return v;
  return {v.end() - static_cast<std::ptrdiff_t>(len), v.end()};
}

// ---------------------------------------------------------------------------
// Tightness

enum class Tightness { tight, not_tight, inconclusive };

inline std::string_view to_string(Tightness t) {
  switch (t) {
    case Tightness::tight: return "tight";
    case Tightness::not_tight: return "not_tight";
    case Tightness::inconclusive: return "inconclusive";
  }
  return "?";
}

struct TightnessVerdict {
  Tightness tight = Tightness::inconclusive;
  Rational epsilon;                     // the epsilon the verdict is stated for
  std::optional<Interval> interval;     // I_eps for tight verdicts
  std::vector<std::pair<int, Rational>> witness_atoms;  // (n, rho_n({n})) for non-tight verdicts
  Rational witness_bound;               // every witness atom strictly exceeds (or reaches) this
  std::string witness;
  int horizon_used = 0;
};

namespace detail {

inline void check_epsilon(const Rational& eps) {
  if (eps <= 0 || eps >= 1)
    throw Error(ErrorCode::bad_epsilon, "epsilon = " + format_rational(eps) + " must lie in (0, 1)");
}

/// Smallest closed interval holding all finite support points.
inline std::optional<Interval> finite_hull(const DiscreteMeasure& m) {
  std::optional<Interval> hull;
  for (const auto& [p, mass] : m.atoms()) {
    if (!p.is_finite()) continue;
    if (!hull) hull = Interval{p, true, p, true};
    hull->lo = std::min(hull->lo, p);
    hull->hi = std::max(hull->hi, p);
  }
  return hull;
}

}  // namespace detail

/// Tightness of a family on R: does one bounded interval keep all but epsilon
/// of every member's mass?
///
/// Built-ins carry closed-form witnesses that are re-checked on every member
/// up to the horizon. Explicit tables are scanned: the finite-support hull of
/// members 1..k must already hold more than 1 - epsilon of each member and
/// must stop growing over the trailing window; otherwise the verdict is
/// inconclusive.
inline TightnessVerdict tightness_probe(const MeasureFamily& fam, const Rational& epsilon, int horizon) {
  detail::check_epsilon(epsilon);
  if (horizon < 2) throw Error(ErrorCode::domain_error, "horizon must be at least 2");
  TightnessVerdict v;
  v.horizon_used = fam.clamp_horizon(horizon);
  switch (fam.kind()) {
    case MeasureFamily::Kind::lambda: {
      const auto unit = MeasurableSet::interval(ExtReal(0), true, ExtReal(1), true);
      for (int n = 1; n <= v.horizon_used; ++n)
        if (mass_of_set(fam.member(n), unit.complement(Ambient::reals)) >= epsilon)
          throw Error(ErrorCode::evaluation_error, "lambda member escapes [0,1]");
      v.tight = Tightness::tight;
      v.epsilon = epsilon;
      v.interval = unit.pieces().front();
      v.witness = "every member is supported on [0, 1], so rho_n([0,1]^c) = 0 < epsilon";
      return v;
    }
    case MeasureFamily::Kind::mu: {
      const Rational half(1, 2);
      for (int n = 1; n <= v.horizon_used; ++n) {
        Rational at_n = fam.member(n).mass_at(ExtReal(n));
        if (!(at_n > half)) throw Error(ErrorCode::evaluation_error, "mu_n({n}) not above 1/2");
        v.witness_atoms.emplace_back(n, std::move(at_n));
      }
      v.tight = Tightness::not_tight;
      v.epsilon = half;
      v.witness_bound = half;
      v.witness = "mu_n({n}) = 1/2 + 2^-n > 1/2 for every n; any bounded interval misses the atom at n "
                  "once n exceeds its upper end, so sup_n mu_n(I^c) > 1/2";
      return v;
    }
    case MeasureFamily::Kind::dirac_n: {
      for (int n = 1; n <= v.horizon_used; ++n) v.witness_atoms.emplace_back(n, fam.member(n).mass_at(ExtReal(n)));
      v.tight = Tightness::not_tight;
      v.epsilon = epsilon;
      v.witness_bound = 1;
      v.witness = "all mass sits at n; any bounded interval misses it once n exceeds its upper end, so "
                  "sup_n rho_n(I^c) = 1 >= epsilon";
      return v;
    }
    case MeasureFamily::Kind::table: break;
  }

  const auto members = fam.members(v.horizon_used);
  v.epsilon = epsilon;
  std::optional<Interval> hull;
  int last_growth = 0;
  for (int n = 1; n <= v.horizon_used; ++n) {
    const auto h = detail::finite_hull(members[static_cast<std::size_t>(n - 1)]);
    if (!h) continue;
    if (!hull) {
      hull = *h;
      last_growth = n;
    } else if (h->lo < hull->lo || hull->hi < h->hi) {
      hull->lo = std::min(hull->lo, h->lo);
      hull->hi = std::max(hull->hi, h->hi);
      last_growth = n;
    }
  }
  const int window = std::min(limit_window, v.horizon_used - 1);
  bool covers = hull.has_value();
  if (hull) {
    const MeasurableSet hs = MeasurableSet::interval(hull->lo, true, hull->hi, true);
    for (const auto& m : members)
      if (!(mass_of_set(m, hs) > 1 - epsilon)) covers = false;
  }
  if (covers && last_growth <= v.horizon_used - window) {
    v.tight = Tightness::tight;
    v.interval = hull;
    v.witness = "support hull " + format_interval(*hull) + " unchanged over the last " + std::to_string(window) +
                " members and holds more than 1 - epsilon of each";
  } else {
    v.tight = Tightness::inconclusive;
    v.witness = covers ? "support hull still growing at member " + std::to_string(last_growth)
                       : "no bounded interval holds more than 1 - epsilon of every member";
  }
  return v;
}

// ---------------------------------------------------------------------------
// Weak limits

struct WeakLimitEvidence {
  DiscreteMeasure limit;
  std::vector<ExtReal> grid;               // CDF evaluation points fixed before the window
  std::vector<Rational> finite_mass_trend; // rho_n(R) across the window
  int horizon_used = 0;
};

/// Identifies the weak limit of a table by pointwise CDF limits.
///
/// The grid is the finite support of the members preceding the trailing
/// window, so each grid point has been seen for the whole window. Each CDF
/// value's limit is read with extrapolate_limit; the limit measure gets the
/// jumps of the limiting CDF on the grid, and mass not accounted for on the
/// grid is placed at +inf.
inline WeakLimitEvidence identify_weak_limit_from_cdfs(const std::vector<DiscreteMeasure>& members) {
  const int count = static_cast<int>(members.size());
  if (count < limit_window + 1)
    throw Error(ErrorCode::inconclusive, "need at least " + std::to_string(limit_window + 1) +
                                             " members to read CDF limits, got " + std::to_string(count));
  WeakLimitEvidence ev;
  ev.horizon_used = count;
  const int first_window = count - limit_window;  // 0-based index of the first window member
  std::vector<ExtReal> grid{ExtReal::neg_inf()};
  for (int i = 0; i < first_window; ++i)
    for (const auto& [p, mass] : members[static_cast<std::size_t>(i)].atoms())
      if (p.is_finite()) grid.push_back(p);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<std::pair<ExtReal, Rational>> atoms;
  Rational previous = 0;
  for (const auto& x : grid) {
    std::vector<Rational> values;
    for (int i = first_window; i < count; ++i) values.push_back(cdf(members[static_cast<std::size_t>(i)], x));
    const auto lim = extrapolate_limit(values);
    if (!lim) throw Error(ErrorCode::inconclusive, "CDF at " + format_ext_real(x) + " has not stabilized");
    if (*lim < previous || *lim > 1)
      throw Error(ErrorCode::inconclusive, "limiting CDF is not monotone at " + format_ext_real(x));
    atoms.emplace_back(x, *lim - previous);
    previous = *lim;
    if (x.is_finite()) ev.grid.push_back(x);
  }
  atoms.emplace_back(ExtReal::pos_inf(), 1 - previous);
  ev.limit = from_mass_pairs(atoms);
  for (int i = first_window; i < count; ++i)
    ev.finite_mass_trend.push_back(mass_of_set(members[static_cast<std::size_t>(i)], MeasurableSet::reals()));
  return ev;
}

/// Limiting probability measure on R̄.
inline DiscreteMeasure weak_limit_identify(const MeasureFamily& fam, int horizon = 64) {
  switch (fam.kind()) {
    case MeasureFamily::Kind::mu:
    case MeasureFamily::Kind::dirac_n: return dirac(ExtReal::pos_inf());
    case MeasureFamily::Kind::lambda: return lambda_measure();
    case MeasureFamily::Kind::table: break;
  }
  return identify_weak_limit_from_cdfs(fam.members(horizon)).limit;
}

// ---------------------------------------------------------------------------
// Limit reports

enum class LimitStatus { value, divergent, inconclusive };

inline std::string_view to_string(LimitStatus s) {
  switch (s) {
    case LimitStatus::value: return "value";
    case LimitStatus::divergent: return "divergent";
    case LimitStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

/// Result of one evaluation order. Order (a) results carry the limiting
/// measure and set that produce the value; order (b) results are bare numbers.
struct LimitReport {
  char order = 'a';
  LimitStatus status = LimitStatus::value;
  Rational value;
  std::optional<DiscreteMeasure> measure_tag;
  std::optional<MeasurableSet> set_tag;
  std::vector<Rational> sequence;  // rho_n(alpha_n), order (b) only
  std::string witness;
  int horizon_used = 0;
  std::optional<bool> eligible;    // order (b) only
};

/// Order (a): the weak limit applied to the set limit, P(rho, alpha).
inline LimitReport order_a_limit(const MeasureFamily& fam, const SetFamily& sets, int horizon = 64) {
  LimitReport r;
  r.order = 'a';
  DiscreteMeasure rho;
  try {
    rho = weak_limit_identify(fam, horizon);
  } catch (const Error& e) {
    throw Error(ErrorCode::no_weak_limit, fam.name() + ": " + e.what());
  }
  SetLimit alpha = sets.limit();
  r.value = mass_of_set(rho, alpha.set);
  r.witness = "weak limit of " + fam.name() + " applied to the " + std::string(to_string(alpha.monotonicity)) +
              " set limit " + format_set(alpha.set) + " of " + sets.name();
  r.measure_tag = std::move(rho);
  r.set_tag = std::move(alpha.set);
  r.horizon_used = fam.is_builtin() ? 0 : fam.clamp_horizon(horizon);
  return r;
}

namespace detail {

/// lim mu_n((-inf, n + c]) in closed form: 1 when floor(c) >= 0, else 2^floor(c).
inline Rational mu_shift_limit(const Rational& offset) {
  BigInt fl = boost::multiprecision::numerator(offset) / boost::multiprecision::denominator(offset);
  if (offset < 0 && Rational(fl) != offset) fl -= 1;
  if (fl >= 0) return 1;
  return pow2_neg(static_cast<unsigned>(-fl));
}

}  // namespace detail

/// Order (b): the numeric limit of the real sequence rho_n(alpha_n).
inline LimitReport order_b_limit(const MeasureFamily& fam, const SetFamily& sets, int horizon) {
  if (horizon < 1) throw Error(ErrorCode::domain_error, "horizon must be at least 1");
  LimitReport r;
  r.order = 'b';
  r.horizon_used = fam.clamp_horizon(horizon);
  if (auto s = sets.size()) r.horizon_used = std::min(r.horizon_used, *s);
  for (int n = 1; n <= r.horizon_used; ++n) r.sequence.push_back(mass_of_set(fam.member(n), sets.at(n)));

  const auto detected = extrapolate_limit(trailing(r.sequence, limit_window));
  std::optional<Rational> closed;
  if (fam.kind() == MeasureFamily::Kind::mu && sets.kind() == SetFamily::Kind::lower_rays &&
      sets.sequence().kind() == PointSequence::Kind::shift)
    closed = detail::mu_shift_limit(sets.sequence().base());

  if (closed) {
    if (detected && *detected != *closed)
      throw Error(ErrorCode::inconclusive, "closed form " + format_rational(*closed) +
                                               " disagrees with the sequence tail " + format_rational(*detected));
    r.value = *closed;
    r.witness = "closed form for mu_n(I(n+c)); sequence tail " +
                std::string(detected ? "agrees" : "too short to confirm");
  } else if (detected) {
    r.value = *detected;
    r.witness = "exact tail extrapolation over the last " +
                std::to_string(std::min<std::size_t>(limit_window, r.sequence.size())) + " terms";
  } else {
    throw Error(ErrorCode::inconclusive,
                fam.name() + " on " + sets.name() + ": sequence tail is neither constant nor geometric");
  }

  try {
    r.eligible = order_a_limit(fam, sets, horizon).value == r.value;
  } catch (const Error&) {
    r.eligible = false;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Test functionals

/// A real function sampled at support points. `eval` returns nullopt where
/// the function is undefined (e.g. sin at ±inf).
struct TestFunction {
  std::string name;
  std::function<std::optional<double>(const ExtReal&)> eval;
};

inline TestFunction make_test_function(std::string_view name) {
  auto on_reals = [](double (*f)(double)) {
    return [f](const ExtReal& x) -> std::optional<double> {
      if (!x.is_finite()) return std::nullopt;
      return f(x.to_double());
    };
  };
  if (name == "sin") return {"sin", on_reals(static_cast<double (*)(double)>(std::sin))};
  if (name == "cos") return {"cos", on_reals(static_cast<double (*)(double)>(std::cos))};
  if (name == "atan")
    return {"atan", [](const ExtReal& x) -> std::optional<double> { return static_cast<double>(detail::arctan_ext(x)); }};
  if (name == "h")
    return {"h", [](const ExtReal& x) -> std::optional<double> { return static_cast<double>(h(x).value); }};
  if (name == "one") return {"one", [](const ExtReal&) -> std::optional<double> { return 1.0; }};
  throw Error(ErrorCode::domain_error, "unknown test function '" + std::string(name) + "'");
}

struct SubsequenceWitness {
  int n = 0;
  double value = 0;
};

struct FunctionalReport {
  LimitStatus status = LimitStatus::inconclusive;
  double value = 0;                      // valid when status == value
  std::vector<double> sequence;          // integral of f against rho_n, n = 1..horizon
  std::optional<SubsequenceWitness> high, low;  // divergent verdicts
  double gap = 0;
  std::string witness;
  int horizon_used = 0;
};

/// Spread below which a sequence tail counts as settled.
inline constexpr double settled_spread = 1e-9;
/// Oscillation of at least this size in the tail counts as divergence.
inline constexpr double divergence_gap = 0.1;

/// The sequence of integrals of f against rho_n with a convergence verdict.
///
/// If the family has a known weak limit and f is defined on the limit's whole
/// support (so f is continuous on R̄ where it matters), the verdict is the
/// integral against the limit. Otherwise the second half of the sequence is
/// inspected: settled, oscillating by at least divergence_gap, or inconclusive.
inline FunctionalReport test_functional_sequence(const MeasureFamily& fam, const TestFunction& f, int horizon) {
  if (horizon < 2) throw Error(ErrorCode::domain_error, "horizon must be at least 2");
  FunctionalReport r;
  r.horizon_used = fam.clamp_horizon(horizon);
  auto integrate = [&](const DiscreteMeasure& m) -> std::optional<double> {
    double sum = 0;
    for (const auto& [p, mass] : m.atoms()) {
      auto v = f.eval(p);
      if (!v) return std::nullopt;
      sum += to_double(mass) * *v;
    }
    return sum;
  };
  for (int n = 1; n <= r.horizon_used; ++n) {
    auto v = integrate(fam.member(n));
    if (!v)
      throw Error(ErrorCode::evaluation_error, f.name + " is undefined on the support of member " + std::to_string(n));
    r.sequence.push_back(*v);
  }

  std::optional<DiscreteMeasure> limit;
  try {
    limit = weak_limit_identify(fam, horizon);
  } catch (const Error&) {
  }
  if (limit) {
    if (auto v = integrate(*limit)) {
      r.status = LimitStatus::value;
      r.value = *v;
      const double first_gap = std::fabs(r.sequence[r.sequence.size() / 2] - *v);
      const double last_gap = std::fabs(r.sequence.back() - *v);
      r.witness = "integral against the weak limit; |s_mid - limit| = " + std::to_string(first_gap) +
                  ", |s_last - limit| = " + std::to_string(last_gap);
      return r;
    }
  }

  const std::size_t tail_begin = r.sequence.size() / 2;
  std::size_t hi = tail_begin, lo = tail_begin;
  bool rises = false, falls = false;
  for (std::size_t i = tail_begin; i < r.sequence.size(); ++i) {
    if (r.sequence[i] > r.sequence[hi]) hi = i;
    if (r.sequence[i] < r.sequence[lo]) lo = i;
    if (i > tail_begin) {
      if (r.sequence[i] > r.sequence[i - 1]) rises = true;
      if (r.sequence[i] < r.sequence[i - 1]) falls = true;
    }
  }
  r.gap = r.sequence[hi] - r.sequence[lo];
  if (r.gap <= settled_spread) {
    r.status = LimitStatus::value;
    r.value = r.sequence.back();
    r.witness = "tail spread " + std::to_string(r.gap) + " within settling tolerance";
  } else if (rises && falls && r.gap >= divergence_gap) {
    r.status = LimitStatus::divergent;
    r.high = SubsequenceWitness{static_cast<int>(hi) + 1, r.sequence[hi]};
    r.low = SubsequenceWitness{static_cast<int>(lo) + 1, r.sequence[lo]};
    r.witness = "tail oscillates: terms " + std::to_string(hi + 1) + " and " + std::to_string(lo + 1) +
                " differ by " + std::to_string(r.gap);
  } else {
    r.status = LimitStatus::inconclusive;
    r.witness = "tail neither settled nor oscillating";
  }
  return r;
}

// ---------------------------------------------------------------------------
// Lower-ray limits: x_n -> x finite, or x_n increasing to +inf

struct Lemma2Report {
  char branch = 'a';              // 'a': x_n -> x finite; 'b': x_n -> +inf
  LimitReport order_a;
  LimitReport order_b;
  TightnessVerdict tightness;
  Rational mass_at_limit_point;   // rho({x}) on branch (a)
  Rational mass_at_pos_inf;       // rho({+inf})
  std::string predicted;          // relation the branch predicts
  std::optional<bool> relation_holds;  // nullopt when the branch predicts nothing
};

inline Lemma2Report lemma2_check(const MeasureFamily& fam, const PointSequence& xs, int horizon) {
  Lemma2Report r;
  const SetFamily sets = SetFamily::lower_rays(xs);
  r.branch = xs.kind() == PointSequence::Kind::shift ? 'b' : 'a';
  r.order_a = order_a_limit(fam, sets, horizon);
  r.order_b = order_b_limit(fam, sets, horizon);
  r.tightness = tightness_probe(fam, Rational(1, 2), std::max(horizon, 2));
  const DiscreteMeasure& rho = *r.order_a.measure_tag;
  r.mass_at_pos_inf = rho.mass_at(ExtReal::pos_inf());
  const bool equal = r.order_a.value == r.order_b.value;

  if (r.branch == 'a') {
    r.mass_at_limit_point = rho.mass_at(xs.limit());
    if (r.mass_at_limit_point == 0) {
      r.predicted = "continuity point: order (a) = order (b)";
      r.relation_holds = equal;
    } else {
      r.predicted = "limit point carries mass; no relation predicted";
    }
    return r;
  }
  switch (r.tightness.tight) {
    case Tightness::tight:
      r.predicted = "tight: order (a) = order (b) = 1";
      r.relation_holds = equal && r.order_a.value == 1;
      break;
    case Tightness::not_tight:
      r.predicted = "not tight: order (a) = 1 - rho({+inf}) < 1 and order (b) is not probability-eligible";
      r.relation_holds = r.order_a.value == 1 - r.mass_at_pos_inf && r.order_a.value < 1 &&
                         r.order_b.eligible == std::optional<bool>(false);
      break;
    case Tightness::inconclusive:
      r.predicted = "tightness undetermined; no relation predicted";
      break;
  }
  return r;
}

}  // namespace limprob
