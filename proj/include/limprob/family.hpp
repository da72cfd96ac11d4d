#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "limprob/discrete_measure.hpp"
#include "limprob/process.hpp"

namespace limprob {

/// n -> rho_n, either one of the built-in families or an explicit table
/// whose k-th entry is rho_{k+1}.
class MeasureFamily {
 public:
  enum class Kind { mu, lambda, dirac_n, table };

  static MeasureFamily mu() { return MeasureFamily(Kind::mu, {}); }
  static MeasureFamily lambda() { return MeasureFamily(Kind::lambda, {}); }
  static MeasureFamily dirac_n() { return MeasureFamily(Kind::dirac_n, {}); }

  static MeasureFamily table(std::vector<DiscreteMeasure> members) {
    if (members.empty()) throw Error(ErrorCode::domain_error, "explicit family table is empty");
    for (std::size_t i = 0; i < members.size(); ++i)
      if (!members[i].is_probability())
        throw Error(ErrorCode::domain_error, "family member " + std::to_string(i + 1) + " has total " +
                                                 format_rational(members[i].total()) + ", expected 1");
    return MeasureFamily(Kind::table, std::move(members));
  }

  static MeasureFamily builtin(std::string_view name) {
    if (name == "mu") return mu();
    if (name == "lambda") return lambda();
    if (name == "dirac_n") return dirac_n();
    throw Error(ErrorCode::domain_error, "unknown family '" + std::string(name) + "'");
  }

  Kind kind() const noexcept { return kind_; }
  bool is_builtin() const noexcept { return kind_ != Kind::table; }

  std::string name() const {
    switch (kind_) {
      case Kind::mu: return "mu";
      case Kind::lambda: return "lambda";
      case Kind::dirac_n: return "dirac_n";
      case Kind::table: return "table[" + std::to_string(table_.size()) + "]";
    }
    return "?";
  }

  /// Number of members available; unbounded for built-ins.
  std::optional<int> size() const {
    if (kind_ == Kind::table) return static_cast<int>(table_.size());
    return std::nullopt;
  }

  /// Largest usable horizon not exceeding `requested`.
  int clamp_horizon(int requested) const {
    if (auto s = size()) return std::min(requested, *s);
    return requested;
  }

  DiscreteMeasure member(int n) const {
    if (n < 1) throw Error(ErrorCode::n_range, "family index must be >= 1, got " + std::to_string(n));
    switch (kind_) {
      case Kind::mu: return mu_closed_form(n);
      case Kind::lambda: return lambda_measure();
      case Kind::dirac_n: return dirac(ExtReal(n));
      case Kind::table:
        if (n > static_cast<int>(table_.size()))
          throw Error(ErrorCode::n_range, "table family has only " + std::to_string(table_.size()) + " members");
        return table_[static_cast<std::size_t>(n - 1)];
    }
    return {};
  }

  std::vector<DiscreteMeasure> members(int horizon) const {
    std::vector<DiscreteMeasure> out;
    for (int n = 1; n <= clamp_horizon(horizon); ++n) out.push_back(member(n));
    return out;
  }

 private:
  MeasureFamily(Kind k, std::vector<DiscreteMeasure> t) : kind_(k), table_(std::move(t)) {}

  Kind kind_;
  std::vector<DiscreteMeasure> table_;
};

/// Real sequence x_n used for I(x_n) = (-inf, x_n]:
///   shift       x_n = n + offset           (increases to +inf)
///   reciprocal  x_n = base + coeff / n     (tends to base)
///   constant    x_n = base
class PointSequence {
 public:
  enum class Kind { shift, reciprocal, constant };

  static PointSequence shift(Rational offset) { return PointSequence(Kind::shift, std::move(offset), 0); }
  static PointSequence reciprocal(Rational base, Rational coeff) {
    if (coeff == 0) return constant(std::move(base));
    return PointSequence(Kind::reciprocal, std::move(base), std::move(coeff));
  }
  static PointSequence constant(Rational base) { return PointSequence(Kind::constant, std::move(base), 0); }

  /// Accepts "n", "n-1", "n+3/2", "1/2+1/n", "1/2-1/n", "2/n", "3/4".
  static PointSequence parse(std::string_view src) {
    std::string s;
    for (char c : src)
      if (c != ' ') s += c;
    auto bad = [&](const std::string& why) {
      return Error(ErrorCode::bad_sequence_spec, "'" + std::string(src) + "': " + why);
    };
    if (s.empty()) throw bad("empty sequence spec");
    try {
      if (s.front() == 'n') {
        std::string rest = s.substr(1);
        if (rest.empty()) return shift(0);
        if (rest.front() != '+' && rest.front() != '-') throw bad("expected n+c or n-c");
        if (rest.find('n') != std::string::npos) throw bad("n may appear once");
        return shift(parse_rational(rest));
      }
      if (s.size() >= 2 && s.ends_with("/n")) {
        std::string head = s.substr(0, s.size() - 2);
        if (head.find('n') != std::string::npos) throw bad("n may appear once");
        std::size_t sign = std::string::npos;
        for (std::size_t i = 1; i < head.size(); ++i)
          if ((head[i] == '+' || head[i] == '-') && head[i - 1] != '/') sign = i;
        if (sign == std::string::npos) return reciprocal(0, parse_rational(head));
        return reciprocal(parse_rational(head.substr(0, sign)), parse_rational(head.substr(sign)));
      }
      if (s.find('n') != std::string::npos) throw bad("unsupported form; use n+c, x+c/n or a constant");
      return constant(parse_rational(s));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::bad_sequence_spec) throw;
      throw bad(e.what());
    }
  }

  Kind kind() const noexcept { return kind_; }
  const Rational& base() const noexcept { return base_; }
  const Rational& coeff() const noexcept { return coeff_; }

  Rational at(int n) const {
    switch (kind_) {
      case Kind::shift: return Rational(n) + base_;
      case Kind::reciprocal: return base_ + coeff_ / n;
      case Kind::constant: return base_;
    }
    return 0;
  }

  ExtReal limit() const {
    if (kind_ == Kind::shift) return ExtReal::pos_inf();
    return ExtReal(base_);
  }

  std::string str() const {
    switch (kind_) {
      case Kind::shift:
        if (base_ == 0) return "n";
        return base_ < 0 ? "n-" + format_rational_short(-base_) : "n+" + format_rational_short(base_);
      case Kind::reciprocal:
        return format_rational_short(base_) + (coeff_ < 0 ? "-" : "+") +
               format_rational_short(coeff_ < 0 ? Rational(-coeff_) : coeff_) + "/n";
      case Kind::constant: return format_rational_short(base_);
    }
    return "?";
  }

 private:
  PointSequence(Kind k, Rational b, Rational c) : kind_(k), base_(std::move(b)), coeff_(std::move(c)) {}

  Kind kind_;
  Rational base_;
  Rational coeff_;
};

enum class Monotonicity { constant, increasing, decreasing };

inline std::string_view to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::constant: return "constant";
    case Monotonicity::increasing: return "increasing";
    case Monotonicity::decreasing: return "decreasing";
  }
  return "?";
}

struct SetLimit {
  MeasurableSet set;
  Monotonicity monotonicity = Monotonicity::constant;
};

/// n -> alpha_n together with its set limit. Only constant and monotone
/// families have a limit: union when increasing, intersection when decreasing.
class SetFamily {
 public:
  enum class Kind { lower_rays, constant, table };

  static SetFamily lower_rays(PointSequence xs) { return SetFamily(Kind::lower_rays, std::move(xs), {}, {}); }
  static SetFamily constant(MeasurableSet s, std::string label = {}) {
    if (label.empty()) label = format_set(s);
    SetFamily f(Kind::constant, PointSequence::constant(0), {std::move(s)}, std::move(label));
    return f;
  }
  /// Explicit list; treated as constant at its last entry from then on.
  static SetFamily table(std::vector<MeasurableSet> sets) {
    if (sets.empty()) throw Error(ErrorCode::domain_error, "explicit set list is empty");
    return SetFamily(Kind::table, PointSequence::constant(0), std::move(sets), {});
  }

  Kind kind() const noexcept { return kind_; }
  const PointSequence& sequence() const noexcept { return xs_; }

  std::string name() const {
    switch (kind_) {
      case Kind::lower_rays: return "I(" + xs_.str() + ")";
      case Kind::constant: return label_;
      case Kind::table: return "sets[" + std::to_string(sets_.size()) + "]";
    }
    return "?";
  }

  std::optional<int> size() const {
    if (kind_ == Kind::table) return static_cast<int>(sets_.size());
    return std::nullopt;
  }

  MeasurableSet at(int n) const {
    switch (kind_) {
      case Kind::lower_rays: return MeasurableSet::lower_ray(ExtReal(xs_.at(n)));
      case Kind::constant: return sets_.front();
      case Kind::table:
        if (n < 1 || n > static_cast<int>(sets_.size()))
          throw Error(ErrorCode::n_range, "set list has " + std::to_string(sets_.size()) + " entries");
        return sets_[static_cast<std::size_t>(n - 1)];
    }
    return {};
  }

  SetLimit limit() const {
    switch (kind_) {
      case Kind::constant: return {sets_.front(), Monotonicity::constant};
      case Kind::lower_rays:
        switch (xs_.kind()) {
          case PointSequence::Kind::shift: return {MeasurableSet::reals(), Monotonicity::increasing};
          case PointSequence::Kind::constant:
            return {MeasurableSet::lower_ray(ExtReal(xs_.base())), Monotonicity::constant};
          case PointSequence::Kind::reciprocal:
            if (xs_.coeff() > 0)
              return {MeasurableSet::lower_ray(ExtReal(xs_.base())), Monotonicity::decreasing};
            return {MeasurableSet::interval(ExtReal::neg_inf(), false, ExtReal(xs_.base()), false),
                    Monotonicity::increasing};
        }
        break;
      case Kind::table: return table_limit();
    }
    throw Error(ErrorCode::no_set_limit, "set family " + name() + " has no limit");
  }

 private:
  SetFamily(Kind k, PointSequence xs, std::vector<MeasurableSet> sets, std::string label)
      : kind_(k), xs_(std::move(xs)), sets_(std::move(sets)), label_(std::move(label)) {}

  SetLimit table_limit() const {
    bool all_equal = true, up = true, down = true;
    for (std::size_t i = 1; i < sets_.size(); ++i) {
      const auto& prev = sets_[i - 1];
      const auto& cur = sets_[i];
      if (!(prev == cur)) all_equal = false;
      if (!prev.subset_of(cur)) up = false;
      if (!cur.subset_of(prev)) down = false;
    }
    if (all_equal) return {sets_.back(), Monotonicity::constant};
    if (up) return {sets_.back(), Monotonicity::increasing};
    if (down) return {sets_.back(), Monotonicity::decreasing};
    throw Error(ErrorCode::no_set_limit, "explicit set list is neither constant nor monotone");
  }

  Kind kind_;
  PointSequence xs_;
  std::vector<MeasurableSet> sets_;
  std::string label_;
};

}  // namespace limprob
