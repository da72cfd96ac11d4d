#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "limprob/convergence.hpp"
#include "limprob/event.hpp"
#include "limprob/extended_line.hpp"
#include "limprob/process.hpp"
#include "limprob/theorem.hpp"

// Shared report schema. Rationals are "num/den" strings, ExtReal points are
// "-inf" | "num/den" | "+inf", measures are sorted atom lists plus "total".
// ordered_json keeps field order fixed so output is byte-reproducible.

namespace limprob::json {

using Json = nlohmann::ordered_json;

inline Json rational(const Rational& r) { return format_rational(r); }

inline Json measure(const DiscreteMeasure& m) {
  Json atoms = Json::array();
  for (const auto& [p, mass] : m.atoms()) atoms.push_back({{"point", format_ext_real(p)}, {"mass", rational(mass)}});
  return {{"atoms", atoms}, {"total", rational(m.total())}};
}

inline Json unit_measure(const UnitMeasure& m) {
  Json atoms = Json::array();
  for (const auto& [p, mass] : m.atoms())
    atoms.push_back({{"point", format_unit_real(p.image)},
                     {"exact", p.image.exact},
                     {"preimage", format_ext_real(p.preimage)},
                     {"mass", rational(mass)}});
  return {{"atoms", atoms}, {"total", rational(m.total())}};
}

inline Json interval(const Interval& iv) {
  return {{"lo", format_ext_real(iv.lo)},
          {"lo_closed", iv.lo_closed},
          {"hi", format_ext_real(iv.hi)},
          {"hi_closed", iv.hi_closed}};
}

inline Json set(const MeasurableSet& s) {
  Json ivs = Json::array(), pts = Json::array();
  for (const auto& iv : s.intervals()) ivs.push_back(interval(iv));
  for (const auto& p : s.isolated_points()) pts.push_back(format_ext_real(p));
  return {{"intervals", ivs}, {"points", pts}};
}

namespace detail {
inline std::string require_string(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string())
    throw Error(ErrorCode::domain_error, std::string("expected string field '") + key + "'");
  return j.at(key).get<std::string>();
}
}  // namespace detail

inline DiscreteMeasure measure_from_json(const nlohmann::json& j) {
  const nlohmann::json& atoms = j.is_array() ? j : j.at("atoms");
  std::vector<std::pair<ExtReal, Rational>> pairs;
  for (const auto& a : atoms)
    pairs.emplace_back(parse_ext_real(detail::require_string(a, "point")),
                       parse_rational(detail::require_string(a, "mass")));
  DiscreteMeasure m = from_mass_pairs(pairs);
  if (j.is_object() && j.contains("total") && parse_rational(j.at("total").get<std::string>()) != m.total())
    throw Error(ErrorCode::domain_error, "stated total does not match the atoms (" + format_rational(m.total()) + ")");
  return m;
}

inline MeasurableSet set_from_json(const nlohmann::json& j) {
  std::vector<Interval> ivs;
  std::vector<ExtReal> pts;
  if (j.contains("intervals"))
    for (const auto& iv : j.at("intervals"))
      ivs.push_back(Interval{parse_ext_real(detail::require_string(iv, "lo")), iv.value("lo_closed", false),
                             parse_ext_real(detail::require_string(iv, "hi")), iv.value("hi_closed", false)});
  if (j.contains("points"))
    for (const auto& p : j.at("points")) pts.push_back(parse_ext_real(p.get<std::string>()));
  return MeasurableSet::from_parts(std::move(ivs), std::move(pts));
}

/// Either a bare array of measures or {"members": [...]}.
inline MeasureFamily family_from_json(const nlohmann::json& j) {
  const nlohmann::json& list = j.is_array() ? j : j.at("members");
  std::vector<DiscreteMeasure> members;
  for (const auto& m : list) members.push_back(measure_from_json(m));
  return MeasureFamily::table(std::move(members));
}

/// Either a bare array of sets or {"sets": [...]}.
inline SetFamily set_family_from_json(const nlohmann::json& j) {
  const nlohmann::json& list = j.is_array() ? j : j.at("sets");
  std::vector<MeasurableSet> sets;
  for (const auto& s : list) sets.push_back(set_from_json(s));
  return SetFamily::table(std::move(sets));
}

inline Json additivity(const AdditivityReport& r) {
  return {{"mass_a", rational(r.mass_a)},   {"mass_b", rational(r.mass_b)},
          {"mass_union", rational(r.mass_union)}, {"sum", rational(r.sum)},
          {"disjoint", r.disjoint},         {"eligible", r.eligible}};
}

inline Json process_row(const ProcessRow& r) {
  return {{"bits", r.outcome.str()}, {"prob", rational(r.prob)}, {"y", r.y}, {"z", r.z}};
}

inline Json identities(const IdentityReport& r) {
  return {{"n", r.n},
          {"rows_checked", r.rows_checked},
          {"z_at_most_n", r.z_at_most_n},
          {"x_at_z_equals_y", r.x_at_z_equals_y},
          {"last_zero_when_z_early", r.last_zero_when_z_early},
          {"p_z_lt_n", rational(r.p_z_lt_n)},
          {"p_x_last_zero_z_lt_n", rational(r.p_x_last_zero_z_lt_n)},
          {"violations", r.violations}};
}

inline Json tightness(const TightnessVerdict& v) {
  Json atoms = Json::array();
  for (const auto& [n, m] : v.witness_atoms) atoms.push_back({{"n", n}, {"mass", rational(m)}});
  Json out = {{"tight", std::string(to_string(v.tight))}, {"epsilon", rational(v.epsilon)}};
  out["interval"] = v.interval ? interval(*v.interval) : Json(nullptr);
  if (v.tight == Tightness::not_tight) {
    out["witness_bound"] = rational(v.witness_bound);
    out["witness_atoms"] = atoms;
  }
  out["witness"] = v.witness;
  out["horizon_used"] = v.horizon_used;
  return out;
}

inline Json limit_report(const LimitReport& r) {
  Json out = {{"status", std::string(to_string(r.status))}};
  out["value"] = r.status == LimitStatus::value ? rational(r.value) : Json(nullptr);
  out["order"] = std::string(1, r.order);
  out["measure_tag"] = r.measure_tag ? measure(*r.measure_tag) : Json(nullptr);
  out["set_tag"] = r.set_tag ? set(*r.set_tag) : Json(nullptr);
  out["witness"] = r.witness;
  out["horizon_used"] = r.horizon_used;
  out["eligible"] = r.eligible ? Json(*r.eligible) : Json(nullptr);
  return out;
}

inline Json functional_report(const FunctionalReport& r) {
  Json out = {{"status", std::string(to_string(r.status))}};
  out["value"] = r.status == LimitStatus::value ? Json(r.value) : Json(nullptr);
  if (r.high && r.low) {
    out["subsequence_witnesses"] = Json::array({{{"n", r.high->n}, {"value", r.high->value}},
                                                {{"n", r.low->n}, {"value", r.low->value}}});
    out["gap"] = r.gap;
  }
  out["sequence"] = r.sequence;
  out["witness"] = r.witness;
  out["horizon_used"] = r.horizon_used;
  return out;
}

inline Json lemma2(const Lemma2Report& r) {
  Json out = {{"branch", std::string(1, r.branch)}};
  out["order_a"] = limit_report(r.order_a);
  out["order_b"] = limit_report(r.order_b);
  out["tightness"] = tightness(r.tightness);
  if (r.branch == 'a') out["mass_at_limit_point"] = rational(r.mass_at_limit_point);
  out["mass_at_pos_inf"] = rational(r.mass_at_pos_inf);
  out["predicted"] = r.predicted;
  out["relation_holds"] = r.relation_holds ? Json(*r.relation_holds) : Json(nullptr);
  return out;
}

inline Json theorem(const TheoremReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json j = {{"n", row.n},
              {"lambda_n_zero", rational(row.lambda_n_zero)},
              {"p_zero_and_z_early", rational(row.p_zero_and_z_early)},
              {"p_zero_and_z_last", rational(row.p_zero_and_z_last)},
              {"mu_n_lower", rational(row.mu_n_lower)}};
    j["mu_n_lower_enumerated"] = row.mu_n_lower_enumerated ? rational(*row.mu_n_lower_enumerated) : Json(nullptr);
    j["decomposition_holds"] = row.decomposition_holds();
    rows.push_back(std::move(j));
  }
  return {{"rows", rows},
          {"order_a_value", rational(r.order_a_value)},
          {"order_b_value", rational(r.order_b_value)},
          {"crosscheck_matches", r.crosscheck_matches},
          {"divergence_step", r.divergence_step}};
}

inline Json parse_error(const ParseError& e) {
  return {{"line", e.line()}, {"col", e.col()}, {"expected", e.expected()}};
}

}  // namespace limprob::json
