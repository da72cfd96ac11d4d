#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "limprob/json_io.hpp"
#include "limprob/limprob.hpp"

namespace limprob::cli {

enum class Format { table, json, csv };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::domain_error, "cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::domain_error, "'" + path + "': " + e.what());
  }
}

/// mu | lambda | dirac_n | @file.json
inline MeasureFamily parse_family(const std::string& spec) {
  if (!spec.empty() && spec.front() == '@') return json::family_from_json(load_json_file(spec.substr(1)));
  return MeasureFamily::builtin(spec);
}

inline std::vector<ExtReal> parse_point_list(const std::string& csv) {
  std::vector<ExtReal> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_ext_real(item));
  return out;
}

/// I(<x_n>) | I=<x> | point=<c> | points=<c1>,<c2> | R | Rbar | empty |
/// [a,b] style intervals | @file.json
inline SetFamily parse_sets(const std::string& spec) {
  if (spec.empty()) throw UsageError("empty set spec");
  if (spec.front() == '@') {
    const auto j = load_json_file(spec.substr(1));
    if (j.is_object() && !j.contains("sets")) return SetFamily::constant(json::set_from_json(j));
    return json::set_family_from_json(j);
  }
  if (spec.starts_with("I(") && spec.ends_with(")"))
    return SetFamily::lower_rays(PointSequence::parse(spec.substr(2, spec.size() - 3)));
  if (spec.starts_with("I="))
    return SetFamily::constant(MeasurableSet::lower_ray(parse_ext_real(spec.substr(2))), "I(" + spec.substr(2) + ")");
  if (spec.starts_with("point="))
    return SetFamily::constant(MeasurableSet::point(parse_ext_real(spec.substr(6))), "{" + spec.substr(6) + "}");
  if (spec.starts_with("points="))
    return SetFamily::constant(MeasurableSet::points(parse_point_list(spec.substr(7))), "{" + spec.substr(7) + "}");
  if (spec == "R") return SetFamily::constant(MeasurableSet::reals(), "R");
  if (spec == "Rbar") return SetFamily::constant(MeasurableSet::extended_reals(), "Rbar");
  if (spec == "empty") return SetFamily::constant(MeasurableSet::empty_set(), "empty");
  if ((spec.front() == '[' || spec.front() == '(') && (spec.back() == ']' || spec.back() == ')')) {
    const auto comma = spec.find(',');
    if (comma == std::string::npos) throw UsageError("interval '" + spec + "' needs a comma");
    return SetFamily::constant(MeasurableSet::interval(parse_ext_real(spec.substr(1, comma - 1)), spec.front() == '[',
                                                       parse_ext_real(spec.substr(comma + 1, spec.size() - comma - 2)),
                                                       spec.back() == ']'),
                               spec);
  }
  throw UsageError("unrecognized set spec '" + spec + "'");
}

namespace detail {

inline void require_format(Format f, std::initializer_list<Format> allowed, const std::string& cmd) {
  if (std::find(allowed.begin(), allowed.end(), f) == allowed.end())
    throw UsageError("--format csv is not available for '" + cmd + "'");
}

inline void print_measure_table(std::ostream& out, const DiscreteMeasure& m) {
  for (const auto& [p, mass] : m.atoms()) out << format_ext_real_short(p) << "\t" << format_rational_short(mass) << "\n";
  out << "total\t" << format_rational_short(m.total()) << "\n";
}

inline void print_measure_csv(std::ostream& out, const DiscreteMeasure& m) {
  out << "point,mass\n";
  for (const auto& [p, mass] : m.atoms()) out << format_ext_real(p) << "," << format_rational(mass) << "\n";
}

inline void print_limit_table(std::ostream& out, const LimitReport& r) {
  out << (r.status == LimitStatus::value ? format_rational_short(r.value) : std::string(to_string(r.status))) << "\n";
}

}  // namespace detail

/// Parses argv (without the program name) and executes one subcommand.
/// Returns 0 on success, 1 on a domain error, 2 on a usage error.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact limiting-probability workbench on the extended real line", "limprob"};
  app.require_subcommand(1);

  Format format = Format::table;
  std::string out_path;
  const std::map<std::string, Format> format_names{{"table", Format::table}, {"json", Format::json}, {"csv", Format::csv}};
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "table | json | csv")->transform(CLI::CheckedTransformer(format_names));
    sub->add_option("--out", out_path, "write the report to this path");
  };

  std::string family = "mu", sets_spec, set_a, set_b, event_src, p_str = "1/2", eps_str = "1/2", xs_spec, fn = "sin";
  int n = 3, horizon = 64, k_max = 0, n_max = 10;
  bool use_limit = false;
  char order = 'b';
  std::function<void(std::ostream&)> action;

  // measure
  auto* measure = app.add_subcommand("measure", "single-measure operations");
  measure->require_subcommand(1);
  auto* m_show = measure->add_subcommand("show", "atoms of rho_n");
  m_show->add_option("--family", family)->required();
  m_show->add_option("--n", n);
  add_common(m_show);
  m_show->callback([&] {
    action = [&](std::ostream& o) {
      const auto m = parse_family(family).member(n);
      if (format == Format::json) o << json::measure(m).dump(2) << "\n";
      else if (format == Format::csv) detail::print_measure_csv(o, m);
      else detail::print_measure_table(o, m);
    };
  });
  auto* m_add = measure->add_subcommand("additivity", "is mass(A) + mass(B) an event probability?");
  m_add->add_option("--family", family)->required();
  m_add->add_option("--n", n);
  m_add->add_option("--a", set_a)->required();
  m_add->add_option("--b", set_b)->required();
  add_common(m_add);
  m_add->callback([&] {
    action = [&](std::ostream& o) {
      detail::require_format(format, {Format::table, Format::json}, "measure additivity");
      const auto m = parse_family(family).member(n);
      const auto r = check_additivity(m, parse_sets(set_a).at(n), parse_sets(set_b).at(n));
      if (format == Format::json) {
        o << json::additivity(r).dump(2) << "\n";
        return;
      }
      o << "mass(A)\t" << format_rational_short(r.mass_a) << "\nmass(B)\t" << format_rational_short(r.mass_b)
        << "\nmass(AuB)\t" << format_rational_short(r.mass_union) << "\nsum\t" << format_rational_short(r.sum)
        << "\ndisjoint\t" << std::boolalpha << r.disjoint << "\neligible\t" << r.eligible << "\n";
    };
  });

  // process
  auto* process = app.add_subcommand("process", "coin-flip running maximum and argmax index");
  process->require_subcommand(1);
  auto* p_enum = process->add_subcommand("enumerate", "all 2^n rows");
  p_enum->add_option("--n", n)->required();
  p_enum->add_option("--p", p_str);
  add_common(p_enum);
  p_enum->callback([&] {
    action = [&](std::ostream& o) {
      const auto rows = enumerate_outcomes(n, parse_rational(p_str));
      if (format == Format::json) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : rows) arr.push_back(json::process_row(r));
        o << nlohmann::ordered_json{{"n", n}, {"p", format_rational(parse_rational(p_str))}, {"rows", arr}}.dump(2)
          << "\n";
        return;
      }
      const char sep = format == Format::csv ? ',' : '\t';
      o << "bits" << sep << "prob" << sep << "y" << sep << "z\n";
      for (const auto& r : rows)
        o << r.outcome.str() << sep << (format == Format::csv ? format_rational(r.prob) : format_rational_short(r.prob))
          << sep << r.y << sep << r.z << "\n";
    };
  });
  auto* p_prob = process->add_subcommand("prob", "exact probability of an event");
  p_prob->add_option("--n", n)->required();
  p_prob->add_option("--p", p_str);
  p_prob->add_option("--event", event_src)->required();
  add_common(p_prob);
  p_prob->callback([&] {
    action = [&](std::ostream& o) {
      detail::require_format(format, {Format::table, Format::json}, "process prob");
      const auto e = parse_event(event_src);
      const auto p = parse_rational(p_str);
      const auto prob = event_probability(n, p, e);
      if (format == Format::json)
        o << nlohmann::ordered_json{{"n", n}, {"p", format_rational(p)}, {"event", e.str()}, {"probability", format_rational(prob)}}
                 .dump(2)
          << "\n";
      else
        o << format_rational_short(prob) << "\n";
    };
  });
  auto* p_id = process->add_subcommand("identities", "check Z_n <= n, X_{Z_n} = Y_n and the early-argmax set identity");
  p_id->add_option("--n", n)->required();
  p_id->add_option("--p", p_str);
  add_common(p_id);
  p_id->callback([&] {
    action = [&](std::ostream& o) {
      detail::require_format(format, {Format::table, Format::json}, "process identities");
      const auto r = verify_process_identities(n, parse_rational(p_str));
      if (format == Format::json) {
        o << json::identities(r).dump(2) << "\n";
        return;
      }
      o << std::boolalpha << "rows\t" << r.rows_checked << "\nZ<=N\t" << r.z_at_most_n << "\nX[Z]==Y\t"
        << r.x_at_z_equals_y << "\n{X[N]==0,Z<N}=={Z<N}\t" << r.last_zero_when_z_early << "\nP(Z<N)\t"
        << format_rational_short(r.p_z_lt_n) << "\nP(X[N]==0,Z<N)\t" << format_rational_short(r.p_x_last_zero_z_lt_n)
        << "\n";
    };
  });
  auto* p_esc = process->add_subcommand("escape", "mu_n({n-k}) for k = 0..k_max");
  p_esc->add_option("--n", n)->required();
  p_esc->add_option("--k-max", k_max)->required();
  add_common(p_esc);
  p_esc->callback([&] {
    action = [&](std::ostream& o) {
      const auto prof = escaped_mass_profile(n, k_max);
      if (format == Format::json) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& [k, m] : prof) arr.push_back({{"k", k}, {"mass", format_rational(m)}});
        o << nlohmann::ordered_json{{"n", n}, {"profile", arr}}.dump(2) << "\n";
        return;
      }
      const char sep = format == Format::csv ? ',' : '\t';
      o << "k" << sep << "mass\n";
      for (const auto& [k, m] : prof)
        o << k << sep << (format == Format::csv ? format_rational(m) : format_rational_short(m)) << "\n";
    };
  });

  // converge
  auto* converge = app.add_subcommand("converge", "tightness, weak limits and limiting probabilities");
  converge->require_subcommand(1);
  auto* c_tight = converge->add_subcommand("tightness", "tightness verdict on R");
  c_tight->add_option("--family", family)->required();
  c_tight->add_option("--epsilon", eps_str);
  c_tight->add_option("--horizon", horizon);
  add_common(c_tight);
  c_tight->callback([&] {
    action = [&](std::ostream& o) {
      detail::require_format(format, {Format::table, Format::json}, "converge tightness");
      const auto v = tightness_probe(parse_family(family), parse_rational(eps_str), horizon);
      if (format == Format::json) {
        o << json::tightness(v).dump(2) << "\n";
        return;
      }
      o << to_string(v.tight) << "\nepsilon\t" << format_rational_short(v.epsilon) << "\n";
      if (v.interval) o << "interval\t" << format_interval(*v.interval) << "\n";
      o << "witness\t" << v.witness << "\n";
    };
  });
  auto* c_limit = converge->add_subcommand("limit", "limiting probability in order (a) or (b)");
  c_limit->add_option("--family", family)->required();
  c_limit->add_option("--sets", sets_spec)->required();
  c_limit->add_option("--order", order)->check(CLI::IsMember({'a', 'b'}));
  c_limit->add_option("--horizon", horizon);
  add_common(c_limit);
  c_limit->callback([&] {
    action = [&](std::ostream& o) {
      detail::require_format(format, {Format::table, Format::json}, "converge limit");
      const auto fam = parse_family(family);
      const auto sets = parse_sets(sets_spec);
      const auto r = order == 'a' ? order_a_limit(fam, sets, horizon) : order_b_limit(fam, sets, horizon);
      if (format == Format::json) o << json::limit_report(r).dump(2) << "\n";
      else detail::print_limit_table(o, r);
    };
  });
  auto* c_weak = converge->add_subcommand("weaklimit", "limiting measure on the extended line");
  c_weak->add_option("--family", family)->required();
  c_weak->add_option("--horizon", horizon);
  add_common(c_weak);
  c_weak->callback([&] {
    action = [&](std::ostream& o) {
      const auto m = weak_limit_identify(parse_family(family), horizon);
      if (format == Format::json) o << json::measure(m).dump(2) << "\n";
      else if (format == Format::csv) detail::print_measure_csv(o, m);
      else detail::print_measure_table(o, m);
    };
  });
  auto* c_fn = converge->add_subcommand("testfn", "integrals of a test function against rho_n");
  c_fn->add_option("--family", family)->required();
  c_fn->add_option("--fn", fn, "sin | cos | atan | h | one");
  c_fn->add_option("--horizon", horizon);
  add_common(c_fn);
  c_fn->callback([&] {
    action = [&](std::ostream& o) {
      detail::require_format(format, {Format::table, Format::json}, "converge testfn");
      const auto r = test_functional_sequence(parse_family(family), make_test_function(fn), horizon);
      if (format == Format::json) {
        o << json::functional_report(r).dump(2) << "\n";
        return;
      }
      o << to_string(r.status);
      if (r.status == LimitStatus::value) o << "\t" << r.value;
      o << "\n" << r.witness << "\n";
    };
  });
  auto* c_l2 = converge->add_subcommand("lemma2", "both orders on I(x_n) with x_n -> x or x_n -> +inf");
  c_l2->add_option("--family", family)->required();
  c_l2->add_option("--xs", xs_spec)->required();
  c_l2->add_option("--horizon", horizon);
  add_common(c_l2);
  c_l2->callback([&] {
    action = [&](std::ostream& o) {
      detail::require_format(format, {Format::table, Format::json}, "converge lemma2");
      const auto r = lemma2_check(parse_family(family), PointSequence::parse(xs_spec), horizon);
      if (format == Format::json) {
        o << json::lemma2(r).dump(2) << "\n";
        return;
      }
      o << "branch\t" << r.branch << "\norder_a\t" << format_rational_short(r.order_a.value) << "\norder_b\t"
        << format_rational_short(r.order_b.value) << "\ntightness\t" << to_string(r.tightness.tight)
        << "\npredicted\t" << r.predicted << "\nrelation_holds\t"
        << (r.relation_holds ? (*r.relation_holds ? "true" : "false") : "n/a") << "\n";
    };
  });

  // compactify
  auto* comp = app.add_subcommand("compactify", "push a measure forward to [0,1]");
  comp->add_option("--family", family)->required();
  comp->add_option("--n", n);
  comp->add_flag("--limit", use_limit, "compactify the weak limit instead of rho_n");
  comp->add_option("--horizon", horizon);
  add_common(comp);
  comp->callback([&] {
    action = [&](std::ostream& o) {
      const auto fam = parse_family(family);
      const auto m = compactify_measure(use_limit ? weak_limit_identify(fam, horizon) : fam.member(n));
      if (format == Format::json) {
        o << json::unit_measure(m).dump(2) << "\n";
        return;
      }
      const char sep = format == Format::csv ? ',' : '\t';
      o << "point" << sep << "exact" << sep << "preimage" << sep << "mass\n";
      for (const auto& [p, mass] : m.atoms())
        o << format_unit_real(p.image) << sep << (p.image.exact ? "true" : "false") << sep
          << format_ext_real(p.preimage) << sep << format_rational(mass) << "\n";
    };
  });

  // theorem
  auto* theorem = app.add_subcommand("theorem", "two routes to lim lambda_n({0})");
  theorem->require_subcommand(1);
  auto* t_verify = theorem->add_subcommand("verify", "per-n decomposition and both limit orders");
  t_verify->add_option("--n-max,--n", n_max);
  add_common(t_verify);
  t_verify->callback([&] {
    action = [&](std::ostream& o) {
      const auto r = verify_theorem(n_max);
      if (format == Format::json) {
        o << json::theorem(r).dump(2) << "\n";
        return;
      }
      const bool csv = format == Format::csv;
      const char sep = csv ? ',' : '\t';
      auto fmt = [csv](const Rational& q) { return csv ? format_rational(q) : format_rational_short(q); };
      o << "n" << sep << "lambda_n({0})" << sep << "P(X[N]==0,Z<N)" << sep << "P(X[N]==0,Z==N)" << sep
        << "mu_n(I(n-1))" << sep << "P(Z<N)\n";
      for (const auto& row : r.rows)
        o << row.n << sep << fmt(row.lambda_n_zero) << sep << fmt(row.p_zero_and_z_early) << sep
          << fmt(row.p_zero_and_z_last) << sep << fmt(row.mu_n_lower) << sep
          << (row.mu_n_lower_enumerated ? fmt(*row.mu_n_lower_enumerated) : std::string()) << "\n";
      if (!csv)
        o << "order (a)\t" << fmt(r.order_a_value) << "\norder (b)\t" << fmt(r.order_b_value) << "\n"
          << r.divergence_step << "\n";
    };
  });

  // figure1
  auto* fig = app.add_subcommand("figure1", "segment heights mu_n({j}) for plotting");
  fig->add_option("--n-max,--n", n_max)->default_val(3);
  add_common(fig);
  fig->callback([&] {
    action = [&](std::ostream& o) {
      if (n_max < 1) throw Error(ErrorCode::n_range, "--n-max must be at least 1");
      if (format == Format::json) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (int k = 1; k <= n_max; ++k) {
          nlohmann::ordered_json seg = nlohmann::ordered_json::array();
          for (const auto& [p, mass] : mu_closed_form(k).atoms())
            seg.push_back({{"j", format_ext_real(p)}, {"mass", format_rational(mass)}});
          arr.push_back({{"n", k}, {"segments", seg}});
        }
        o << arr.dump(2) << "\n";
        return;
      }
      const char sep = format == Format::csv ? ',' : '\t';
      o << "n" << sep << "j" << sep << "mass\n";
      for (int k = 1; k <= n_max; ++k)
        for (const auto& [p, mass] : mu_closed_form(k).atoms())
          o << k << sep << format_ext_real_short(p) << sep
            << (format == Format::csv ? format_rational(mass) : format_rational_short(mass)) << "\n";
    };
  });

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!action) throw UsageError("no command selected");
    if (out_path.empty()) {
      action(out);
    } else {
      std::ostringstream buffer;
      action(buffer);
      std::ofstream file(out_path, std::ios::binary);
      if (!file) throw Error(ErrorCode::domain_error, "cannot write '" + out_path + "'");
      file << buffer.str();
    }
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << e.what() << "\n" << json::parse_error(e).dump() << "\n";
    return 1;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  }
}

}  // namespace limprob::cli
