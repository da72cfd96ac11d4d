#pragma once

#include <optional>
#include <string>
#include <vector>

#include "limprob/convergence.hpp"
#include "limprob/process.hpp"

namespace limprob {

/// Largest n for which the per-n closed form is cross-checked by enumeration.
inline constexpr int theorem_crosscheck_n = 12;

struct TheoremRow {
  int n = 0;
  Rational lambda_n_zero;         // P(X_n = 0)
  Rational p_zero_and_z_early;    // P(X_n = 0, Z_n < n)
  Rational p_zero_and_z_last;     // P(X_n = 0, Z_n = n)
  Rational mu_n_lower;            // mu_n(I(n-1)), closed form
  std::optional<Rational> mu_n_lower_enumerated;  // P(Z_n < n), n <= theorem_crosscheck_n

  bool decomposition_holds() const { return lambda_n_zero == p_zero_and_z_early + p_zero_and_z_last; }
};

struct TheoremReport {
  std::vector<TheoremRow> rows;
  Rational order_a_value;  // mu(R) under the weak limit mu = dirac(+inf)
  Rational order_b_value;  // lim of the real sequence mu_n(I(n-1))
  bool crosscheck_matches = true;
  std::string divergence_step;
};

/// Walks both routes to lim lambda_n({0}) for n = 1..n_max.
///
/// Every row splits P(X_n = 0) over {Z_n < n} and {Z_n = n}; on {Z_n < n}
/// the last flip is necessarily 0, so the first part equals mu_n(I(n-1)).
/// The routes agree up to the final step, where lim mu_n(I(n-1)) is either
/// read as a real-sequence limit (1/2) or replaced by the weak limit mu
/// evaluated on the set limit R (0).
inline TheoremReport verify_theorem(int n_max, unsigned workers = 0) {
  if (n_max < 2 || n_max > 20)
    throw Error(ErrorCode::n_range, "n_max = " + std::to_string(n_max) + " must lie in [2, 20]");
  const Rational half(1, 2);
  const auto x_last_zero = parse_event("X[N]==0");
  const auto early = parse_event("X[N]==0 && Z<N");
  const auto last = parse_event("X[N]==0 && Z==N");
  const auto z_early = parse_event("Z<N");
  const auto lower = SetFamily::lower_rays(PointSequence::shift(-1));

  TheoremReport report;
  for (int n = 1; n <= n_max; ++n) {
    TheoremRow row;
    row.n = n;
    row.lambda_n_zero = event_probability(n, half, x_last_zero, workers);
    row.p_zero_and_z_early = event_probability(n, half, early, workers);
    row.p_zero_and_z_last = event_probability(n, half, last, workers);
    row.mu_n_lower = mass_of_set(mu_closed_form(n), lower.at(n));
    if (n <= theorem_crosscheck_n) {
      row.mu_n_lower_enumerated = event_probability(n, half, z_early, workers);
      if (*row.mu_n_lower_enumerated != row.mu_n_lower || row.p_zero_and_z_early != row.mu_n_lower)
        report.crosscheck_matches = false;
    }
    report.rows.push_back(std::move(row));
  }
  const auto mu = MeasureFamily::mu();
  report.order_a_value = order_a_limit(mu, lower).value;
  report.order_b_value = order_b_limit(mu, lower, n_max).value;
  report.divergence_step =
      "lim lambda_n({0}) = lim P(X_n=0, Z_n<n) + lim P(X_n=0, Z_n=n) = lim mu_n(I(n-1)) + 0. "
      "Order (b) takes the limit of the real sequence mu_n(I(n-1)) = 1/2 - 2^-n and gets " +
      format_rational(report.order_b_value) +
      ". The final substitution lim mu_n(I(n-1)) = mu(R) applies order (a) instead: the weak limit "
      "mu = dirac(+inf) evaluated on the set limit R gives " +
      format_rational(report.order_a_value) + ". The routes part at that substitution.";
  return report;
}

}  // namespace limprob
