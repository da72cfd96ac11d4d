#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "limprob/discrete_measure.hpp"
#include "limprob/event.hpp"
#include "limprob/outcome.hpp"

namespace limprob {

namespace detail {

inline void check_horizon(int n) {
  if (n > max_enumeration_n)
    throw Error(ErrorCode::n_too_large,
                "n = " + std::to_string(n) + " exceeds the enumeration cap " + std::to_string(max_enumeration_n));
  if (n < 1) throw Error(ErrorCode::domain_error, "n = " + std::to_string(n) + " must be at least 1");
}

inline void check_p(const Rational& p) {
  if (p <= 0 || p >= 1) throw Error(ErrorCode::domain_error, "p = " + format_rational(p) + " must lie in (0, 1)");
}

/// p^k (1-p)^(n-k) for k = 0..n.
inline std::vector<Rational> popcount_probabilities(int n, const Rational& p) {
  std::vector<Rational> out(static_cast<std::size_t>(n) + 1);
  const Rational q = 1 - p;
  for (int k = 0; k <= n; ++k) {
    Rational r = 1;
    for (int i = 0; i < k; ++i) r *= p;
    for (int i = k; i < n; ++i) r *= q;
    out[static_cast<std::size_t>(k)] = r;
  }
  return out;
}

inline unsigned resolve_workers(unsigned workers) {
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  return workers;
}

/// Runs body(chunk_index, begin_mask, end_mask) over a fixed partition of
/// [0, 2^n). The partition depends only on n, so per-chunk results reduced in
/// chunk order are identical for any worker count.
template <typename Body>
void for_each_chunk(int n, unsigned workers, Body&& body) {
  const std::uint64_t total = std::uint64_t{1} << n;
  const int chunk_bits = std::min(n, 6);
  const std::uint64_t chunks = std::uint64_t{1} << chunk_bits;
  const std::uint64_t chunk_size = total / chunks;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(workers), chunks));

  std::atomic<std::uint64_t> next{0};
  auto run = [&] {
    for (std::uint64_t c = next++; c < chunks; c = next++) body(c, c * chunk_size, (c + 1) * chunk_size);
  };
  if (workers <= 1) {
    run();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
}

inline std::size_t chunk_count(int n) { return std::size_t{1} << std::min(n, 6); }

}  // namespace detail

/// All 2^n rows for n i.i.d. Bernoulli(p) flips, in mask order.
inline std::vector<ProcessRow> enumerate_outcomes(int n, const Rational& p = Rational(1, 2), unsigned workers = 0) {
  detail::check_horizon(n);
  detail::check_p(p);
  const auto probs = detail::popcount_probabilities(n, p);
  std::vector<ProcessRow> rows(std::size_t{1} << n);
  detail::for_each_chunk(n, workers, [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t mask = begin; mask < end; ++mask) {
      const Outcome o{static_cast<std::uint32_t>(mask), n};
      rows[mask] = make_row(o, probs[static_cast<std::size_t>(o.ones())]);
    }
  });
  return rows;
}

/// Distribution of Z_n read off an enumerated table.
inline DiscreteMeasure induced_z_measure(const std::vector<ProcessRow>& rows) {
  std::map<int, Rational> masses;
  for (const auto& row : rows) masses[row.z] += row.prob;
  std::vector<std::pair<ExtReal, Rational>> pairs;
  for (auto& [z, m] : masses) pairs.emplace_back(ExtReal(z), m);
  return from_mass_pairs(pairs);
}

/// Distribution of X_i read off an enumerated table.
inline DiscreteMeasure induced_x_measure(const std::vector<ProcessRow>& rows, int i) {
  Rational zero = 0, one = 0;
  for (const auto& row : rows) (row.outcome.x(i) ? one : zero) += row.prob;
  return from_mass_pairs({{ExtReal(0), zero}, {ExtReal(1), one}});
}

/// Law of Z_n for the fair coin:
/// mu_n({j}) = 2^-(n-j+1) for 1 <= j < n, and 1/2 + 2^-n at j = n.
inline DiscreteMeasure mu_closed_form(int n) {
  if (n < 1) throw Error(ErrorCode::n_range, "mu_n needs n >= 1, got " + std::to_string(n));
  std::vector<std::pair<ExtReal, Rational>> pairs;
  pairs.reserve(static_cast<std::size_t>(n));
  for (int j = 1; j < n; ++j) pairs.emplace_back(ExtReal(j), pow2_neg(static_cast<unsigned>(n - j + 1)));
  pairs.emplace_back(ExtReal(n), Rational(1, 2) + pow2_neg(static_cast<unsigned>(n)));
  return from_mass_pairs(pairs);
}

/// Law of each X_i: {0: 1/2, 1: 1/2}.
inline DiscreteMeasure lambda_measure() {
  return from_mass_pairs({{ExtReal(0), Rational(1, 2)}, {ExtReal(1), Rational(1, 2)}});
}

/// Exact P(e) over the n-flip space. Matching outcomes are counted per number
/// of ones, so the sum is a short integer combination of p^k (1-p)^(n-k).
inline Rational event_probability(int n, const Rational& p, const EventPredicate& e, unsigned workers = 0) {
  detail::check_horizon(n);
  detail::check_p(p);
  if (e.max_index() > n)
    throw Error(ErrorCode::index_out_of_range, "event '" + e.str() + "' references X[" +
                                                   std::to_string(e.max_index()) + "] but n = " + std::to_string(n));
  const auto probs = detail::popcount_probabilities(n, p);
  std::vector<std::vector<std::uint64_t>> counts(detail::chunk_count(n),
                                                 std::vector<std::uint64_t>(static_cast<std::size_t>(n) + 1, 0));
  detail::for_each_chunk(n, workers, [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
    auto& local = counts[chunk];
    ProcessRow row;
    for (std::uint64_t mask = begin; mask < end; ++mask) {
      row.outcome = Outcome{static_cast<std::uint32_t>(mask), n};
      std::tie(row.y, row.z) = running_max_and_argmax(row.outcome);
      if (e.eval(row)) ++local[static_cast<std::size_t>(row.outcome.ones())];
    }
  });
  Rational result = 0;
  for (std::size_t k = 0; k <= static_cast<std::size_t>(n); ++k) {
    std::uint64_t c = 0;
    for (const auto& local : counts) c += local[k];
    if (c) result += Rational(BigInt(c)) * probs[k];
  }
  return result;
}

inline Rational event_probability(int n, const Rational& p, std::string_view event_src, unsigned workers = 0) {
  return event_probability(n, p, parse_event(event_src), workers);
}

struct IdentityReport {
  int n = 0;
  std::uint64_t rows_checked = 0;
  bool z_at_most_n = true;           // Z_n <= n
  bool x_at_z_equals_y = true;       // X_{Z_n} = Y_n
  bool last_zero_when_z_early = true;  // {X_n = 0, Z_n < n} = {Z_n < n}
  std::vector<std::string> violations;  // outcome strings, capped
  Rational p_z_lt_n;                 // P(Z_n < n)
  Rational p_x_last_zero_z_lt_n;     // P(X_n = 0, Z_n < n)

  bool all_hold() const { return z_at_most_n && x_at_z_equals_y && last_zero_when_z_early; }
};

inline IdentityReport verify_process_identities(int n, const Rational& p = Rational(1, 2)) {
  constexpr std::size_t max_listed = 16;
  detail::check_horizon(n);
  detail::check_p(p);
  const auto probs = detail::popcount_probabilities(n, p);
  IdentityReport r;
  r.n = n;
  std::vector<std::uint64_t> early(static_cast<std::size_t>(n) + 1, 0), early_zero(early);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const Outcome o{static_cast<std::uint32_t>(mask), n};
    const auto [y, z] = running_max_and_argmax(o);
    ++r.rows_checked;
    bool ok = true;
    if (z > n) r.z_at_most_n = ok = false;
    if (z >= 1 && z <= n && o.x(z) != y) r.x_at_z_equals_y = ok = false;
    const bool z_early = z < n;
    const bool last_zero = o.x(n) == 0;
    if (z_early != (last_zero && z_early)) r.last_zero_when_z_early = ok = false;
    if (z_early) ++early[static_cast<std::size_t>(o.ones())];
    if (z_early && last_zero) ++early_zero[static_cast<std::size_t>(o.ones())];
    if (!ok && r.violations.size() < max_listed) r.violations.push_back(o.str());
  }
  for (std::size_t k = 0; k <= static_cast<std::size_t>(n); ++k) {
    r.p_z_lt_n += Rational(BigInt(early[k])) * probs[k];
    r.p_x_last_zero_z_lt_n += Rational(BigInt(early_zero[k])) * probs[k];
  }
  return r;
}

/// (k, mu_n({n-k})) for k = 0..k_max.
inline std::vector<std::pair<int, Rational>> escaped_mass_profile(int n, int k_max) {
  if (n < 1) throw Error(ErrorCode::n_range, "n must be at least 1");
  if (k_max < 0 || k_max >= n)
    throw Error(ErrorCode::k_range, "k_max = " + std::to_string(k_max) + " must satisfy 0 <= k_max < n = " +
                                        std::to_string(n));
  const DiscreteMeasure mu = mu_closed_form(n);
  std::vector<std::pair<int, Rational>> out;
  for (int k = 0; k <= k_max; ++k) out.emplace_back(k, mu.mass_at(ExtReal(n - k)));
  return out;
}

}  // namespace limprob
