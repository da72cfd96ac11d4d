#include <catch2/catch_amalgamated.hpp>

#include "limprob/process.hpp"
#include "oracles.hpp"

using namespace limprob;

namespace {

Rational q(long long a, long long b = 1) { return Rational(a, b); }

DiscreteMeasure oracle_mu(int n, const Rational& p = q(1, 2)) {
  std::vector<std::pair<ExtReal, Rational>> pairs;
  for (const auto& [z, m] : oracle::z_distribution(n, p)) pairs.emplace_back(ExtReal(z), m);
  return from_mass_pairs(pairs);
}

}  // namespace

TEST_CASE("enumerate_outcomes at n = 1", "[process]") {
  const auto rows = enumerate_outcomes(1, q(1, 2));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].outcome.str() == "0");
  CHECK(rows[0].y == 0);
  CHECK(rows[0].z == 1);
  CHECK(rows[1].outcome.str() == "1");
  CHECK(rows[1].y == 1);
  CHECK(rows[1].z == 1);
}

TEST_CASE("induced Z_n laws for small n", "[process]") {
  CHECK(induced_z_measure(enumerate_outcomes(2)) == from_mass_pairs({{ExtReal(1), q(1, 4)}, {ExtReal(2), q(3, 4)}}));
  CHECK(induced_z_measure(enumerate_outcomes(3)) ==
        from_mass_pairs({{ExtReal(1), q(1, 8)}, {ExtReal(2), q(1, 4)}, {ExtReal(3), q(5, 8)}}));
}

TEST_CASE("rows agree with the path oracle", "[process]") {
  for (int n = 1; n <= 10; ++n) {
    const auto rows = enumerate_outcomes(n, q(1, 3));
    REQUIRE(rows.size() == (std::size_t{1} << n));
    Rational total = 0;
    std::size_t i = 0;
    oracle::for_each_path(n, q(1, 3), [&](const oracle::Path& path, const Rational& prob) {
      const auto& row = rows[i++];
      CHECK(row.prob == prob);
      CHECK(row.y == path.y());
      CHECK(row.z == path.z());
      CHECK(row.z <= n);
      CHECK(row.outcome.x(row.z) == row.y);
      total += row.prob;
    });
    CHECK(total == 1);
  }
}

TEST_CASE("probabilities normalize for any rational p", "[process][property]") {
  for (const Rational& p : {q(1, 2), q(1, 3), q(2, 7), q(99, 100), q(1, 1000)})
    for (int n : {1, 5, 9}) {
      Rational total = 0;
      for (const auto& row : enumerate_outcomes(n, p)) {
        CHECK(row.prob > 0);
        total += row.prob;
      }
      CHECK(total == 1);
    }
}

TEST_CASE("enumeration guards", "[process]") {
  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::domain_error;
  };
  CHECK(code_of([] { enumerate_outcomes(25); }) == ErrorCode::n_too_large);
  CHECK(code_of([] { enumerate_outcomes(0); }) == ErrorCode::domain_error);
  CHECK(code_of([] { enumerate_outcomes(3, q(0)); }) == ErrorCode::domain_error);
  CHECK(code_of([] { enumerate_outcomes(3, q(1)); }) == ErrorCode::domain_error);
  CHECK(code_of([] { verify_process_identities(30); }) == ErrorCode::n_too_large);
}

TEST_CASE("worker count does not change the table", "[process]") {
  const auto one = enumerate_outcomes(14, q(1, 3), 1);
  const auto four = enumerate_outcomes(14, q(1, 3), 4);
  CHECK(one == four);
  const auto e = parse_event("Z<N || X[3]==1");
  CHECK(event_probability(16, q(2, 5), e, 1) == event_probability(16, q(2, 5), e, 7));
}

TEST_CASE("mu_closed_form", "[process]") {
  CHECK(mu_closed_form(3) == from_mass_pairs({{ExtReal(1), q(1, 8)}, {ExtReal(2), q(1, 4)}, {ExtReal(3), q(5, 8)}}));
  CHECK(mu_closed_form(1) == dirac(ExtReal(1)));
  CHECK(mu_closed_form(12) == induced_z_measure(enumerate_outcomes(12)));
  for (int n = 1; n <= 12; ++n) CHECK(mu_closed_form(n) == oracle_mu(n));
  for (int n = 1; n <= 60; ++n) CHECK(mu_closed_form(n).total() == 1);
  CHECK_THROWS_AS(mu_closed_form(0), Error);
}

TEST_CASE("the closed form does not describe a biased coin", "[process]") {
  CHECK_FALSE(induced_z_measure(enumerate_outcomes(4, q(1, 3))) == mu_closed_form(4));
  CHECK(induced_z_measure(enumerate_outcomes(4, q(1, 3))) == oracle_mu(4, q(1, 3)));
}

TEST_CASE("lambda_measure is the marginal of each flip", "[process]") {
  CHECK(lambda_measure().mass_at(ExtReal(0)) == q(1, 2));
  CHECK(lambda_measure().total() == 1);
  for (int n = 1; n <= 10; ++n) {
    const auto rows = enumerate_outcomes(n);
    CHECK(induced_x_measure(rows, n) == lambda_measure());
    CHECK(induced_x_measure(rows, 1) == lambda_measure());
  }
}

TEST_CASE("event_probability", "[process]") {
  CHECK(event_probability(5, q(1, 2), "X[N]==0") == q(1, 2));
  CHECK(event_probability(4, q(1, 2), "Z<=N") == 1);
  // Only the all-zero sequence has X_n = 0 and Z_n = n.
  const auto oracle_value =
      oracle::probability(6, q(1, 2), [](const oracle::Path& p) { return p.x[6] == 0 && p.z() == 6; });
  CHECK(oracle_value == q(1, 64));
  CHECK(event_probability(6, q(1, 2), "X[N]==0 && Z==N") == oracle_value);

  try {
    event_probability(3, q(1, 2), "X[4]==1");
    FAIL("expected IndexOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::index_out_of_range);
  }
}

TEST_CASE("event probabilities match the path oracle", "[process][property]") {
  struct Case {
    const char* src;
    std::function<bool(const oracle::Path&)> ref;
  };
  const std::vector<Case> cases{
      {"Y==0", [](const oracle::Path& p) { return p.y() == 0; }},
      {"X[1]==1 && X[2]==0", [](const oracle::Path& p) { return p.x[1] == 1 && p.x[2] == 0; }},
      {"Z>=2 || !(Y==1)", [](const oracle::Path& p) { return p.z() >= 2 || p.y() != 1; }},
      {"Z!=N && X[N]>=1", [](const oracle::Path& p) { return p.z() != p.n && p.x[static_cast<std::size_t>(p.n)] >= 1; }},
  };
  for (const auto& c : cases)
    for (int n = 2; n <= 9; ++n)
      for (const Rational& p : {q(1, 2), q(1, 5)}) {
        const auto e = parse_event(c.src);
        const Rational value = event_probability(n, p, e);
        CHECK(value == oracle::probability(n, p, c.ref));
        CHECK(value + event_probability(n, p, e.negated()) == 1);
      }
}

TEST_CASE("decomposition of P(X_n = 0) over the argmax index", "[process]") {
  for (int n = 1; n <= 14; ++n) {
    const Rational early = event_probability(n, q(1, 2), "X[N]==0 && Z<N");
    const Rational last = event_probability(n, q(1, 2), "X[N]==0 && Z==N");
    CHECK(early == q(1, 2) - pow2_neg(n));
    CHECK(last == pow2_neg(n));
    CHECK(event_probability(n, q(1, 2), "X[N]==0") == early + last);
  }
}

TEST_CASE("P(Y_n = 0) = 2^-n, decreasing", "[process]") {
  Rational prev = 1;
  for (int n = 1; n <= 16; ++n) {
    const Rational v = event_probability(n, q(1, 2), "Y==0");
    CHECK(v == pow2_neg(n));
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("the running max and argmax never decrease along a path", "[process][property]") {
  for (int n = 1; n <= 12; ++n)
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask)
      for (std::uint32_t next : {0U, 1U}) {
        const Outcome shorter{mask, n};
        const Outcome longer{mask | (next << n), n + 1};
        const auto [y1, z1] = running_max_and_argmax(shorter);
        const auto [y2, z2] = running_max_and_argmax(longer);
        CHECK(y2 >= y1);
        CHECK(z2 >= z1);
      }
}

TEST_CASE("verify_process_identities", "[process]") {
  const auto r3 = verify_process_identities(3);
  CHECK(r3.rows_checked == 8);
  CHECK(r3.all_hold());
  CHECK(r3.violations.empty());

  const auto r1 = verify_process_identities(1);
  CHECK(r1.all_hold());
  CHECK(r1.p_z_lt_n == 0);

  const auto r10 = verify_process_identities(10);
  CHECK(r10.all_hold());
  CHECK(r10.p_z_lt_n == q(1, 2) - pow2_neg(10));
  CHECK(r10.p_x_last_zero_z_lt_n == r10.p_z_lt_n);
  CHECK(r10.p_z_lt_n == mass_of_set(mu_closed_form(10), MeasurableSet::lower_ray(ExtReal(9))));
}

TEST_CASE("escaped_mass_profile", "[process]") {
  const auto prof = escaped_mass_profile(10, 9);
  CHECK(prof[0].second == q(1, 2) + q(1, 1024));
  CHECK(prof[1].second == q(1, 4));
  CHECK(prof[2].second == q(1, 8));
  for (int n = 2; n <= 20; ++n)
    for (const auto& [k, m] : escaped_mass_profile(n, n - 1))
      if (k >= 1) CHECK(m == pow2_neg(k + 1));

  Rational partial = 0;
  for (const auto& [k, m] : escaped_mass_profile(40, 9)) partial += m;
  CHECK(partial == 1 - pow2_neg(10) + pow2_neg(40));

  CHECK_THROWS_AS(escaped_mass_profile(5, 5), Error);
  CHECK_THROWS_AS(escaped_mass_profile(5, -1), Error);
  try {
    escaped_mass_profile(3, 7);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::k_range);
  }
}
