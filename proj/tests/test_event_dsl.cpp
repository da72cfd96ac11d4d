#include <catch2/catch_amalgamated.hpp>

#include "limprob/process.hpp"
#include "oracles.hpp"

using namespace limprob;

namespace {

using K = EventNode::Kind;

Term tx(long long i) { return Term{Term::Kind::x_index, i}; }
Term tlast() { return Term{Term::Kind::x_last, 0}; }
Term ty() { return Term{Term::Kind::y, 0}; }
Term tz() { return Term{Term::Kind::z, 0}; }
Term tn() { return Term{Term::Kind::n, 0}; }
Term lit(long long v) { return Term{Term::Kind::literal, v}; }

ParseError parse_failure(std::string_view src) {
  try {
    parse_event(src);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error for: " << src);
  throw std::logic_error("unreachable");
}

bool expects(const ParseError& e, const std::string& tok) {
  return std::find(e.expected().begin(), e.expected().end(), tok) != e.expected().end();
}

Term random_term(int max_index) {
  switch (oracle::uniform_int(0, 5)) {
    case 0: return tx(oracle::uniform_int(1, max_index));
    case 1: return tlast();
    case 2: return ty();
    case 3: return tz();
    case 4: return tn();
    default: return lit(oracle::uniform_int(-2, 6));
  }
}

EventNodePtr random_event(int depth, int max_index) {
  if (depth == 0 || oracle::uniform_int(0, 3) == 0)
    return EventNode::compare(random_term(max_index), static_cast<CmpOp>(oracle::uniform_int(0, 5)),
                              random_term(max_index));
  switch (oracle::uniform_int(0, 2)) {
    case 0: return EventNode::conj(random_event(depth - 1, max_index), random_event(depth - 1, max_index));
    case 1: return EventNode::disj(random_event(depth - 1, max_index), random_event(depth - 1, max_index));
    default: return EventNode::negate(random_event(depth - 1, max_index));
  }
}

}  // namespace

TEST_CASE("a single comparison", "[event_dsl]") {
  const auto e = parse_event("X[N]==0");
  CHECK(e.root().kind == K::compare);
  CHECK(e.root().lhs == tlast());
  CHECK(e.root().op == CmpOp::eq);
  CHECK(e.root().rhs == lit(0));
  CHECK(e.str() == "X[N]==0");
  CHECK(e.max_index() == 0);
}

TEST_CASE("conjunction binds tighter than disjunction", "[event_dsl]") {
  const auto e = parse_event("Y==1 || Z<3 && X[2]!=0");
  const auto expected = EventNode::disj(
      EventNode::compare(ty(), CmpOp::eq, lit(1)),
      EventNode::conj(EventNode::compare(tz(), CmpOp::lt, lit(3)), EventNode::compare(tx(2), CmpOp::ne, lit(0))));
  CHECK(structurally_equal(e.root(), *expected));
  CHECK(e.max_index() == 2);
  CHECK(e.str() == "Y==1 || Z<3 && X[2]!=0");
}

TEST_CASE("binary operators associate to the left", "[event_dsl]") {
  const auto e = parse_event("Y==0 && Y==1 && Y==2");
  REQUIRE(e.root().kind == K::conj);
  CHECK(e.root().left->kind == K::conj);
  CHECK(e.root().right->kind == K::compare);
  const auto grouped = parse_event("Y==0 && (Y==1 && Y==2)");
  CHECK_FALSE(e == grouped);
  CHECK(grouped.str() == "Y==0 && (Y==1 && Y==2)");
}

TEST_CASE("negation binds tightest", "[event_dsl]") {
  const auto e = parse_event("!Y==1 && Z>=2");
  REQUIRE(e.root().kind == K::conj);
  CHECK(e.root().left->kind == K::negate);
  CHECK(e.str() == "!(Y==1) && Z>=2");
  CHECK(parse_event("!!Y==1").str() == "!!(Y==1)");
  CHECK(parse_event("!(Y==1 || Z==1)").root().left->kind == K::disj);
}

TEST_CASE("whitespace and newlines are insignificant", "[event_dsl]") {
  CHECK(parse_event("  X[ 3 ] <= \n N\t|| Y==-1 ") == parse_event("X[3]<=N || Y==-1"));
  CHECK(parse_event("Y != 1") == parse_event("Y!=1"));
}

TEST_CASE("the printer round-trips random trees", "[event_dsl][property]") {
  for (int trial = 0; trial < 500; ++trial) {
    const EventPredicate e(random_event(5, 6));
    const auto printed = e.str();
    const auto reparsed = parse_event(printed);
    CHECK(reparsed == e);
    CHECK(reparsed.str() == printed);
  }
}

TEST_CASE("X[Z] is rejected", "[event_dsl]") {
  const auto e = parse_failure("X[Z]==1");
  CHECK(e.code() == ErrorCode::parse_error);
  CHECK(e.line() == 1);
  CHECK(e.col() == 3);
  CHECK(expects(e, "integer"));
  CHECK(expects(e, "N"));
}

TEST_CASE("X indices start at 1", "[event_dsl]") {
  const auto e = parse_failure("X[0]==1");
  CHECK(e.col() == 3);
  CHECK(expects(e, "N"));
  CHECK_THROWS_AS(parse_event("X[-2]==1"), ParseError);
}

TEST_CASE("error positions across lines", "[event_dsl]") {
  const auto e = parse_failure("Y==1 &&\n  Z =< 2");
  CHECK(e.line() == 2);
  CHECK(e.col() == 5);
  CHECK(expects(e, "<="));
  CHECK(expects(e, "=="));

  const auto trailing = parse_failure("Y==1 Z==2");
  CHECK(trailing.col() == 6);
  CHECK(expects(trailing, "&&"));
  CHECK(expects(trailing, "||"));

  const auto unclosed = parse_failure("(Y==1");
  CHECK(expects(unclosed, ")"));
  CHECK(unclosed.col() == 6);

  const auto empty = parse_failure("   ");
  CHECK(expects(empty, "X"));
  CHECK(expects(empty, "!"));
}

TEST_CASE("keywords are case-sensitive", "[event_dsl]") {
  const auto e = parse_failure("y==1");
  CHECK(e.col() == 1);
  CHECK(expects(e, "Y"));
  CHECK_THROWS_AS(parse_event("x[1]==0"), ParseError);
  CHECK_THROWS_AS(parse_event("X[n]==0"), ParseError);
  CHECK_THROWS_AS(parse_event("Y==1 and Z==1"), ParseError);
}

TEST_CASE("parse errors carry the error code", "[event_dsl]") {
  try {
    parse_event("Y==");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse_error);
    CHECK(std::string(e.what()).find("end of input") != std::string::npos);
  }
}

TEST_CASE("evaluation on single rows", "[event_dsl]") {
  const auto row = make_row(Outcome{0b0110, 4}, Rational(1, 16));  // bits 0,1,1,0
  CHECK(row.y == 1);
  CHECK(row.z == 3);
  CHECK(eval_event(parse_event("X[N]==0 && Z<N"), row));
  CHECK(eval_event(parse_event("X[2]==1 && X[3]==1"), row));
  CHECK_FALSE(eval_event(parse_event("X[1]==1"), row));
  CHECK(eval_event(parse_event("N==4 && Y>0 && Z==3"), row));

  const auto zero = make_row(Outcome{0, 5}, Rational(1, 32));
  CHECK(zero.z == 5);
  CHECK(eval_event(parse_event("Y==0 && Z==N"), zero));

  try {
    eval_event(parse_event("X[5]==1"), row);
    FAIL("expected IndexOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::index_out_of_range);
  }
}

TEST_CASE("evaluation agrees with the path oracle on random events", "[event_dsl][property]") {
  auto ref_term = [](const Term& t, const oracle::Path& p) -> long long {
    switch (t.kind) {
      case Term::Kind::x_index: return p.x[static_cast<std::size_t>(t.value)];
      case Term::Kind::x_last: return p.x[static_cast<std::size_t>(p.n)];
      case Term::Kind::y: return p.y();
      case Term::Kind::z: return p.z();
      case Term::Kind::n: return p.n;
      case Term::Kind::literal: return t.value;
    }
    return 0;
  };
  std::function<bool(const EventNode&, const oracle::Path&)> ref = [&](const EventNode& e, const oracle::Path& p) {
    switch (e.kind) {
      case K::compare: {
        const long long a = ref_term(e.lhs, p), b = ref_term(e.rhs, p);
        switch (e.op) {
          case CmpOp::eq: return a == b;
          case CmpOp::ne: return a != b;
          case CmpOp::lt: return a < b;
          case CmpOp::le: return a <= b;
          case CmpOp::gt: return a > b;
          case CmpOp::ge: return a >= b;
        }
        return false;
      }
      case K::negate: return !ref(*e.left, p);
      case K::conj: return ref(*e.left, p) && ref(*e.right, p);
      case K::disj: return ref(*e.left, p) || ref(*e.right, p);
    }
    return false;
  };
  for (int trial = 0; trial < 60; ++trial) {
    const int n = oracle::uniform_int(3, 7);
    const EventPredicate e(random_event(4, n));
    const auto rows = enumerate_outcomes(n);
    std::size_t i = 0;
    oracle::for_each_path(n, Rational(1, 2), [&](const oracle::Path& p, const Rational&) {
      CHECK(e.eval(rows[i++]) == ref(e.root(), p));
    });
  }
}

TEST_CASE("De Morgan laws hold under evaluation", "[event_dsl][property]") {
  for (int trial = 0; trial < 100; ++trial) {
    const int n = oracle::uniform_int(2, 6);
    const auto a = random_event(3, n), b = random_event(3, n);
    const EventPredicate lhs(EventNode::negate(EventNode::conj(a, b)));
    const EventPredicate rhs(EventNode::disj(EventNode::negate(a), EventNode::negate(b)));
    const EventPredicate lhs2(EventNode::negate(EventNode::disj(a, b)));
    const EventPredicate rhs2(EventNode::conj(EventNode::negate(a), EventNode::negate(b)));
    for (const auto& row : enumerate_outcomes(n)) {
      CHECK(lhs.eval(row) == rhs.eval(row));
      CHECK(lhs2.eval(row) == rhs2.eval(row));
    }
    CHECK(event_probability(n, Rational(1, 3), lhs) == event_probability(n, Rational(1, 3), rhs));
  }
}
