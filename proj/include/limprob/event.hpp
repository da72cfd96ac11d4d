#pragma once

#include <cctype>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "limprob/error.hpp"
#include "limprob/outcome.hpp"

namespace limprob {

/// Grammar (whitespace insignificant, keywords case-sensitive):
///
///   event      := disjunct { "||" disjunct }
///   disjunct   := unary { "&&" unary }
///   unary      := "!" unary | "(" event ")" | comparison
///   comparison := term ( "==" | "!=" | "<" | "<=" | ">" | ">=" ) term
///   term       := "X" "[" ( integer | "N" ) "]" | "Y" | "Z" | "N" | integer
///   integer    := [ "-" ] digit { digit }
///
/// X[i] requires i >= 1. Indices are literals or N; X[Z] is rejected.
class ParseError : public Error {
 public:
  ParseError(int line, int col, std::vector<std::string> expected, const std::string& found)
      : Error(ErrorCode::parse_error, describe(line, col, expected, found)),
        line_(line),
        col_(col),
        expected_(std::move(expected)) {}

  int line() const noexcept { return line_; }
  int col() const noexcept { return col_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  static std::string describe(int line, int col, const std::vector<std::string>& expected,
                              const std::string& found) {
    std::string msg = "line " + std::to_string(line) + ", col " + std::to_string(col) + ": found " + found +
                      ", expected one of:";
    for (const auto& e : expected) msg += " " + e;
    return msg;
  }

  int line_;
  int col_;
  std::vector<std::string> expected_;
};

struct Term {
  enum class Kind { x_index, x_last, y, z, n, literal };
  Kind kind = Kind::literal;
  long long value = 0;  // index for x_index, constant for literal

  friend bool operator==(const Term&, const Term&) = default;
};

enum class CmpOp { eq, ne, lt, le, gt, ge };

inline std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::eq: return "==";
    case CmpOp::ne: return "!=";
    case CmpOp::lt: return "<";
    case CmpOp::le: return "<=";
    case CmpOp::gt: return ">";
    case CmpOp::ge: return ">=";
  }
  return "?";
}

struct EventNode;
using EventNodePtr = std::shared_ptr<const EventNode>;

struct EventNode {
  enum class Kind { compare, conj, disj, negate };
  Kind kind = Kind::compare;
  CmpOp op = CmpOp::eq;
  Term lhs, rhs;
  EventNodePtr left, right;  // conj/disj use both, negate uses left

  static EventNodePtr compare(Term l, CmpOp op, Term r) {
    auto n = std::make_shared<EventNode>();
    n->kind = Kind::compare, n->lhs = l, n->op = op, n->rhs = r;
    return n;
  }
  static EventNodePtr conj(EventNodePtr a, EventNodePtr b) { return binary(Kind::conj, std::move(a), std::move(b)); }
  static EventNodePtr disj(EventNodePtr a, EventNodePtr b) { return binary(Kind::disj, std::move(a), std::move(b)); }
  static EventNodePtr negate(EventNodePtr a) {
    auto n = std::make_shared<EventNode>();
    n->kind = Kind::negate, n->left = std::move(a);
    return n;
  }

 private:
  static EventNodePtr binary(Kind k, EventNodePtr a, EventNodePtr b) {
    auto n = std::make_shared<EventNode>();
    n->kind = k, n->left = std::move(a), n->right = std::move(b);
    return n;
  }
};

inline bool structurally_equal(const EventNode& a, const EventNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case EventNode::Kind::compare: return a.op == b.op && a.lhs == b.lhs && a.rhs == b.rhs;
    case EventNode::Kind::negate: return structurally_equal(*a.left, *b.left);
    case EventNode::Kind::conj:
    case EventNode::Kind::disj:
      return structurally_equal(*a.left, *b.left) && structurally_equal(*a.right, *b.right);
  }
  return false;
}

namespace detail {

inline std::string print_term(const Term& t) {
  switch (t.kind) {
    case Term::Kind::x_index: return "X[" + std::to_string(t.value) + "]";
    case Term::Kind::x_last: return "X[N]";
    case Term::Kind::y: return "Y";
    case Term::Kind::z: return "Z";
    case Term::Kind::n: return "N";
    case Term::Kind::literal: return std::to_string(t.value);
  }
  return "?";
}

inline std::string print_node(const EventNode& e) {
  using K = EventNode::Kind;
  auto wrap = [](const EventNode& child, bool paren) {
    std::string s = print_node(child);
    return paren ? "(" + s + ")" : s;
  };
  switch (e.kind) {
    case K::compare: return print_term(e.lhs) + std::string(to_string(e.op)) + print_term(e.rhs);
    case K::negate: return "!" + wrap(*e.left, e.left->kind != K::negate);
    case K::conj:
      return wrap(*e.left, e.left->kind == K::disj) + " && " +
             wrap(*e.right, e.right->kind == K::disj || e.right->kind == K::conj);
    case K::disj: return wrap(*e.left, false) + " || " + wrap(*e.right, e.right->kind == K::disj);
  }
  return "?";
}

long long term_value(const Term& t, const ProcessRow& row);

inline bool eval_node(const EventNode& e, const ProcessRow& row) {
  using K = EventNode::Kind;
  switch (e.kind) {
    case K::compare: {
      const long long a = term_value(e.lhs, row);
      const long long b = term_value(e.rhs, row);
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
    case K::negate: return !eval_node(*e.left, row);
    case K::conj: return eval_node(*e.left, row) && eval_node(*e.right, row);
    case K::disj: return eval_node(*e.left, row) || eval_node(*e.right, row);
  }
  return false;
}

inline long long term_value(const Term& t, const ProcessRow& row) {
  switch (t.kind) {
    case Term::Kind::x_index:
      if (t.value > row.n())
        throw Error(ErrorCode::index_out_of_range,
                    "X[" + std::to_string(t.value) + "] on an outcome of length " + std::to_string(row.n()));
      return row.outcome.x(static_cast<int>(t.value));
    case Term::Kind::x_last: return row.outcome.x(row.n());
    case Term::Kind::y: return row.y;
    case Term::Kind::z: return row.z;
    case Term::Kind::n: return row.n();
    case Term::Kind::literal: return t.value;
  }
  return 0;
}

inline long long max_index(const EventNode& e) {
  using K = EventNode::Kind;
  auto term_index = [](const Term& t) { return t.kind == Term::Kind::x_index ? t.value : 0LL; };
  switch (e.kind) {
    case K::compare: return std::max(term_index(e.lhs), term_index(e.rhs));
    case K::negate: return max_index(*e.left);
    case K::conj:
    case K::disj: return std::max(max_index(*e.left), max_index(*e.right));
  }
  return 0;
}

class EventParser {
 public:
  explicit EventParser(std::string_view src) : src_(src) {}

  EventNodePtr parse() {
    skip_ws();
    if (at_end()) fail(start_expected(), "end of input");
    EventNodePtr e = parse_or();
    skip_ws();
    if (!at_end()) fail({"&&", "||", "end of input"}, current_desc());
    return e;
  }

 private:
  static std::vector<std::string> start_expected() { return {"!", "(", "X", "Y", "Z", "N", "integer"}; }

  EventNodePtr parse_or() {
    EventNodePtr left = parse_and();
    while (accept("||")) left = EventNode::disj(std::move(left), parse_and());
    return left;
  }

  EventNodePtr parse_and() {
    EventNodePtr left = parse_unary();
    while (accept("&&")) left = EventNode::conj(std::move(left), parse_unary());
    return left;
  }

  EventNodePtr parse_unary() {
    skip_ws();
    if (peek() == '!' && peek(1) != '=') {
      advance();
      return EventNode::negate(parse_unary());
    }
    if (peek() == '(') {
      advance();
      EventNodePtr inner = parse_or();
      if (!accept(")")) fail({")", "&&", "||"}, current_desc());
      return inner;
    }
    return parse_compare();
  }

  EventNodePtr parse_compare() {
    Term lhs = parse_term(start_expected());
    skip_ws();
    CmpOp op{};
    if (accept("==")) op = CmpOp::eq;
    else if (accept("!=")) op = CmpOp::ne;
    else if (accept("<=")) op = CmpOp::le;
    else if (accept(">=")) op = CmpOp::ge;
    else if (accept("<")) op = CmpOp::lt;
    else if (accept(">")) op = CmpOp::gt;
    else fail({"==", "!=", "<", "<=", ">", ">="}, current_desc());
    Term rhs = parse_term({"X", "Y", "Z", "N", "integer"});
    return EventNode::compare(lhs, op, rhs);
  }

  Term parse_term(const std::vector<std::string>& expected) {
    skip_ws();
    const char c = peek();
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) return Term{Term::Kind::literal, parse_integer(expected)};
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const int line = line_, col = col_;
      std::string word;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') word += advance();
      if (word == "Y") return Term{Term::Kind::y, 0};
      if (word == "Z") return Term{Term::Kind::z, 0};
      if (word == "N") return Term{Term::Kind::n, 0};
      if (word == "X") {
        if (!accept("[")) fail({"["}, current_desc());
        skip_ws();
        Term t;
        if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '-') {
          const int il = line_, ic = col_;
          const long long idx = parse_integer({"integer", "N"});
          if (idx < 1) throw ParseError(il, ic, {"integer >= 1", "N"}, "index " + std::to_string(idx));
          t = Term{Term::Kind::x_index, idx};
        } else if (peek() == 'N' && !std::isalnum(static_cast<unsigned char>(peek(1)))) {
          advance();
          t = Term{Term::Kind::x_last, 0};
        } else {
          fail({"integer", "N"}, current_desc());
        }
        if (!accept("]")) fail({"]"}, current_desc());
        return t;
      }
      throw ParseError(line, col, expected, "identifier '" + word + "'");
    }
    fail(expected, current_desc());
  }

  long long parse_integer(const std::vector<std::string>& expected) {
    const int line = line_, col = col_;
    bool neg = false;
    if (peek() == '-') {
      neg = true;
      advance();
    }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail(expected, current_desc());
    long long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      if (v > 100000000000000LL) throw ParseError(line, col, expected, "integer literal out of range");
      v = v * 10 + (advance() - '0');
    }
    return neg ? -v : v;
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (src_.substr(pos_, tok.size()) != tok) return false;
    for (std::size_t i = 0; i < tok.size(); ++i) advance();
    return true;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  bool at_end() const { return pos_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  std::string current_desc() const {
    if (at_end()) return "end of input";
    return std::string("'") + src_[pos_] + "'";
  }

  [[noreturn]] void fail(std::vector<std::string> expected, const std::string& found) const {
    throw ParseError(line_, col_, std::move(expected), found);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace detail

/// A parsed, immutable joint event over X[i], Y, Z and N.
class EventPredicate {
 public:
  explicit EventPredicate(EventNodePtr root) : root_(std::move(root)) {}

  static EventPredicate parse(std::string_view src) { return EventPredicate(detail::EventParser(src).parse()); }

  const EventNode& root() const noexcept { return *root_; }
  const EventNodePtr& root_ptr() const noexcept { return root_; }

  /// Largest literal X index referenced (0 if none).
  long long max_index() const { return detail::max_index(*root_); }

  std::string str() const { return detail::print_node(*root_); }

  bool eval(const ProcessRow& row) const { return detail::eval_node(*root_, row); }

  EventPredicate negated() const { return EventPredicate(EventNode::negate(root_)); }

  friend bool operator==(const EventPredicate& a, const EventPredicate& b) {
    return structurally_equal(*a.root_, *b.root_);
  }

 private:
  EventNodePtr root_;
};

inline EventPredicate parse_event(std::string_view src) { return EventPredicate::parse(src); }

inline bool eval_event(const EventPredicate& e, const ProcessRow& row) { return e.eval(row); }

}  // namespace limprob
