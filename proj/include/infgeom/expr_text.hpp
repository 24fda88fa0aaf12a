#pragma once

// Infix grammar shared by the parser and the printer:
//
//   list     := expr (',' expr)*
//   expr     := term (('+' | '-') term)*
//   term     := unary (('*' | '/') unary)*
//   unary    := '-' unary | power
//   power    := primary ('^' exponent)?
//   exponent := int | '-' int | '(' '-'? int ')'
//   primary  := number | <prefix><k> | fn '(' expr ')' | '(' expr ')'
//   fn       := exp | log | sin | cos | sqrt
//
// Variables are 1-based in text (x1, x2, ...) and 0-based in the tree.
// Numbers are decimal literals read exactly; "p/q" parses as a folded
// quotient, so rational literals need no special form.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "infgeom/errors.hpp"
#include "infgeom/expr.hpp"

namespace infgeom {

namespace detail {

enum Precedence { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

inline int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::add:
    case Op::sub: return kSum;
    case Op::mul:
    case Op::div: return kProduct;
    case Op::pow: return kPower;
    case Op::constant: return (e.value() < 0 || denominator(e.value()) != 1) ? kUnary : kAtom;
    default: return kAtom;
  }
}

inline std::string print(const Expr& e, const std::string& prefix) {
  auto wrap = [&](const Expr& child, int min_prec) {
    std::string s = print(child, prefix);
    return precedence(child) < min_prec ? "(" + s + ")" : s;
  };
  switch (e.op()) {
    case Op::constant: return e.value().str();
    case Op::variable: return prefix + std::to_string(e.var() + 1);
    case Op::add: return wrap(e.lhs(), kSum) + " + " + wrap(e.rhs(), kProduct);
    case Op::sub: return wrap(e.lhs(), kSum) + " - " + wrap(e.rhs(), kProduct);
    case Op::mul: return wrap(e.lhs(), kProduct) + "*" + wrap(e.rhs(), kPower);
    case Op::div: return wrap(e.lhs(), kProduct) + "/" + wrap(e.rhs(), kPower);
    case Op::pow: {
      const int k = e.exponent();
      return wrap(e.lhs(), kAtom) + "^" + (k < 0 ? "(" + std::to_string(k) + ")" : std::to_string(k));
    }
    default: return std::string(primitive_name(e.op())) + "(" + print(e.lhs(), prefix) + ")";
  }
}

class Parser {
 public:
  Parser(std::string_view text, std::string prefix, std::size_t max_vars)
      : text_(text), prefix_(std::move(prefix)), max_vars_(max_vars) {}

  Expr parse_single() {
    Expr e = parse_expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

  std::vector<Expr> parse_list() {
    std::vector<Expr> out{parse_expr()};
    skip_space();
    while (pos_ < text_.size() && text_[pos_] == ',') {
      ++pos_;
      out.push_back(parse_expr());
      skip_space();
    }
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw input_error("cannot parse expression '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + msg);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr parse_expr() {
    Expr e = parse_term();
    for (;;) {
      if (accept('+')) e = e + parse_term();
      else if (accept('-')) e = e - parse_term();
      else return e;
    }
  }

  Expr parse_term() {
    Expr e = parse_unary();
    for (;;) {
      if (accept('*')) e = e * parse_unary();
      else if (accept('/')) e = e / parse_unary();
      else return e;
    }
  }

  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (!accept('^')) return base;
    return pow(base, parse_exponent());
  }

  int parse_exponent() {
    bool paren = accept('(');
    bool negative = accept('-');
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be an integer");
    if (pos_ - start > 6) fail("exponent too large");
    int k = std::stoi(std::string(text_.substr(start, pos_ - start)));
    if (paren) expect(')');
    return negative ? -k : k;
  }

  Expr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
        ++pos_;
      return Expr(parse_rational(text_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      std::size_t digits_start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string digits(text_.substr(digits_start, pos_ - digits_start));
      if (!digits.empty()) {
        if (name != prefix_) fail("unknown variable '" + name + digits + "' (variables are " + prefix_ + "1, " + prefix_ + "2, ...)");
        if (digits.size() > 6) fail("variable index too large");
        std::size_t k = std::stoul(digits);
        if (k == 0) fail("variables are numbered from 1");
        if (max_vars_ != 0 && k > max_vars_) fail("variable " + name + digits + " exceeds dimension " + std::to_string(max_vars_));
        return var(k - 1);
      }
      static constexpr Op kPrimitives[] = {Op::exp, Op::log, Op::sin, Op::cos, Op::sqrt};
      for (Op op : kPrimitives)
        if (name == primitive_name(op)) {
          expect('(');
          Expr arg = parse_expr();
          expect(')');
          return Expr::apply(op, arg);
        }
      fail("unknown name '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::string prefix_;
  std::size_t max_vars_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Deterministic printer emitting the parser's grammar.
inline std::string to_string(const Expr& e, const std::string& prefix = "x") { return detail::print(e, prefix); }

/// max_vars = 0 accepts any variable index.
inline Expr parse_expr(std::string_view text, const std::string& prefix = "x", std::size_t max_vars = 0) {
  return detail::Parser(text, prefix, max_vars).parse_single();
}

/// Comma-separated expressions, e.g. the components of a map.
inline std::vector<Expr> parse_expr_list(std::string_view text, const std::string& prefix = "x",
                                         std::size_t max_vars = 0) {
  return detail::Parser(text, prefix, max_vars).parse_list();
}

}  // namespace infgeom
