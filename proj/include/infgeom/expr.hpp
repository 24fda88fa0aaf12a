#pragma once

// Smooth-function models as expression trees. Constants are exact rationals;
// evaluation is templated on the scalar domain, and the analytic primitives
// (exp, log, sin, cos, sqrt) are only evaluable in float mode.
//
// Constructors fold constants and drop neutral elements; no other
// simplification is attempted.

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "infgeom/errors.hpp"
#include "infgeom/polynomial.hpp"
#include "infgeom/scalar.hpp"

namespace infgeom {

enum class Op { constant, variable, add, sub, mul, div, pow, exp, log, sin, cos, sqrt };

inline bool is_primitive(Op op) { return op >= Op::exp; }

inline const char* primitive_name(Op op) {
  switch (op) {
    case Op::exp: return "exp";
    case Op::log: return "log";
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    case Op::sqrt: return "sqrt";
    default: return "";
  }
}

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  Op op = Op::constant;
  Rational value;
  std::size_t var = 0;
  int exponent = 0;
  NodePtr a;
  NodePtr b;
};

class Expr {
 public:
  Expr() : Expr(Rational(0)) {}
  Expr(const Rational& c) : node_(leaf_constant(c)) {}  // NOLINT: constants convert implicitly
  Expr(int c) : Expr(Rational(c)) {}                    // NOLINT

  static Expr variable(std::size_t index) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::variable;
    n->var = index;
    return Expr(std::move(n));
  }

  static Expr apply(Op primitive, const Expr& arg) {
    if (!is_primitive(primitive)) throw std::invalid_argument("not a primitive");
    return make(primitive, arg, nullptr);
  }

  static Expr power(const Expr& base, int exponent) {
    if (exponent == 0) return Expr(1);
    if (exponent == 1) return base;
    if (base.is_constant()) {
      const Rational& c = base.value();
      if (!c.is_zero() || exponent > 0) return Expr(rational_pow(c, exponent));
    }
    auto n = std::make_shared<ExprNode>();
    n->op = Op::pow;
    n->a = base.node_;
    n->exponent = exponent;
    return Expr(std::move(n));
  }

  Op op() const { return node_->op; }
  const Rational& value() const { return node_->value; }
  std::size_t var() const { return node_->var; }
  int exponent() const { return node_->exponent; }
  Expr lhs() const { return Expr(node_->a); }
  Expr rhs() const { return Expr(node_->b); }

  bool is_constant() const { return op() == Op::constant; }
  bool is_constant(const Rational& c) const { return is_constant() && value() == c; }

  friend Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return Expr(a.value() + b.value());
    if (a.is_constant(0)) return b;
    if (b.is_constant(0)) return a;
    return make(Op::add, a, b.node_);
  }
  friend Expr operator-(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return Expr(a.value() - b.value());
    if (b.is_constant(0)) return a;
    return make(Op::sub, a, b.node_);
  }
  friend Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return Expr(a.value() * b.value());
    if (a.is_constant(0) || b.is_constant(0)) return Expr(0);
    if (a.is_constant(1)) return b;
    if (b.is_constant(1)) return a;
    return make(Op::mul, a, b.node_);
  }
  friend Expr operator/(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant() && !b.value().is_zero()) return Expr(a.value() / b.value());
    if (b.is_constant(1)) return a;
    return make(Op::div, a, b.node_);
  }
  friend Expr operator-(const Expr& a) {
    if (a.is_constant()) return Expr(Rational(-a.value()));
    return Expr(-1) * a;
  }

  /// Node identity, for memoization keyed on shared subtrees.
  const ExprNode* id() const { return node_.get(); }

 private:
  explicit Expr(NodePtr node) : node_(std::move(node)) {}

  static NodePtr leaf_constant(const Rational& c) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::constant;
    n->value = c;
    return n;
  }

  static Expr make(Op op, const Expr& a, NodePtr b) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->a = a.node_;
    n->b = std::move(b);
    return Expr(std::move(n));
  }

  static Rational rational_pow(const Rational& c, int k) {
    Rational r = 1;
    const Rational base = k < 0 ? Rational(1 / c) : c;
    for (int i = 0; i < std::abs(k); ++i) r *= base;
    return r;
  }

  NodePtr node_;
};

inline Expr var(std::size_t index) { return Expr::variable(index); }
inline Expr pow(const Expr& e, int k) { return Expr::power(e, k); }
inline Expr exp(const Expr& e) { return Expr::apply(Op::exp, e); }
inline Expr log(const Expr& e) { return Expr::apply(Op::log, e); }
inline Expr sin(const Expr& e) { return Expr::apply(Op::sin, e); }
inline Expr cos(const Expr& e) { return Expr::apply(Op::cos, e); }
inline Expr sqrt(const Expr& e) { return Expr::apply(Op::sqrt, e); }

/// Symbolic partial derivative with respect to variable i.
inline Expr diff(const Expr& e, std::size_t i) {
  switch (e.op()) {
    case Op::constant: return Expr(0);
    case Op::variable: return Expr(e.var() == i ? 1 : 0);
    case Op::add: return diff(e.lhs(), i) + diff(e.rhs(), i);
    case Op::sub: return diff(e.lhs(), i) - diff(e.rhs(), i);
    case Op::mul: return diff(e.lhs(), i) * e.rhs() + e.lhs() * diff(e.rhs(), i);
    case Op::div: {
      const Expr a = e.lhs(), b = e.rhs();
      const Expr da = diff(a, i), db = diff(b, i);
      if (db.is_constant(0)) return da / b;
      return (da * b - a * db) / pow(b, 2);
    }
    case Op::pow: {
      const Expr da = diff(e.lhs(), i);
      if (da.is_constant(0)) return Expr(0);
      return Expr(e.exponent()) * pow(e.lhs(), e.exponent() - 1) * da;
    }
    case Op::exp: return e * diff(e.lhs(), i);
    case Op::log: return diff(e.lhs(), i) / e.lhs();
    case Op::sin: return cos(e.lhs()) * diff(e.lhs(), i);
    case Op::cos: return -(sin(e.lhs()) * diff(e.lhs(), i));
    case Op::sqrt: {
      const Expr da = diff(e.lhs(), i);
      if (da.is_constant(0)) return Expr(0);
      return da / (Expr(2) * e);
    }
  }
  throw std::logic_error("unknown expression node");
}

/// Replaces variable i by replacements[i].
inline Expr substitute(const Expr& e, std::span<const Expr> replacements) {
  switch (e.op()) {
    case Op::constant: return e;
    case Op::variable:
      if (e.var() >= replacements.size()) throw input_error("substitution is missing variable x" + std::to_string(e.var() + 1));
      return replacements[e.var()];
    case Op::add: return substitute(e.lhs(), replacements) + substitute(e.rhs(), replacements);
    case Op::sub: return substitute(e.lhs(), replacements) - substitute(e.rhs(), replacements);
    case Op::mul: return substitute(e.lhs(), replacements) * substitute(e.rhs(), replacements);
    case Op::div: return substitute(e.lhs(), replacements) / substitute(e.rhs(), replacements);
    case Op::pow: return pow(substitute(e.lhs(), replacements), e.exponent());
    default: return Expr::apply(e.op(), substitute(e.lhs(), replacements));
  }
}

/// Point evaluation. Division by zero and primitives outside their domain of
/// analyticity raise precondition_error; primitives in exact mode raise
/// input_error.
template <Scalar S>
S eval(const Expr& e, std::span<const S> point) {
  switch (e.op()) {
    case Op::constant: return from_rational<S>(e.value());
    case Op::variable:
      if (e.var() >= point.size()) throw input_error("expression uses x" + std::to_string(e.var() + 1) + " beyond the point dimension");
      return point[e.var()];
    case Op::add: return eval<S>(e.lhs(), point) + eval<S>(e.rhs(), point);
    case Op::sub: return eval<S>(e.lhs(), point) - eval<S>(e.rhs(), point);
    case Op::mul: return eval<S>(e.lhs(), point) * eval<S>(e.rhs(), point);
    case Op::div: {
      S den = eval<S>(e.rhs(), point);
      if (den == S(0)) throw precondition_error("division by zero at the evaluation point");
      return eval<S>(e.lhs(), point) / den;
    }
    case Op::pow: {
      S base = eval<S>(e.lhs(), point);
      const int k = e.exponent();
      if (k < 0 && base == S(0)) throw precondition_error("negative power of zero at the evaluation point");
      S r(1);
      const S b = k < 0 ? S(S(1) / base) : base;
      for (int i = 0; i < std::abs(k); ++i) r *= b;
      return r;
    }
    default: break;
  }
  if constexpr (is_exact_v<S>) {
    throw input_error(std::string("analytic primitive '") + primitive_name(e.op()) + "' requires float mode");
  } else {
    const double x = eval<S>(e.lhs(), point);
    switch (e.op()) {
      case Op::exp: return std::exp(x);
      case Op::sin: return std::sin(x);
      case Op::cos: return std::cos(x);
      case Op::log:
        if (!(x > 0)) throw precondition_error("log outside its domain at the evaluation point");
        return std::log(x);
      case Op::sqrt:
        if (!(x > 0)) throw precondition_error("sqrt is not analytic at a non-positive argument");
        return std::sqrt(x);
      default: throw std::logic_error("unknown primitive");
    }
  }
}

template <Scalar S>
S eval(const Expr& e, const std::vector<S>& point) {
  return eval<S>(e, std::span<const S>(point));
}

inline bool uses_primitives(const Expr& e) {
  switch (e.op()) {
    case Op::constant:
    case Op::variable: return false;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: return uses_primitives(e.lhs()) || uses_primitives(e.rhs());
    case Op::pow: return uses_primitives(e.lhs());
    default: return true;
  }
}

/// One past the largest variable index used (0 for constants).
inline std::size_t arity(const Expr& e) {
  switch (e.op()) {
    case Op::constant: return 0;
    case Op::variable: return e.var() + 1;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: return std::max(arity(e.lhs()), arity(e.rhs()));
    default: return arity(e.lhs());
  }
}

/// Expands a polynomial expression; nullopt when e is not a polynomial
/// (primitives, negative powers, division by a non-constant).
inline std::optional<Polynomial<Rational>> to_polynomial(const Expr& e, std::size_t n) {
  switch (e.op()) {
    case Op::constant: return Polynomial<Rational>::constant(n, e.value());
    case Op::variable:
      if (e.var() >= n) return std::nullopt;
      return Polynomial<Rational>::variable(n, e.var());
    case Op::add:
    case Op::sub:
    case Op::mul: {
      auto a = to_polynomial(e.lhs(), n), b = to_polynomial(e.rhs(), n);
      if (!a || !b) return std::nullopt;
      if (e.op() == Op::add) return *a + *b;
      if (e.op() == Op::sub) return *a - *b;
      return *a * *b;
    }
    case Op::div: {
      auto a = to_polynomial(e.lhs(), n);
      const Expr den = e.rhs();
      if (!a || !den.is_constant() || den.value().is_zero()) return std::nullopt;
      return Rational(1 / den.value()) * *a;
    }
    case Op::pow: {
      if (e.exponent() < 0) return std::nullopt;
      auto a = to_polynomial(e.lhs(), n);
      if (!a) return std::nullopt;
      auto r = Polynomial<Rational>::constant(n, 1);
      for (int k = 0; k < e.exponent(); ++k) r = r * *a;
      return r;
    }
    default: return std::nullopt;
  }
}

inline Expr from_polynomial(const Polynomial<Rational>& p) {
  Expr sum(0);
  for (const auto& [m, c] : p.terms()) {
    Expr term(c);
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i] > 0) term = term * pow(var(i), static_cast<int>(m[i]));
    sum = sum + term;
  }
  return sum;
}

/// A map R^n_in -> R^n_out given by one expression per output coordinate.
class FunctionModel {
 public:
  FunctionModel() = default;
  FunctionModel(std::size_t n_in, std::vector<Expr> components) : n_in_(n_in), components_(std::move(components)) {
    for (const auto& c : components_)
      if (arity(c) > n_in_) throw input_error("component uses a variable beyond the input dimension");
  }

  std::size_t n_in() const { return n_in_; }
  std::size_t n_out() const { return components_.size(); }
  const std::vector<Expr>& components() const { return components_; }
  const Expr& operator[](std::size_t i) const { return components_[i]; }

  /// (this o inner)(y) = this(inner(y)).
  FunctionModel compose(const FunctionModel& inner) const {
    if (inner.n_out() != n_in_) throw input_error("composition dimension mismatch");
    std::vector<Expr> out;
    for (const auto& c : components_) out.push_back(substitute(c, inner.components_));
    return FunctionModel(inner.n_in(), std::move(out));
  }

  template <Scalar S>
  std::vector<S> eval(std::span<const S> point) const {
    std::vector<S> out;
    for (const auto& c : components_) out.push_back(infgeom::eval<S>(c, point));
    return out;
  }

 private:
  std::size_t n_in_ = 0;
  std::vector<Expr> components_;
};

}  // namespace infgeom
