#pragma once

// Distributions at 0 with finite support, written as polynomials in the
// symbols d1..dn: the monomial d^a stands for f -> (∂^a f)(0).

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "infgeom/errors.hpp"
#include "infgeom/expr.hpp"
#include "infgeom/expr_text.hpp"
#include "infgeom/linalg.hpp"
#include "infgeom/polynomial.hpp"
#include "infgeom/weil_algebra.hpp"

namespace infgeom {

class DistributionAtZero {
 public:
  DistributionAtZero() = default;
  explicit DistributionAtZero(Polynomial<Rational> symbol) : symbol_(std::move(symbol)) {}

  static DistributionAtZero dirac(std::size_t n) { return DistributionAtZero(Polynomial<Rational>::constant(n, 1)); }
  static DistributionAtZero partial(std::size_t n, std::size_t i) {
    return DistributionAtZero(Polynomial<Rational>::variable(n, i));
  }
  /// Σ ∂²/∂x_i².
  static DistributionAtZero laplace(std::size_t n) {
    Polynomial<Rational> p(n);
    for (std::size_t i = 0; i < n; ++i) {
      Monomial m(n);
      m[i] = 2;
      p.add_term(m, 1);
    }
    return DistributionAtZero(std::move(p));
  }
  /// Parses e.g. "d1^2 + d2^2" in n symbols.
  static DistributionAtZero parse(std::string_view text, std::size_t n) {
    auto p = to_polynomial(parse_expr(text, "d", n), n);
    if (!p) throw input_error("distribution must be a polynomial in d1..d" + std::to_string(n));
    return DistributionAtZero(std::move(*p));
  }

  std::size_t n() const { return symbol_.arity(); }
  const Polynomial<Rational>& symbol() const { return symbol_; }
  std::string to_string() const { return symbol_.is_zero() ? "0" : infgeom::to_string(from_polynomial(symbol_), "d"); }

  friend bool operator==(const DistributionAtZero&, const DistributionAtZero&) = default;

 private:
  Polynomial<Rational> symbol_;
};

/// Σ_a c_a a! f_a: the coefficient of X^a in f is f_a = (∂^a f)(0) / a!.
inline Rational apply(const DistributionAtZero& d, const Polynomial<Rational>& f) {
  if (d.n() != f.arity()) throw input_error("distribution and polynomial have different variable counts");
  Rational r = 0;
  for (const auto& [a, c] : d.symbol().terms()) r += c * a.factorial() * f.coefficient(a);
  return r;
}

/// An element of the tensor square, as a polynomial in 2n symbols: the first n
/// act on the left factor, the last n on the right.
struct DistributionTensor {
  std::size_t n = 0;
  Polynomial<Rational> symbol;

  /// Σ c (b . f)(c' . g) over the terms c ∂^b (x) ∂^c'.
  Rational apply(const Polynomial<Rational>& f, const Polynomial<Rational>& g) const {
    Rational r = 0;
    for (const auto& [m, c] : symbol.terms()) {
      auto [left, right] = split(m);
      r += c * left.factorial() * f.coefficient(left) * right.factorial() * g.coefficient(right);
    }
    return r;
  }

  std::pair<Monomial, Monomial> split(const Monomial& m) const {
    const auto& e = m.exponents();
    return {Monomial(std::vector<unsigned>(e.begin(), e.begin() + n)),
            Monomial(std::vector<unsigned>(e.begin() + n, e.end()))};
  }
};

namespace detail {

inline Rational binomial(const Monomial& a, const Monomial& b) {
  Rational r = 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Rational c = 1;
    for (unsigned k = 0; k < b[i]; ++k) c = c * (a[i] - k) / (k + 1);
    r *= c;
  }
  return r;
}

inline std::vector<Monomial> divisors(const Monomial& a) {
  std::vector<Monomial> out{Monomial::unit(a.size())};
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<Monomial> next;
    for (const auto& m : out)
      for (unsigned k = 0; k <= a[i]; ++k) {
        Monomial t = m;
        t[i] = k;
        next.push_back(t);
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace detail

/// Leibniz: ψ(∂^a) = Σ_{b+c=a} (a choose b) ∂^b (x) ∂^c, extended linearly.
inline DistributionTensor comultiply(const DistributionAtZero& d) {
  const std::size_t n = d.n();
  DistributionTensor t{n, Polynomial<Rational>(2 * n)};
  for (const auto& [a, coeff] : d.symbol().terms())
    for (const auto& b : detail::divisors(a)) {
      Monomial c(n);
      for (std::size_t i = 0; i < n; ++i) c[i] = a[i] - b[i];
      t.symbol.add_term(concat(b, c), coeff * detail::binomial(a, b));
    }
  return t;
}

/// (ψ (x) id) ψ(d) = (id (x) ψ) ψ(d), compared as polynomials in 3n symbols.
inline bool is_coassociative_at(const DistributionAtZero& d) {
  const std::size_t n = d.n();
  const DistributionTensor psi = comultiply(d);
  Polynomial<Rational> lhs(3 * n), rhs(3 * n);
  for (const auto& [m, c] : psi.symbol.terms()) {
    auto [left, right] = psi.split(m);
    const DistributionTensor psi_left = comultiply(DistributionAtZero(Polynomial<Rational>::monomial(left)));
    const DistributionTensor psi_right = comultiply(DistributionAtZero(Polynomial<Rational>::monomial(right)));
    for (const auto& [ml, cl] : psi_left.symbol.terms())
      lhs.add_term(concat(ml, right), c * cl);
    for (const auto& [mr, cr] : psi_right.symbol.terms())
      rhs.add_term(concat(left, mr), c * cr);
  }
  return lhs == rhs;
}

struct Subcoalgebra {
  std::size_t n = 0;
  std::vector<DistributionAtZero> basis;  // reduced: basis[i] has coefficient 1 at pivots[i], 0 at other pivots
  std::vector<Monomial> pivots;
  std::vector<Matrix<Rational>> comult;  // ψ(basis[k]) = Σ comult[k](i, j) basis[i] (x) basis[j]
  std::vector<Rational> counit;  // ε(basis[k]) = basis[k] applied to 1

  std::size_t dimension() const { return basis.size(); }
  std::size_t max_degree() const {
    unsigned d = 0;
    for (const auto& b : basis) d = std::max(d, b.symbol().degree());
    return d;
  }
};

/// Span of all iterated derivatives of the symbol of d. The basis is
/// row-reduced with higher-degree monomials as preferred pivots and listed
/// in increasing pivot order, so Δ yields (δ, ∂_1, ..., ∂_n, Δ).
inline Subcoalgebra subcoalgebra_generated(const DistributionAtZero& d) {
  const std::size_t n = d.n();
  if (d.symbol().is_zero()) throw input_error("the zero distribution generates no subcoalgebra");

  std::vector<Polynomial<Rational>> family{d.symbol()};
  for (std::size_t k = 0; k < family.size(); ++k)
    for (std::size_t i = 0; i < n; ++i) {
      auto p = family[k].derivative(i);
      if (!p.is_zero() && std::find(family.begin(), family.end(), p) == family.end()) family.push_back(std::move(p));
    }

  std::vector<Monomial> columns = monomials_up_to(n, d.symbol().degree());
  std::reverse(columns.begin(), columns.end());
  Matrix<Rational> m(family.size(), columns.size());
  for (std::size_t r = 0; r < family.size(); ++r)
    for (std::size_t c = 0; c < columns.size(); ++c) m(r, c) = family[r].coefficient(columns[c]);
  const auto pivot_cols = reduce_to_rref(m);

  std::vector<std::size_t> order(pivot_cols.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return DegLexLess{}(columns[pivot_cols[a]], columns[pivot_cols[b]]); });

  Subcoalgebra sc;
  sc.n = n;
  for (std::size_t r : order) {
    Polynomial<Rational> p(n);
    for (std::size_t c = 0; c < columns.size(); ++c)
      if (m(r, c) != 0) p.add_term(columns[c], m(r, c));
    sc.basis.emplace_back(std::move(p));
    sc.pivots.push_back(columns[pivot_cols[r]]);
  }

  const std::size_t dim = sc.basis.size();
  const Polynomial<Rational> one = Polynomial<Rational>::constant(n, 1);
  for (const auto& b : sc.basis) {
    const DistributionTensor t = comultiply(b);
    Matrix<Rational> c(dim, dim);
    Polynomial<Rational> rebuilt(2 * n);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) {
        c(i, j) = t.symbol.coefficient(concat(sc.pivots[i], sc.pivots[j]));
        if (c(i, j) == 0) continue;
        for (const auto& [mi, ci] : sc.basis[i].symbol().terms())
          for (const auto& [mj, cj] : sc.basis[j].symbol().terms()) rebuilt.add_term(concat(mi, mj), c(i, j) * ci * cj);
      }
    if (!(rebuilt == t.symbol)) throw std::logic_error("generated span is not closed under comultiplication");
    sc.comult.push_back(std::move(c));
    sc.counit.push_back(apply(b, one));
  }
  return sc;
}

/// The algebra of functions dual to c: polynomials of degree <= bound modulo
/// the annihilator {f : b(f) = 0 for every basis b}. The default bound is
/// max symbol degree + 1.
inline AlgebraPtr dual_algebra(const Subcoalgebra& c, int degree_bound = -1) {
  const auto min_bound = static_cast<int>(c.max_degree()) + 1;
  if (degree_bound < 0) degree_bound = min_bound;
  if (degree_bound < min_bound)
    throw input_error("dual_algebra needs degree bound >= " + std::to_string(min_bound) + ", got " +
                      std::to_string(degree_bound));
  const std::size_t n = c.n;
  const auto monomials = monomials_up_to(n, static_cast<unsigned>(degree_bound));
  Matrix<Rational> pairing(c.dimension(), monomials.size());
  for (std::size_t r = 0; r < c.dimension(); ++r)
    for (std::size_t k = 0; k < monomials.size(); ++k)
      pairing(r, k) = c.basis[r].symbol().coefficient(monomials[k]) * monomials[k].factorial();

  std::vector<Polynomial<Rational>> relations;
  for (const auto& v : nullspace(pairing)) {
    Polynomial<Rational> p(n);
    for (std::size_t k = 0; k < monomials.size(); ++k)
      if (v[k] != 0) p.add_term(monomials[k], v[k]);
    relations.push_back(std::move(p));
  }
  AlgebraPtr a = quotient_by_relations(static_cast<int>(n), degree_bound, relations);
  if (a->dimension() != c.dimension())
    throw std::logic_error("dual algebra has dimension " + std::to_string(a->dimension()) + ", coalgebra " +
                           std::to_string(c.dimension()));
  return a;
}

}  // namespace infgeom
