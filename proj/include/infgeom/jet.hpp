#pragma once

// Jet evaluation: f(base + z) for nilpotent z computed from the Taylor
// coefficients of f at base. Nilpotency truncates the series exactly at the
// ambient algebra's degree bound.

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "infgeom/errors.hpp"
#include "infgeom/expr.hpp"
#include "infgeom/polynomial.hpp"
#include "infgeom/weil_element.hpp"

namespace infgeom {

/// Partial derivatives d^alpha f, each built from a lower one by one more
/// symbolic differentiation.
class DerivativeTable {
 public:
  DerivativeTable(Expr f, std::size_t n) : n_(n) { memo_.emplace(Monomial::unit(n), std::move(f)); }

  const Expr& operator()(const Monomial& alpha) {
    if (auto it = memo_.find(alpha); it != memo_.end()) return it->second;
    std::size_t i = 0;
    while (alpha[i] == 0) ++i;
    Monomial lower = alpha;
    lower[i] -= 1;
    Expr d = diff((*this)(lower), i);
    return memo_.emplace(alpha, std::move(d)).first->second;
  }

 private:
  std::size_t n_;
  std::map<Monomial, Expr, DegLexLess> memo_;
};

/// Coefficients d^alpha f(base) / alpha! for |alpha| <= order.
template <Scalar S>
std::map<Monomial, S, DegLexLess> taylor_coeffs(const Expr& f, std::span<const S> base, unsigned order) {
  const std::size_t n = base.size();
  if (arity(f) > n) throw input_error("function uses more variables than the base point has");
  DerivativeTable derivs(f, n);
  std::map<Monomial, S, DegLexLess> out;
  for (const auto& alpha : monomials_up_to(n, order)) {
    S value = eval<S>(derivs(alpha), base);
    if (value != S(0)) out.emplace(alpha, value / from_rational<S>(alpha.factorial()));
  }
  return out;
}

namespace detail {

/// Powers z_i^k for k <= bound, so z^alpha is a product of table entries.
template <Scalar S>
class PowerTable {
 public:
  PowerTable(std::span<const WeilElement<S>> z, unsigned bound) {
    for (const auto& zi : z) {
      std::vector<WeilElement<S>> p{WeilElement<S>::one(zi.algebra())};
      for (unsigned k = 1; k <= bound; ++k) p.push_back(p.back() * zi);
      powers_.push_back(std::move(p));
    }
  }
  WeilElement<S> monomial(const Monomial& alpha) const {
    WeilElement<S> r = powers_[0][alpha[0]];
    for (std::size_t i = 1; i < powers_.size(); ++i)
      if (alpha[i] > 0) r *= powers_[i][alpha[i]];
    return r;
  }

 private:
  std::vector<std::vector<WeilElement<S>>> powers_;
};

template <Scalar S>
void check_nilpotent_arguments(std::span<const WeilElement<S>> z, std::size_t n) {
  if (z.size() != n) throw input_error("need one nilpotent argument per variable");
  common_algebra<S>(z);
  for (const auto& zi : z)
    if (!zi.is_nilpotent(0.0)) throw input_error("jet arguments must be nilpotent (zero unit part)");
}

template <Scalar S>
WeilElement<S> sum_series(const std::map<Monomial, S, DegLexLess>& coeffs, const PowerTable<S>& powers,
                          const AlgebraPtr& algebra) {
  WeilElement<S> r(algebra);
  for (const auto& [alpha, c] : coeffs) r += c * powers.monomial(alpha);
  return r;
}

}  // namespace detail

/// f(base + z) = sum_{|alpha| <= D} d^alpha f(base)/alpha! z^alpha, with D the
/// degree bound of the algebra holding z.
template <Scalar S>
WeilElement<S> kl_extend(const Expr& f, std::span<const S> base, std::span<const WeilElement<S>> z) {
  detail::check_nilpotent_arguments<S>(z, base.size());
  const AlgebraPtr& algebra = z.front().algebra();
  const unsigned order = algebra->degree_bound();
  detail::PowerTable<S> powers(z, order);
  return detail::sum_series(taylor_coeffs<S>(f, base, order), powers, algebra);
}

template <Scalar S>
PointModel<S> kl_extend(const FunctionModel& f, std::span<const S> base, std::span<const WeilElement<S>> z) {
  if (f.n_in() != base.size()) throw input_error("base point dimension does not match the map");
  detail::check_nilpotent_arguments<S>(z, base.size());
  const AlgebraPtr& algebra = z.front().algebra();
  const unsigned order = algebra->degree_bound();
  detail::PowerTable<S> powers(z, order);
  PointModel<S> out;
  for (const auto& c : f.components()) out.push_back(detail::sum_series(taylor_coeffs<S>(c, base, order), powers, algebra));
  return out;
}

/// Splits each coordinate of p into real base + nilpotent offset.
template <Scalar S>
std::pair<std::vector<S>, PointModel<S>> split_point(std::span<const WeilElement<S>> p) {
  std::vector<S> base;
  PointModel<S> offsets;
  for (const auto& e : p) {
    base.push_back(e.unit_part());
    offsets.push_back(e.nilpotent_part());
  }
  return {std::move(base), std::move(offsets)};
}

/// f at a point given with nilpotent perturbations in every coordinate.
template <Scalar S>
WeilElement<S> evaluate_at(const Expr& f, std::span<const WeilElement<S>> p) {
  auto [base, offsets] = split_point<S>(p);
  return kl_extend<S>(f, base, offsets);
}

template <Scalar S>
PointModel<S> evaluate_at(const FunctionModel& f, std::span<const WeilElement<S>> p) {
  auto [base, offsets] = split_point<S>(p);
  return kl_extend<S>(f, base, offsets);
}

/// The point base + z as a point model.
template <Scalar S>
PointModel<S> displaced(std::span<const S> base, std::span<const WeilElement<S>> z) {
  if (base.size() != z.size()) throw std::invalid_argument("dimension mismatch");
  PointModel<S> p;
  for (std::size_t i = 0; i < base.size(); ++i) p.push_back(z[i] + base[i]);
  return p;
}

}  // namespace infgeom
