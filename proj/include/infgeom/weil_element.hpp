#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "infgeom/errors.hpp"
#include "infgeom/scalar.hpp"
#include "infgeom/weil_algebra.hpp"

namespace infgeom {

/// An element of a Weil algebra: dense coordinates over its basis.
/// Elements of different algebra objects never mix, even if the algebras
/// happen to be equal.
template <Scalar S>
class WeilElement {
 public:
  WeilElement() = default;
  explicit WeilElement(AlgebraPtr algebra) : algebra_(std::move(algebra)), coords_(algebra_->dimension(), S(0)) {}
  WeilElement(AlgebraPtr algebra, std::vector<S> coords) : algebra_(std::move(algebra)), coords_(std::move(coords)) {
    if (coords_.size() != algebra_->dimension()) throw std::invalid_argument("coordinate count != algebra dimension");
  }

  static WeilElement zero(const AlgebraPtr& a) { return WeilElement(a); }
  static WeilElement constant(const AlgebraPtr& a, const S& c) {
    WeilElement e(a);
    e.coords_[0] = c;
    return e;
  }
  static WeilElement one(const AlgebraPtr& a) { return constant(a, S(1)); }
  static WeilElement basis_element(const AlgebraPtr& a, std::size_t i) {
    WeilElement e(a);
    e.coords_.at(i) = S(1);
    return e;
  }
  static WeilElement from_sparse(const AlgebraPtr& a, const SparseVector& v) {
    WeilElement e(a);
    for (const auto& t : v) e.coords_[t.index] = from_rational<S>(t.coeff);
    return e;
  }
  /// The class of the generator Z_i.
  static WeilElement generator(const AlgebraPtr& a, std::size_t i) { return from_sparse(a, a->generator(i)); }
  static std::vector<WeilElement> generators(const AlgebraPtr& a) {
    std::vector<WeilElement> g;
    for (std::size_t i = 0; i < a->n(); ++i) g.push_back(generator(a, i));
    return g;
  }
  static WeilElement from_polynomial(const AlgebraPtr& a, const Polynomial<Rational>& p) {
    return from_sparse(a, a->normal_form(p));
  }

  const AlgebraPtr& algebra() const { return algebra_; }
  const std::vector<S>& coords() const { return coords_; }
  const S& operator[](std::size_t i) const { return coords_[i]; }
  std::size_t dimension() const { return coords_.size(); }

  const S& unit_part() const { return coords_[0]; }
  WeilElement nilpotent_part() const {
    WeilElement e = *this;
    e.coords_[0] = S(0);
    return e;
  }
  bool is_nilpotent(double eps = kDefaultEpsilon) const { return infgeom::is_zero<S>(coords_[0], eps); }

  bool is_zero(double eps = kDefaultEpsilon) const {
    for (const auto& c : coords_)
      if (!infgeom::is_zero<S>(c, eps)) return false;
    return true;
  }
  bool near(const WeilElement& o, double eps = kDefaultEpsilon) const {
    same_algebra(o);
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (!infgeom::near<S>(coords_[i], o.coords_[i], eps)) return false;
    return true;
  }
  friend bool operator==(const WeilElement& a, const WeilElement& b) {
    return a.algebra_ == b.algebra_ && a.coords_ == b.coords_;
  }

  WeilElement& operator+=(const WeilElement& o) {
    same_algebra(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
    return *this;
  }
  WeilElement& operator-=(const WeilElement& o) {
    same_algebra(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
    return *this;
  }
  WeilElement& operator*=(const S& s) {
    for (auto& c : coords_) c *= s;
    return *this;
  }
  WeilElement& operator+=(const S& s) {
    coords_[0] += s;
    return *this;
  }
  WeilElement& operator-=(const S& s) {
    coords_[0] -= s;
    return *this;
  }

  friend WeilElement operator+(WeilElement a, const WeilElement& b) { return a += b; }
  friend WeilElement operator-(WeilElement a, const WeilElement& b) { return a -= b; }
  friend WeilElement operator-(WeilElement a) {
    for (auto& c : a.coords_) c = -c;
    return a;
  }
  friend WeilElement operator*(const S& s, WeilElement a) { return a *= s; }
  friend WeilElement operator*(WeilElement a, const S& s) { return a *= s; }
  friend WeilElement operator+(WeilElement a, const S& s) { return a += s; }
  friend WeilElement operator+(const S& s, WeilElement a) { return a += s; }
  friend WeilElement operator-(WeilElement a, const S& s) { return a -= s; }
  friend WeilElement operator-(const S& s, WeilElement a) { return -(a -= s); }

  friend WeilElement operator*(const WeilElement& a, const WeilElement& b) {
    a.same_algebra(b);
    const WeilAlgebra& alg = *a.algebra_;
    WeilElement r(a.algebra_);
    const std::size_t d = a.coords_.size();
    for (std::size_t i = 0; i < d; ++i) {
      if (a.coords_[i] == S(0)) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (b.coords_[j] == S(0)) continue;
        S ab = a.coords_[i] * b.coords_[j];
        if constexpr (is_exact_v<S>) {
          for (const auto& t : alg.product(i, j)) r.coords_[t.index] += ab * t.coeff;
        } else {
          for (const auto& [c, k] : alg.product_double(i, j)) r.coords_[k] += ab * c;
        }
      }
    }
    return r;
  }
  WeilElement& operator*=(const WeilElement& o) { return *this = *this * o; }

  WeilElement pow(unsigned k) const {
    WeilElement r = one(algebra_);
    WeilElement base = *this;
    while (k) {
      if (k & 1u) r *= base;
      k >>= 1u;
      if (k) base *= base;
    }
    return r;
  }

  /// Inverse of u + v (v nilpotent): u^-1 sum_k (-v/u)^k, finite because
  /// v^(degree_bound+1) = 0.
  WeilElement inverse(double eps = kDefaultEpsilon) const {
    const S& u = unit_part();
    if (infgeom::is_zero<S>(u, eps)) throw precondition_error("element with zero unit part is not invertible");
    WeilElement ratio = nilpotent_part() * (S(-1) / u);
    WeilElement term = one(algebra_);
    WeilElement sum = one(algebra_);
    for (unsigned k = 0; k < algebra_->degree_bound(); ++k) {
      term *= ratio;
      sum += term;
    }
    return sum * (S(1) / u);
  }

  std::string to_string() const {
    std::string s;
    const auto& basis = algebra_->basis();
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (coords_[i] == S(0)) continue;
      if (!s.empty()) s += " + ";
      s += "(" + infgeom::to_string(coords_[i]) + ")";
      if (i > 0) s += "*" + basis[i].to_string('Z');
    }
    return s.empty() ? "0" : s;
  }

 private:
  void same_algebra(const WeilElement& o) const {
    if (algebra_ != o.algebra_) throw algebra_mismatch("operands belong to different Weil algebras");
  }

  AlgebraPtr algebra_;
  std::vector<S> coords_;
};

template <Scalar S>
using PointModel = std::vector<WeilElement<S>>;

/// The common algebra of a nonempty family of elements.
template <Scalar S>
const AlgebraPtr& common_algebra(std::span<const WeilElement<S>> z) {
  if (z.empty()) throw std::invalid_argument("empty element family");
  for (const auto& e : z)
    if (e.algebra() != z.front().algebra()) throw algebra_mismatch("elements live in different Weil algebras");
  return z.front().algebra();
}

/// True iff z_i z_j = w_ij * q for one common q, where w = inner^-1 scaled so
/// the check reads z_i^2 = z_j^2, z_i z_j = 0 (i != j) when inner = I. For a
/// single coordinate additionally z^3 = 0. Non-nilpotent inputs are never
/// L-points.
template <Scalar S>
bool satisfies_l_relations(std::span<const WeilElement<S>> z, const Matrix<S>& inner, double eps = kDefaultEpsilon) {
  const std::size_t n = z.size();
  common_algebra<S>(z);
  if (inner.rows() != n || inner.cols() != n) throw std::invalid_argument("inner product size mismatch");
  for (const auto& e : z)
    if (!e.is_nilpotent(eps)) return false;
  const Matrix<S> w = inverse(inner, eps);
  const S& wnn = w(n - 1, n - 1);
  if (infgeom::is_zero<S>(wnn, eps)) throw precondition_error("inner product inverse has a zero diagonal entry");
  const WeilElement<S> q = z[n - 1] * z[n - 1] * (S(1) / wnn);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (!(z[i] * z[j]).near(q * w(i, j), eps)) return false;
  if (n == 1 && !z[0].pow(3).is_zero(eps)) return false;
  return true;
}

/// z_i^2 = z_j^2 for all i, j and z_i z_j = 0 for i != j (z^3 = 0 when n = 1).
template <Scalar S>
bool satisfies_dl_relations(std::span<const WeilElement<S>> z, double eps = kDefaultEpsilon) {
  return satisfies_l_relations<S>(z, Matrix<S>::identity(z.size()), eps);
}

/// True iff every product of k+1 of the given nilpotent coordinates vanishes,
/// i.e. the point they describe is a k-th order neighbour of its base.
template <Scalar S>
bool is_neighbour_of_order(std::span<const WeilElement<S>> offsets, unsigned k, double eps = kDefaultEpsilon) {
  for (const auto& e : offsets)
    if (!e.is_nilpotent(eps)) return false;
  if (offsets.empty()) return true;
  const std::size_t n = offsets.size();
  bool ok = true;
  auto rec = [&](auto&& self, std::size_t start, unsigned depth, const WeilElement<S>& acc) -> void {
    if (!ok) return;
    if (depth == k + 1) {
      if (!acc.is_zero(eps)) ok = false;
      return;
    }
    if (acc.is_zero(eps)) return;
    for (std::size_t i = start; i < n; ++i) self(self, i, depth + 1, acc * offsets[i]);
  };
  rec(rec, 0, 0, WeilElement<S>::one(offsets.front().algebra()));
  return ok;
}

/// Views of A and B inside A (x) B.
template <Scalar S>
class TensorEmbedding {
 public:
  TensorEmbedding(AlgebraPtr left, AlgebraPtr right)
      : left_(std::move(left)), right_(std::move(right)), product_(tensor_product(*left_, *right_)) {}

  const AlgebraPtr& left() const { return left_; }
  const AlgebraPtr& right() const { return right_; }
  const AlgebraPtr& algebra() const { return product_; }

  std::size_t index(std::size_t i, std::size_t j) const {
    return *product_->index_of(concat(left_->basis()[i], right_->basis()[j]));
  }

  WeilElement<S> embed_left(const WeilElement<S>& a) const {
    if (a.algebra() != left_) throw algebra_mismatch("element is not in the left factor");
    std::vector<S> c(product_->dimension(), S(0));
    for (std::size_t i = 0; i < a.dimension(); ++i) c[index(i, 0)] = a[i];
    return WeilElement<S>(product_, std::move(c));
  }
  WeilElement<S> embed_right(const WeilElement<S>& b) const {
    if (b.algebra() != right_) throw algebra_mismatch("element is not in the right factor");
    std::vector<S> c(product_->dimension(), S(0));
    for (std::size_t j = 0; j < b.dimension(); ++j) c[index(0, j)] = b[j];
    return WeilElement<S>(product_, std::move(c));
  }
  /// The left-factor coefficient of (. (x) b_j) in x.
  WeilElement<S> left_component(const WeilElement<S>& x, std::size_t j) const {
    if (x.algebra() != product_) throw algebra_mismatch("element is not in the tensor product");
    std::vector<S> c(left_->dimension(), S(0));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = x[index(i, j)];
    return WeilElement<S>(left_, std::move(c));
  }

 private:
  AlgebraPtr left_;
  AlgebraPtr right_;
  AlgebraPtr product_;
};

}  // namespace infgeom
