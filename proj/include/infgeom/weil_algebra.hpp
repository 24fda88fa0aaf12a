#pragma once

// Weil algebras: finite-dimensional quotients k[Z_1..Z_n] / I of a polynomial
// ring by an ideal containing every monomial of degree > degree_bound.
// Structure constants are always exact rationals; elements (see
// weil_element.hpp) may carry rational or double coordinates.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "infgeom/errors.hpp"
#include "infgeom/linalg.hpp"
#include "infgeom/polynomial.hpp"
#include "infgeom/scalar.hpp"

namespace infgeom {

struct Term {
  Rational coeff;
  std::size_t index;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Coordinates over a basis, sorted by index, no zero coefficients.
using SparseVector = std::vector<Term>;

class WeilAlgebra;
using AlgebraPtr = std::shared_ptr<const WeilAlgebra>;

class WeilAlgebra {
 public:
  /// Assembles an algebra from its components and validates the shapes.
  /// `table` is row-major over basis pairs; `generators[i]` is the class of Z_i.
  static AlgebraPtr from_parts(std::size_t n, unsigned degree_bound, std::vector<Monomial> basis,
                               std::vector<SparseVector> table, std::vector<SparseVector> generators) {
    return AlgebraPtr(new WeilAlgebra(n, degree_bound, std::move(basis), std::move(table), std::move(generators)));
  }

  std::size_t n() const { return n_; }
  unsigned degree_bound() const { return degree_bound_; }
  std::size_t dimension() const { return basis_.size(); }
  const std::vector<Monomial>& basis() const { return basis_; }
  const std::vector<SparseVector>& table() const { return table_; }
  const std::vector<SparseVector>& generators() const { return generators_; }

  const SparseVector& product(std::size_t i, std::size_t j) const { return table_[i * dimension() + j]; }
  const std::vector<std::pair<double, std::size_t>>& product_double(std::size_t i, std::size_t j) const {
    return table_double_[i * dimension() + j];
  }
  const SparseVector& generator(std::size_t i) const { return generators_.at(i); }

  std::optional<std::size_t> index_of(const Monomial& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Bilinear extension of the table to sparse vectors.
  SparseVector multiply(const SparseVector& a, const SparseVector& b) const {
    std::map<std::size_t, Rational> acc;
    for (const auto& ta : a)
      for (const auto& tb : b)
        for (const auto& t : product(ta.index, tb.index)) acc[t.index] += ta.coeff * tb.coeff * t.coeff;
    return to_sparse(acc);
  }

  /// Class of the monomial Z^alpha in the quotient, as the product of
  /// generator classes.
  SparseVector normal_form(const Monomial& m) const {
    if (m.size() != n_) throw std::invalid_argument("monomial arity does not match algebra");
    SparseVector v{{Rational(1), 0}};
    for (std::size_t i = 0; i < n_; ++i)
      for (unsigned k = 0; k < m[i]; ++k) {
        v = multiply(v, generators_[i]);
        if (v.empty()) return v;
      }
    return v;
  }

  SparseVector normal_form(const Polynomial<Rational>& p) const {
    std::map<std::size_t, Rational> acc;
    for (const auto& [m, c] : p.terms())
      for (const auto& t : normal_form(m)) acc[t.index] += c * t.coeff;
    return to_sparse(acc);
  }

  /// Commutativity, unit law, associativity over all basis triples, and
  /// nilpotency of the augmentation ideal. Returns a description of the
  /// first failure, or nullopt.
  std::optional<std::string> verify_axioms() const {
    const std::size_t d = dimension();
    for (std::size_t i = 0; i < d; ++i) {
      SparseVector ei{{Rational(1), i}};
      if (product(0, i) != ei || product(i, 0) != ei) return "unit law fails at basis " + std::to_string(i);
      for (std::size_t j = 0; j < d; ++j)
        if (product(i, j) != product(j, i))
          return "not commutative at (" + std::to_string(i) + "," + std::to_string(j) + ")";
    }
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k) {
          SparseVector left = multiply(product(i, j), SparseVector{{Rational(1), k}});
          SparseVector right = multiply(SparseVector{{Rational(1), i}}, product(j, k));
          if (left != right)
            return "not associative at (" + std::to_string(i) + "," + std::to_string(j) + "," +
                   std::to_string(k) + ")";
        }
    for (std::size_t i = 1; i < d; ++i) {
      SparseVector power{{Rational(1), i}};
      for (unsigned k = 0; k <= degree_bound_ && !power.empty(); ++k) power = multiply(power, {{Rational(1), i}});
      if (!power.empty()) return "basis element " + std::to_string(i) + " is not nilpotent";
    }
    return std::nullopt;
  }

  friend bool operator==(const WeilAlgebra& a, const WeilAlgebra& b) {
    return a.n_ == b.n_ && a.degree_bound_ == b.degree_bound_ && a.basis_ == b.basis_ && a.table_ == b.table_ &&
           a.generators_ == b.generators_;
  }

  static SparseVector to_sparse(const std::map<std::size_t, Rational>& acc) {
    SparseVector v;
    for (const auto& [i, c] : acc)
      if (!c.is_zero()) v.push_back({c, i});
    return v;
  }

 private:
  WeilAlgebra(std::size_t n, unsigned degree_bound, std::vector<Monomial> basis, std::vector<SparseVector> table,
              std::vector<SparseVector> generators)
      : n_(n),
        degree_bound_(degree_bound),
        basis_(std::move(basis)),
        table_(std::move(table)),
        generators_(std::move(generators)) {
    const std::size_t d = basis_.size();
    if (d == 0) throw input_error("Weil algebra needs a nonempty basis");
    if (!basis_.front().is_unit() || basis_.front().size() != n_)
      throw input_error("first basis element must be the unit monomial");
    if (table_.size() != d * d) throw input_error("multiplication table has wrong size");
    if (generators_.size() != n_) throw input_error("need one generator class per variable");
    for (std::size_t i = 0; i < d; ++i) {
      if (basis_[i].size() != n_) throw input_error("basis monomial arity mismatch");
      if (!index_.emplace(basis_[i], i).second) throw input_error("duplicate basis monomial");
    }
    auto check = [d](const SparseVector& v) {
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k].index >= d) throw input_error("basis index out of range");
        if (v[k].coeff.is_zero()) throw input_error("explicit zero coefficient");
        if (k > 0 && v[k - 1].index >= v[k].index) throw input_error("unsorted sparse vector");
      }
    };
    for (const auto& v : table_) check(v);
    for (const auto& v : generators_) check(v);
    table_double_.reserve(table_.size());
    for (const auto& v : table_) {
      std::vector<std::pair<double, std::size_t>> dv;
      for (const auto& t : v) dv.emplace_back(t.coeff.convert_to<double>(), t.index);
      table_double_.push_back(std::move(dv));
    }
  }

  std::size_t n_;
  unsigned degree_bound_;
  std::vector<Monomial> basis_;
  std::map<Monomial, std::size_t, DegLexLess> index_;
  std::vector<SparseVector> table_;
  std::vector<SparseVector> generators_;
  std::vector<std::vector<std::pair<double, std::size_t>>> table_double_;
};

namespace detail {

inline void require_arity(int n) {
  if (n < 1) throw input_error("generator count must be at least 1, got " + std::to_string(n));
}

/// Table of a monomial algebra: basis monomials multiply as monomials and
/// vanish once they leave the basis.
inline std::vector<SparseVector> monomial_table(const std::vector<Monomial>& basis,
                                                const std::map<Monomial, std::size_t, DegLexLess>& index) {
  const std::size_t d = basis.size();
  std::vector<SparseVector> table(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      auto it = index.find(basis[i] * basis[j]);
      if (it != index.end()) table[i * d + j] = {{Rational(1), it->second}};
    }
  return table;
}

}  // namespace detail

/// O(D_k(n)) = k[Z_1..Z_n] / (all monomials of degree k+1).
inline AlgebraPtr make_dk_algebra(int n, int k) {
  detail::require_arity(n);
  if (k < 0) throw input_error("neighbourhood order must be non-negative, got " + std::to_string(k));
  const auto un = static_cast<std::size_t>(n);
  std::vector<Monomial> basis = monomials_up_to(un, static_cast<unsigned>(k));
  std::map<Monomial, std::size_t, DegLexLess> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], i);
  std::vector<SparseVector> generators(un);
  for (std::size_t i = 0; i < un; ++i) {
    auto it = index.find(Monomial::variable(un, i));
    if (it != index.end()) generators[i] = {{Rational(1), it->second}};
  }
  return WeilAlgebra::from_parts(un, static_cast<unsigned>(k), basis, detail::monomial_table(basis, index),
                                 std::move(generators));
}

/// O(D_L(n)) relative to an inner product P on the generators: basis
/// {1, Z_1..Z_n, Q} with Z_i Z_j = (P^-1)_ij / (P^-1)_nn * Q, where Q is the
/// class of Z_n^2, and every triple product zero. For P = I this is the
/// algebra of tuples with equal squares and vanishing cross products.
inline AlgebraPtr make_dl_algebra_for_inner_product(const Matrix<Rational>& inner) {
  const std::size_t n = inner.rows();
  if (n == 0 || inner.cols() != n) throw input_error("inner product must be a nonempty square matrix");
  if (!inner.is_symmetric()) throw input_error("inner product must be symmetric");
  auto w = try_inverse(inner);
  if (!w) throw precondition_error("inner product is singular");
  const Rational scale = (*w)(n - 1, n - 1);
  if (scale.is_zero()) throw precondition_error("inner product inverse has a zero diagonal entry");

  std::vector<Monomial> basis;
  basis.push_back(Monomial::unit(n));
  for (std::size_t i = 0; i < n; ++i) basis.push_back(Monomial::variable(n, i));
  Monomial q(n);
  q[n - 1] = 2;
  basis.push_back(q);
  const std::size_t d = n + 2, qi = n + 1;

  std::vector<SparseVector> table(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    table[i] = {{Rational(1), i}};
    table[i * d] = {{Rational(1), i}};
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational c = (*w)(i, j) / scale;
      if (!c.is_zero()) table[(i + 1) * d + (j + 1)] = {{c, qi}};
    }
  std::vector<SparseVector> generators(n);
  for (std::size_t i = 0; i < n; ++i) generators[i] = {{Rational(1), i + 1}};
  return WeilAlgebra::from_parts(n, 2, std::move(basis), std::move(table), std::move(generators));
}

/// O(D_L(n)): Z_i^2 = Q for all i, Z_i Z_j = 0 for i != j, dimension n + 2.
/// For n = 1 this is O(D_2(1)) = k[Z]/(Z^3).
inline AlgebraPtr make_dl_algebra(int n) {
  detail::require_arity(n);
  if (n == 1) return make_dk_algebra(1, 2);
  return make_dl_algebra_for_inner_product(Matrix<Rational>::identity(static_cast<std::size_t>(n)));
}

/// Quotient of k[Z]/(degree > degree_bound) by the ideal generated by
/// `relations`. The ideal is spanned by the truncations of m*r over all
/// monomials m; exact row reduction pivots on high-degree monomials first,
/// so the surviving basis consists of the lowest monomials available.
inline AlgebraPtr quotient_by_relations(int n, int degree_bound, const std::vector<Polynomial<Rational>>& relations) {
  detail::require_arity(n);
  if (degree_bound < 0) throw input_error("degree bound must be non-negative");
  const auto un = static_cast<std::size_t>(n);
  const auto bound = static_cast<unsigned>(degree_bound);

  const std::vector<Monomial> monomials = monomials_up_to(un, bound);
  // Elimination order: degree descending, DegLexLess within a degree.
  std::vector<Monomial> columns;
  for (unsigned d = bound + 1; d-- > 0;)
    for (const auto& m : monomials)
      if (m.degree() == d) columns.push_back(m);
  std::map<Monomial, std::size_t, DegLexLess> column_of;
  for (std::size_t c = 0; c < columns.size(); ++c) column_of.emplace(columns[c], c);

  std::vector<Polynomial<Rational>> rows;
  for (const auto& r : relations) {
    if (r.arity() != un) throw input_error("relation arity does not match generator count");
    if (!r.coefficient(Monomial::unit(un)).is_zero()) throw input_error("relations must have zero constant term");
    Polynomial<Rational> rt = r.truncated(bound);
    if (rt.is_zero()) continue;
    const unsigned low = rt.lowest_degree();
    for (const auto& m : monomials)
      if (m.degree() + low <= bound) {
        auto prod = (Polynomial<Rational>::monomial(m) * rt).truncated(bound);
        if (!prod.is_zero()) rows.push_back(std::move(prod));
      }
  }

  Matrix<Rational> mat(rows.size(), columns.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [m, c] : rows[r].terms()) mat(r, column_of.at(m)) = c;
  const auto pivots = reduce_to_rref(mat);
  std::vector<std::optional<std::size_t>> pivot_row(columns.size());
  for (std::size_t r = 0; r < pivots.size(); ++r) pivot_row[pivots[r]] = r;

  std::vector<Monomial> basis;
  for (const auto& m : monomials)
    if (!pivot_row[column_of.at(m)]) basis.push_back(m);
  // Relations have no constant term, so the unit always survives.
  if (basis.empty() || !basis.front().is_unit()) throw std::logic_error("quotient lost its unit");
  std::map<Monomial, std::size_t, DegLexLess> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], i);

  auto nf = [&](const Monomial& m) -> SparseVector {
    if (m.degree() > bound) return {};
    if (auto it = index.find(m); it != index.end()) return {{Rational(1), it->second}};
    const std::size_t r = *pivot_row[column_of.at(m)];
    std::map<std::size_t, Rational> acc;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (pivot_row[c] || mat(r, c).is_zero()) continue;
      acc[index.at(columns[c])] -= mat(r, c);
    }
    return WeilAlgebra::to_sparse(acc);
  };

  const std::size_t d = basis.size();
  std::vector<SparseVector> table(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) table[i * d + j] = nf(basis[i] * basis[j]);
  std::vector<SparseVector> generators(un);
  for (std::size_t i = 0; i < un; ++i) generators[i] = nf(Monomial::variable(un, i));
  return WeilAlgebra::from_parts(un, bound, std::move(basis), std::move(table), std::move(generators));
}

/// A (x) B, generated by the generators of A followed by those of B. Basis
/// monomials are concatenated exponent vectors.
inline AlgebraPtr tensor_product(const WeilAlgebra& a, const WeilAlgebra& b) {
  std::vector<Monomial> basis;
  for (const auto& ma : a.basis())
    for (const auto& mb : b.basis()) basis.push_back(concat(ma, mb));
  std::sort(basis.begin(), basis.end(), DegLexLess{});
  std::map<Monomial, std::size_t, DegLexLess> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], i);
  auto pair_index = [&](std::size_t i, std::size_t j) { return index.at(concat(a.basis()[i], b.basis()[j])); };

  const std::size_t d = basis.size();
  std::vector<SparseVector> table(d * d);
  for (std::size_t i1 = 0; i1 < a.dimension(); ++i1)
    for (std::size_t j1 = 0; j1 < b.dimension(); ++j1)
      for (std::size_t i2 = 0; i2 < a.dimension(); ++i2)
        for (std::size_t j2 = 0; j2 < b.dimension(); ++j2) {
          std::map<std::size_t, Rational> acc;
          for (const auto& ta : a.product(i1, i2))
            for (const auto& tb : b.product(j1, j2)) acc[pair_index(ta.index, tb.index)] += ta.coeff * tb.coeff;
          table[pair_index(i1, j1) * d + pair_index(i2, j2)] = WeilAlgebra::to_sparse(acc);
        }
  std::vector<SparseVector> generators;
  for (const auto& g : a.generators()) {
    SparseVector v;
    for (const auto& t : g) v.push_back({t.coeff, pair_index(t.index, 0)});
    std::sort(v.begin(), v.end(), [](const Term& x, const Term& y) { return x.index < y.index; });
    generators.push_back(std::move(v));
  }
  for (const auto& g : b.generators()) {
    SparseVector v;
    for (const auto& t : g) v.push_back({t.coeff, pair_index(0, t.index)});
    std::sort(v.begin(), v.end(), [](const Term& x, const Term& y) { return x.index < y.index; });
    generators.push_back(std::move(v));
  }
  return WeilAlgebra::from_parts(a.n() + b.n(), a.degree_bound() + b.degree_bound(), std::move(basis),
                                 std::move(table), std::move(generators));
}

/// Searches for a permutation pi of basis indices (unit fixed) such that
/// b_i * b_j = sum c^k b_k in `a` corresponds to b'_pi(i) * b'_pi(j) =
/// sum c^k b'_pi(k) in `b`. Returns pi, or nullopt when the tables do not
/// match under any permutation.
inline std::optional<std::vector<std::size_t>> match_tables(const WeilAlgebra& a, const WeilAlgebra& b) {
  const std::size_t d = a.dimension();
  if (d != b.dimension()) return std::nullopt;
  std::vector<std::size_t> perm(d, d);
  std::vector<bool> used(d, false);
  perm[0] = 0;
  used[0] = true;

  auto mapped = [&](const SparseVector& v) -> std::optional<SparseVector> {
    SparseVector out;
    for (const auto& t : v) {
      if (perm[t.index] == d) return std::nullopt;
      out.push_back({t.coeff, perm[t.index]});
    }
    std::sort(out.begin(), out.end(), [](const Term& x, const Term& y) { return x.index < y.index; });
    return out;
  };
  // Every product among assigned indices whose result is fully assigned must agree.
  auto consistent = [&](std::size_t upto) {
    for (std::size_t i = 0; i <= upto; ++i)
      for (std::size_t j = 0; j <= upto; ++j) {
        auto m = mapped(a.product(i, j));
        if (m && *m != b.product(perm[i], perm[j])) return false;
        if (!m) {
          // Unassigned target indices: at least the support sizes must agree.
          if (a.product(i, j).size() != b.product(perm[i], perm[j]).size()) return false;
        }
      }
    return true;
  };
  auto search = [&](auto&& self, std::size_t i) -> bool {
    if (i == d) return consistent(d - 1);
    for (std::size_t c = 1; c < d; ++c) {
      if (used[c] || a.basis()[i].degree() != b.basis()[c].degree()) continue;
      perm[i] = c;
      used[c] = true;
      if (consistent(i) && self(self, i + 1)) return true;
      used[c] = false;
      perm[i] = d;
    }
    return false;
  };
  if (!search(search, 1) && d > 1) return std::nullopt;
  return perm;
}

}  // namespace infgeom
