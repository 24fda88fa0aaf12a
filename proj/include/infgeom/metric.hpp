#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "infgeom/errors.hpp"
#include "infgeom/expr.hpp"
#include "infgeom/expr_text.hpp"
#include "infgeom/jet.hpp"
#include "infgeom/linalg.hpp"
#include "infgeom/weil_element.hpp"

namespace infgeom {

/// A Riemannian metric in coordinates, g(x, y) = (y - x)^T G(x) (y - x).
/// Only the upper triangle of G is kept; the lower one mirrors it.
class MetricField {
 public:
  MetricField() = default;

  /// Reads the upper triangle of a full n x n matrix of expressions.
  MetricField(std::size_t n, const std::vector<std::vector<Expr>>& g) : n_(n) {
    if (n == 0) throw input_error("metric dimension must be at least 1");
    if (g.size() != n) throw input_error("metric needs " + std::to_string(n) + " rows");
    for (const auto& row : g)
      if (row.size() != n) throw input_error("metric rows must have " + std::to_string(n) + " entries");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        if (arity(g[i][j]) > n) throw input_error("metric entry uses a variable beyond x" + std::to_string(n));
        upper_.push_back(g[i][j]);
      }
  }

  static MetricField euclidean(std::size_t n) {
    std::vector<std::vector<Expr>> g(n, std::vector<Expr>(n, Expr(0)));
    for (std::size_t i = 0; i < n; ++i) g[i][i] = Expr(1);
    return MetricField(n, g);
  }

  std::size_t n() const { return n_; }

  const Expr& entry(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return upper_[i * n_ - i * (i + 1) / 2 + j];
  }

  /// d/dx_k of every entry.
  MetricField partial(std::size_t k) const {
    MetricField d = *this;
    for (auto& e : d.upper_) e = diff(e, k);
    return d;
  }

  template <Scalar S>
  Matrix<S> at(std::span<const S> x) const {
    check_point(x.size());
    Matrix<S> m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j) m(i, j) = m(j, i) = infgeom::eval<S>(entry(i, j), x);
    return m;
  }
  template <Scalar S>
  Matrix<S> at(const std::vector<S>& x) const {
    return at<S>(std::span<const S>(x));
  }

  /// G at a point model, every entry extended to the nilpotent perturbation.
  template <Scalar S>
  std::vector<std::vector<WeilElement<S>>> jet(std::span<const WeilElement<S>> p) const {
    check_point(p.size());
    std::vector<std::vector<WeilElement<S>>> m(n_, std::vector<WeilElement<S>>(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j) m[i][j] = m[j][i] = evaluate_at<S>(entry(i, j), p);
    return m;
  }

  /// True iff every entry is the constant of the identity matrix.
  bool is_identity() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j)
        if (!entry(i, j).is_constant(i == j ? 1 : 0)) return false;
    return true;
  }

  bool uses_primitives() const {
    for (const auto& e : upper_)
      if (infgeom::uses_primitives(e)) return true;
    return false;
  }

 private:
  void check_point(std::size_t size) const {
    if (size != n_) throw input_error("point has " + std::to_string(size) + " coordinates, metric expects " + std::to_string(n_));
  }

  std::size_t n_ = 0;
  std::vector<Expr> upper_;
};

/// A tangent vector at base with principal part u: t(d) = base + d u.
template <Scalar S>
struct TangentVector {
  std::vector<S> base;
  std::vector<S> u;
};

namespace detail {

inline void require_degree(const AlgebraPtr& a, unsigned bound, const char* what) {
  if (a->degree_bound() < bound)
    throw input_error(std::string(what) + " needs an algebra of degree bound >= " + std::to_string(bound) + ", got " +
                      std::to_string(a->degree_bound()));
}

template <Scalar S>
PointModel<S> difference(std::span<const WeilElement<S>> q, std::span<const WeilElement<S>> p) {
  if (p.size() != q.size()) throw input_error("points of different dimension");
  PointModel<S> v;
  for (std::size_t i = 0; i < p.size(); ++i) v.push_back(q[i] - p[i]);
  return v;
}

/// v^T M v for a real matrix M.
template <Scalar S>
WeilElement<S> quadratic_form(const Matrix<S>& m, std::span<const WeilElement<S>> v) {
  WeilElement<S> r(v.front().algebra());
  for (std::size_t i = 0; i < v.size(); ++i) {
    WeilElement<S> row(r.algebra());
    for (std::size_t j = 0; j < v.size(); ++j)
      if (m(i, j) != S(0)) row += m(i, j) * v[j];
    r += v[i] * row;
  }
  return r;
}

template <Scalar S>
WeilElement<S> quadratic_form(const std::vector<std::vector<WeilElement<S>>>& m, std::span<const WeilElement<S>> v) {
  WeilElement<S> r(v.front().algebra());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) r += v[i] * m[i][j] * v[j];
  return r;
}

}  // namespace detail

/// g(x, x + z) = z^T G(x) z for nilpotent offsets z.
template <Scalar S>
WeilElement<S> g_eval(const MetricField& m, std::span<const S> x, std::span<const WeilElement<S>> z) {
  detail::require_degree(common_algebra<S>(z), 2, "g_eval");
  return detail::quadratic_form<S>(m.at<S>(x), z);
}

/// The symmetric extension to third-order neighbours,
/// ḡ(x, x + z) = z^T (G(x) + 1/2 D_z G(x)) z.
template <Scalar S>
WeilElement<S> gbar_eval(const MetricField& m, std::span<const S> x, std::span<const WeilElement<S>> z) {
  const AlgebraPtr& alg = common_algebra<S>(z);
  detail::require_degree(alg, 3, "gbar_eval");
  const std::size_t n = m.n();
  std::vector<std::vector<WeilElement<S>>> g(n, std::vector<WeilElement<S>>(n, WeilElement<S>(alg)));
  const Matrix<S> g0 = m.at<S>(x);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g[i][j] += g0(i, j);
  for (std::size_t k = 0; k < n; ++k) {
    const Matrix<S> dk = m.partial(k).at<S>(x);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (dk(i, j) != S(0)) g[i][j] += (S(1) / S(2)) * dk(i, j) * z[k];
  }
  return detail::quadratic_form<S>(g, z);
}

/// g(p, q) = (q - p)^T G(p) (q - p) for two point models over one algebra.
template <Scalar S>
WeilElement<S> square_distance(const MetricField& m, std::span<const WeilElement<S>> p, std::span<const WeilElement<S>> q) {
  const PointModel<S> v = detail::difference<S>(q, p);
  return detail::quadratic_form<S>(m.jet<S>(p), v);
}

/// ḡ(p, q) = v^T (G(p) + 1/2 D_v G(p)) v with v = q - p.
template <Scalar S>
WeilElement<S> gbar(const MetricField& m, std::span<const WeilElement<S>> p, std::span<const WeilElement<S>> q) {
  const PointModel<S> v = detail::difference<S>(q, p);
  auto g = m.jet<S>(p);
  const S half = S(1) / S(2);
  for (std::size_t k = 0; k < m.n(); ++k) {
    const auto dk = m.partial(k).jet<S>(p);
    for (std::size_t i = 0; i < m.n(); ++i)
      for (std::size_t j = 0; j < m.n(); ++j) g[i][j] += half * (v[k] * dk[i][j]);
  }
  return detail::quadratic_form<S>(g, v);
}

/// <t, s> = u^T G(x) v.
template <Scalar S>
S inner_product(const MetricField& m, const TangentVector<S>& t, const TangentVector<S>& s) {
  if (t.base != s.base) throw input_error("tangent vectors at different points");
  if (t.u.size() != m.n() || s.u.size() != m.n()) throw input_error("principal part has the wrong dimension");
  const Matrix<S> g = m.at<S>(t.base);
  S r(0);
  for (std::size_t i = 0; i < m.n(); ++i)
    for (std::size_t j = 0; j < m.n(); ++j) r += t.u[i] * g(i, j) * s.u[j];
  return r;
}

/// Christoffel symbols of the second kind at a point; get(i, j, k) = Γ^i_jk.
template <Scalar S>
class Christoffel {
 public:
  Christoffel() = default;
  explicit Christoffel(std::size_t n) : n_(n), data_(n * n * n, S(0)) {}

  std::size_t n() const { return n_; }
  const S& get(std::size_t i, std::size_t j, std::size_t k) const { return data_[(i * n_ + j) * n_ + k]; }
  S& get(std::size_t i, std::size_t j, std::size_t k) { return data_[(i * n_ + j) * n_ + k]; }

  bool is_zero(double eps = kDefaultEpsilon) const {
    for (const auto& c : data_)
      if (!infgeom::is_zero<S>(c, eps)) return false;
    return true;
  }

  /// Γ(v, w)^i = Γ^i_jk v_j w_k.
  template <class V>
  std::vector<V> contract(const std::vector<V>& v, const std::vector<V>& w) const {
    std::vector<V> out;
    for (std::size_t i = 0; i < n_; ++i) {
      V acc = v.front() * S(0);
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t k = 0; k < n_; ++k)
          if (get(i, j, k) != S(0)) acc = acc + get(i, j, k) * (v[j] * w[k]);
      out.push_back(acc);
    }
    return out;
  }

 private:
  std::size_t n_ = 0;
  std::vector<S> data_;
};

/// Γ^i_jk = 1/2 g^il (d_j g_lk + d_k g_lj - d_l g_jk).
template <Scalar S>
Christoffel<S> christoffel(const MetricField& m, std::span<const S> x, double eps = kDefaultEpsilon) {
  const std::size_t n = m.n();
  const Matrix<S> ginv = inverse(m.at<S>(x), eps);
  std::vector<Matrix<S>> dg;
  for (std::size_t k = 0; k < n; ++k) dg.push_back(m.partial(k).at<S>(x));
  Christoffel<S> gamma(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        S acc(0);
        for (std::size_t l = 0; l < n; ++l) acc += ginv(i, l) * (dg[j](l, k) + dg[k](l, j) - dg[l](j, k));
        gamma.get(i, j, k) = gamma.get(i, k, j) = acc / S(2);
      }
  return gamma;
}

}  // namespace infgeom
