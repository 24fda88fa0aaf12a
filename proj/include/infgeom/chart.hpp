#pragma once

// Geodesic coordinates at a base point x, to second order:
//   phi(y)     = x + A y - 1/2 Γ(Ay, Ay)
//   phi^-1(p)  = A^-1 (v + 1/2 Γ(v, v)),  v = p - x
// with Γ the Christoffel symbols at x. The pulled-back metric has vanishing
// first partials at 0 and equals A^T G(x) A there.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "infgeom/errors.hpp"
#include "infgeom/expr.hpp"
#include "infgeom/jet.hpp"
#include "infgeom/linalg.hpp"
#include "infgeom/metric.hpp"
#include "infgeom/weil_algebra.hpp"
#include "infgeom/weil_element.hpp"

namespace infgeom {

template <Scalar S>
class GeodesicChart {
 public:
  /// A = I when normalize is false. With normalize, float mode uses the
  /// Cholesky factor of G(x)^-1; exact mode requires G(x) = I.
  static GeodesicChart make(const MetricField& m, std::vector<S> x, bool normalize, double eps = kDefaultEpsilon) {
    GeodesicChart c(m, std::move(x), eps);
    if (normalize) {
      if constexpr (is_exact_v<S>) {
        if (c.g0_ != Matrix<S>::identity(m.n()))
          throw precondition_error("exact normal chart needs G(x) = I or an explicit normalizer");
      } else {
        c.a_ = cholesky(inverse(c.g0_, eps), eps);
      }
    }
    c.finish();
    return c;
  }

  /// Normalizer supplied by the caller; it must satisfy A^T G(x) A = I.
  static GeodesicChart with_normalizer(const MetricField& m, std::vector<S> x, const Matrix<S>& a,
                                       double eps = kDefaultEpsilon) {
    GeodesicChart c(m, std::move(x), eps);
    if (a.rows() != m.n() || a.cols() != m.n()) throw input_error("normalizer has the wrong size");
    if (!(a.transpose() * c.g0_ * a).near(Matrix<S>::identity(m.n()), eps))
      throw precondition_error("normalizer does not satisfy A^T G(x) A = I");
    c.a_ = a;
    c.finish();
    return c;
  }

  std::size_t n() const { return metric_.n(); }
  const MetricField& metric() const { return metric_; }
  const std::vector<S>& base() const { return x_; }
  const Christoffel<S>& gamma() const { return gamma_; }
  const Matrix<S>& normalizer() const { return a_; }
  /// G(x) in the original coordinates.
  const Matrix<S>& metric_at_base() const { return g0_; }
  /// A^T G(x) A, the chart metric at 0.
  const Matrix<S>& chart_metric_at_base() const { return ghat0_; }
  bool is_normal() const { return ghat0_.near(Matrix<S>::identity(n()), eps_); }
  double epsilon() const { return eps_; }

  /// The point with nilpotent chart coordinates y.
  PointModel<S> from_chart(std::span<const WeilElement<S>> y) const {
    check_dim(y.size());
    const PointModel<S> v = apply(a_, y);
    const PointModel<S> q = gamma_.contract(v, v);
    PointModel<S> p;
    for (std::size_t i = 0; i < n(); ++i) p.push_back(v[i] - (S(1) / S(2)) * q[i] + x_[i]);
    return p;
  }

  /// Nilpotent chart coordinates of a point model over x.
  PointModel<S> to_chart(std::span<const WeilElement<S>> p) const {
    check_dim(p.size());
    PointModel<S> v;
    for (std::size_t i = 0; i < n(); ++i) {
      if (!near<S>(p[i].unit_part(), x_[i], eps_)) throw precondition_error("point is not infinitesimally near the chart base");
      v.push_back(p[i].nilpotent_part());
    }
    const PointModel<S> q = gamma_.contract(v, v);
    for (std::size_t i = 0; i < n(); ++i) v[i] += (S(1) / S(2)) * q[i];
    return apply(a_inv_, v);
  }

  /// phi as a map of the chart variables y1..yn.
  FunctionModel forward_map() const {
    std::vector<Expr> ay;
    for (std::size_t i = 0; i < n(); ++i) {
      Expr s(0);
      for (std::size_t j = 0; j < n(); ++j)
        if (a_(i, j) != S(0)) s = s + constant(a_(i, j)) * var(j);
      ay.push_back(s);
    }
    std::vector<Expr> out;
    for (std::size_t i = 0; i < n(); ++i) {
      Expr s = constant(x_[i]) + ay[i];
      for (std::size_t j = 0; j < n(); ++j)
        for (std::size_t k = 0; k < n(); ++k)
          if (gamma_.get(i, j, k) != S(0)) s = s - constant(gamma_.get(i, j, k) / S(2)) * ay[j] * ay[k];
      out.push_back(s);
    }
    return FunctionModel(n(), std::move(out));
  }

  /// phi^-1 as a map of the original coordinates.
  FunctionModel inverse_map() const {
    std::vector<Expr> v;
    for (std::size_t i = 0; i < n(); ++i) v.push_back(var(i) - constant(x_[i]));
    std::vector<Expr> w;
    for (std::size_t i = 0; i < n(); ++i) {
      Expr s = v[i];
      for (std::size_t j = 0; j < n(); ++j)
        for (std::size_t k = 0; k < n(); ++k)
          if (gamma_.get(i, j, k) != S(0)) s = s + constant(gamma_.get(i, j, k) / S(2)) * v[j] * v[k];
      w.push_back(s);
    }
    std::vector<Expr> out;
    for (std::size_t i = 0; i < n(); ++i) {
      Expr s(0);
      for (std::size_t j = 0; j < n(); ++j)
        if (a_inv_(i, j) != S(0)) s = s + constant(a_inv_(i, j)) * w[j];
      out.push_back(s);
    }
    return FunctionModel(n(), std::move(out));
  }

  /// Ĝ(y) = J(y)^T G(phi(y)) J(y), J the Jacobian of phi.
  MetricField pulled_back_metric() const {
    const FunctionModel phi = forward_map();
    std::vector<std::vector<Expr>> g(n(), std::vector<Expr>(n()));
    std::vector<std::vector<Expr>> gphi(n(), std::vector<Expr>(n()));
    for (std::size_t i = 0; i < n(); ++i)
      for (std::size_t j = 0; j < n(); ++j) gphi[i][j] = substitute(metric_.entry(i, j), phi.components());
    for (std::size_t a = 0; a < n(); ++a)
      for (std::size_t b = 0; b < n(); ++b) {
        Expr s(0);
        for (std::size_t i = 0; i < n(); ++i)
          for (std::size_t j = 0; j < n(); ++j) s = s + diff(phi[i], a) * gphi[i][j] * diff(phi[j], b);
        g[a][b] = s;
      }
    return MetricField(n(), g);
  }

 private:
  GeodesicChart(const MetricField& m, std::vector<S> x, double eps) : metric_(m), x_(std::move(x)), eps_(eps) {
    if (x_.size() != m.n()) throw input_error("base point dimension does not match the metric");
    g0_ = m.at<S>(x_);
    if (!try_inverse(g0_, eps)) throw precondition_error("metric is singular at the base point");
    gamma_ = christoffel<S>(m, x_, eps);
    a_ = Matrix<S>::identity(m.n());
  }

  void finish() {
    a_inv_ = inverse(a_, eps_);
    ghat0_ = a_.transpose() * g0_ * a_;
  }

  void check_dim(std::size_t size) const {
    if (size != n()) throw input_error("point dimension does not match the chart");
  }

  static Expr constant(const S& s) { return Expr(to_rational(s)); }

  static PointModel<S> apply(const Matrix<S>& m, std::span<const WeilElement<S>> y) {
    PointModel<S> out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      WeilElement<S> s(y.front().algebra());
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(i, j) != S(0)) s += m(i, j) * y[j];
      out.push_back(std::move(s));
    }
    return out;
  }

  MetricField metric_;
  std::vector<S> x_;
  double eps_;
  Matrix<S> g0_;
  Christoffel<S> gamma_;
  Matrix<S> a_;
  Matrix<S> a_inv_;
  Matrix<S> ghat0_;
};

template <Scalar S>
GeodesicChart<S> geodesic_chart(const MetricField& m, std::vector<S> x, bool normalize, double eps = kDefaultEpsilon) {
  return GeodesicChart<S>::make(m, std::move(x), normalize, eps);
}

namespace detail {

template <Scalar S>
void require_order(std::span<const WeilElement<S>> chart_coords, unsigned k, double eps, const char* what) {
  if (!is_neighbour_of_order<S>(chart_coords, k, eps))
    throw precondition_error(std::string(what) + " needs a neighbour of order " + std::to_string(k));
}

template <Scalar S>
PointModel<S> scaled(std::span<const WeilElement<S>> y, const S& s) {
  PointModel<S> out;
  for (const auto& e : y) out.push_back(s * e);
  return out;
}

}  // namespace detail

/// z' = phi(-phi^-1 z), the affine combination 2x - z.
template <Scalar S>
PointModel<S> mirror(const GeodesicChart<S>& chart, std::span<const WeilElement<S>> z) {
  const PointModel<S> y = chart.to_chart(z);
  detail::require_order<S>(y, 2, chart.epsilon(), "mirror");
  return chart.from_chart(detail::scaled<S>(y, S(-1)));
}

/// t x + (1 - t) z = phi((1 - t) phi^-1 z).
template <Scalar S>
PointModel<S> affine_combination(const GeodesicChart<S>& chart, const S& t, std::span<const WeilElement<S>> z) {
  const PointModel<S> y = chart.to_chart(z);
  detail::require_order<S>(y, 2, chart.epsilon(), "affine_combination");
  return chart.from_chart(detail::scaled<S>(y, S(1) - t));
}

/// lambda(x, y, z) = phi(phi^-1 y + phi^-1 z) for first-order y, z.
template <Scalar S>
PointModel<S> parallelogram(const GeodesicChart<S>& chart, std::span<const WeilElement<S>> y,
                            std::span<const WeilElement<S>> z) {
  const PointModel<S> cy = chart.to_chart(y);
  const PointModel<S> cz = chart.to_chart(z);
  detail::require_order<S>(cy, 1, chart.epsilon(), "parallelogram");
  detail::require_order<S>(cz, 1, chart.epsilon(), "parallelogram");
  PointModel<S> sum;
  for (std::size_t i = 0; i < cy.size(); ++i) sum.push_back(cy[i] + cz[i]);
  return chart.from_chart(sum);
}

/// t̄(δ) = phi(δ A^-1 u).
template <Scalar S>
PointModel<S> geodesic_prolong(const GeodesicChart<S>& chart, const TangentVector<S>& t, const WeilElement<S>& delta) {
  if (t.base != chart.base()) throw input_error("tangent vector is not based at the chart base");
  if (t.u.size() != chart.n()) throw input_error("principal part has the wrong dimension");
  if (!delta.is_nilpotent(chart.epsilon()) || !delta.pow(3).is_zero(chart.epsilon()))
    throw precondition_error("geodesic_prolong needs δ with δ^3 = 0");
  const Matrix<S> a_inv = inverse(chart.normalizer(), chart.epsilon());
  PointModel<S> y;
  for (std::size_t i = 0; i < chart.n(); ++i) {
    S c(0);
    for (std::size_t j = 0; j < chart.n(); ++j) c += a_inv(i, j) * t.u[j];
    y.push_back(c * delta);
  }
  return chart.from_chart(y);
}

/// The α with d α = 1/2 (g(x, z) - ḡ(t(d), z)) / <t, t> for all d in D,
/// computed by adjoining a square-zero d to the algebra of z.
template <Scalar S>
WeilElement<S> scalar_component(const MetricField& m, std::span<const WeilElement<S>> z, const TangentVector<S>& t,
                                double eps = kDefaultEpsilon) {
  const std::size_t n = m.n();
  if (z.size() != n || t.base.size() != n) throw input_error("dimension mismatch");
  const S tt = inner_product(m, t, t);
  if (is_zero<S>(tt, eps)) throw precondition_error("tangent vector is not proper: <t,t> = 0");
  PointModel<S> offsets;
  for (std::size_t i = 0; i < n; ++i) {
    if (!near<S>(z[i].unit_part(), t.base[i], eps)) throw precondition_error("point is not infinitesimally near the tangent base");
    offsets.push_back(z[i].nilpotent_part());
  }
  detail::require_order<S>(offsets, 2, eps, "scalar_component");

  const AlgebraPtr& a = common_algebra<S>(z);
  TensorEmbedding<S> emb(a, make_dk_algebra(1, 1));
  const WeilElement<S> d = emb.embed_right(WeilElement<S>::generator(emb.right(), 0));
  const WeilElement<S> one = WeilElement<S>::one(emb.algebra());
  PointModel<S> zz, xx, td;
  for (std::size_t i = 0; i < n; ++i) {
    zz.push_back(emb.embed_left(z[i]));
    xx.push_back(one * t.base[i]);
    td.push_back(xx.back() + t.u[i] * d);
  }
  const WeilElement<S> num = square_distance<S>(m, xx, zz) - gbar<S>(m, td, zz);
  if (!emb.left_component(num, 0).is_zero(eps))
    throw std::logic_error("scalar component: d-free part of g(x,z) - ḡ(t(d),z) does not vanish");
  return emb.left_component(num, 1) * (S(1) / (S(2) * tt));
}

/// proj_t(z) = t̄(α(z, t)).
template <Scalar S>
PointModel<S> orth_project(const GeodesicChart<S>& chart, std::span<const WeilElement<S>> z, const TangentVector<S>& t) {
  return geodesic_prolong(chart, t, scalar_component<S>(chart.metric(), z, t, chart.epsilon()));
}

/// z ~_L x: z is a second-order neighbour whose geodesic chart coordinates
/// satisfy the L-relations for the chart metric at 0. In a normal chart these
/// read z_i^2 = z_j^2, z_i z_j = 0.
template <Scalar S>
bool is_L_neighbor(const MetricField& m, const std::vector<S>& x, std::span<const WeilElement<S>> z,
                   double eps = kDefaultEpsilon) {
  const auto chart = GeodesicChart<S>::make(m, x, false, eps);
  const PointModel<S> y = chart.to_chart(z);
  if (!is_neighbour_of_order<S>(y, 2, eps)) return false;
  return satisfies_l_relations<S>(y, chart.chart_metric_at_base(), eps);
}

/// An arbitrary L-neighbour of the chart base: phi applied to the generic
/// point of the L-algebra of the chart metric at 0.
template <Scalar S>
struct LPoint {
  AlgebraPtr algebra;
  PointModel<S> chart_coords;
  PointModel<S> point;

  /// Index of the top basis element Q.
  std::size_t q_index() const { return algebra->dimension() - 1; }
};

template <Scalar S>
LPoint<S> universal_L_point(const GeodesicChart<S>& chart) {
  const std::size_t n = chart.n();
  AlgebraPtr alg;
  if (chart.is_normal()) {
    alg = make_dl_algebra(static_cast<int>(n));
  } else {
    Matrix<Rational> p(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) p(i, j) = to_rational(chart.chart_metric_at_base()(i, j));
    alg = make_dl_algebra_for_inner_product(p);
  }
  LPoint<S> lp{alg, WeilElement<S>::generators(alg), {}};
  lp.point = chart.from_chart(lp.chart_coords);
  return lp;
}

}  // namespace infgeom
