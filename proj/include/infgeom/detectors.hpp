#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "infgeom/chart.hpp"
#include "infgeom/errors.hpp"
#include "infgeom/expr.hpp"
#include "infgeom/jet.hpp"
#include "infgeom/laplacian.hpp"
#include "infgeom/linalg.hpp"
#include "infgeom/metric.hpp"

namespace infgeom {

/// df_x with entries d f_i / d x_j.
template <Scalar S>
Matrix<S> jacobian(const FunctionModel& f, const std::vector<S>& x) {
  if (f.n_in() != x.size()) throw input_error("point dimension does not match the map");
  Matrix<S> a(f.n_out(), f.n_in());
  for (std::size_t i = 0; i < f.n_out(); ++i)
    for (std::size_t j = 0; j < f.n_in(); ++j) a(i, j) = eval<S>(diff(f[i], j), x);
  return a;
}

namespace detail {

template <Scalar S>
Matrix<S> regular_jacobian(const FunctionModel& f, const std::vector<S>& x, double eps) {
  if (f.n_in() != f.n_out()) throw input_error("map must go from R^n to R^n");
  Matrix<S> a = jacobian<S>(f, x);
  if (is_zero<S>(determinant(a), eps)) throw precondition_error("Jacobian is singular at the point");
  return a;
}

}  // namespace detail

template <Scalar S>
struct ConformalReport {
  bool conformal = false;
  std::optional<S> k;  // present iff conformal
  bool isometry = false;
};

/// A^T H(f(x)) A = k G(x) with k > 0, A = df_x. Exact mode demands exact
/// proportionality; float mode fits k by least squares over the upper
/// triangle and accepts a maximal residual of eps.
template <Scalar S>
ConformalReport<S> conformal_check(const FunctionModel& f, const MetricField& src, const MetricField& dst,
                                   const std::vector<S>& x, double eps = kDefaultEpsilon) {
  if (src.n() != f.n_in() || dst.n() != f.n_out()) throw input_error("metric dimensions do not match the map");
  const Matrix<S> a = detail::regular_jacobian<S>(f, x, eps);
  const Matrix<S> g = src.at<S>(x);
  const Matrix<S> h = dst.at<S>(f.template eval<S>(x));
  const Matrix<S> pulled = a.transpose() * h * a;
  const std::size_t n = g.rows();

  S k(0);
  bool proportional = true;
  if constexpr (is_exact_v<S>) {
    std::optional<S> ratio;
    for (std::size_t i = 0; i < n && proportional; ++i)
      for (std::size_t j = i; j < n && proportional; ++j) {
        if (g(i, j) == S(0)) {
          proportional = pulled(i, j) == S(0);
        } else if (!ratio) {
          ratio = pulled(i, j) / g(i, j);
        } else {
          proportional = pulled(i, j) == *ratio * g(i, j);
        }
      }
    if (ratio) k = *ratio;
  } else {
    S num(0), den(0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        num += pulled(i, j) * g(i, j);
        den += g(i, j) * g(i, j);
      }
    k = num / den;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        if (std::abs(pulled(i, j) - k * g(i, j)) > eps) proportional = false;
  }

  ConformalReport<S> r;
  r.conformal = proportional && is_positive<S>(k, eps);
  if (r.conformal) {
    r.k = k;
    r.isometry = near<S>(k, S(1), eps);
  }
  return r;
}

/// f maps the universal L-neighbour of x to an L-neighbour of f(x).
template <Scalar S>
bool preserves_L(const FunctionModel& f, const MetricField& src, const MetricField& dst, const std::vector<S>& x,
                 double eps = kDefaultEpsilon) {
  detail::regular_jacobian<S>(f, x, eps);
  const auto chart = GeodesicChart<S>::make(src, x, false, eps);
  const LPoint<S> lp = universal_L_point(chart);
  const PointModel<S> image = evaluate_at<S>(f, std::span<const WeilElement<S>>(lp.point));
  return is_L_neighbor<S>(dst, f.template eval<S>(x), image, eps);
}

/// Flat metrics on both sides.
template <Scalar S>
bool preserves_L(const FunctionModel& f, const std::vector<S>& x, double eps = kDefaultEpsilon) {
  const auto flat = MetricField::euclidean(f.n_in());
  return preserves_L<S>(f, flat, MetricField::euclidean(f.n_out()), x, eps);
}

/// I_x(z) = x + i(z - x) on R^2 = C.
template <Scalar S>
PointModel<S> almost_complex_apply(const std::vector<S>& x, std::span<const WeilElement<S>> z) {
  if (x.size() != 2 || z.size() != 2) throw input_error("the almost complex structure lives on R^2");
  return {(z[1] - x[1]) * S(-1) + x[0], z[0] - x[0] + x[1]};
}

/// f(I_x(z)) = I_f(x)(f(z)) at the generic first-order neighbour z of x.
template <Scalar S>
bool preserves_almost_complex(const FunctionModel& f, const std::vector<S>& x, double eps = kDefaultEpsilon) {
  const AlgebraPtr d1 = make_dk_algebra(2, 1);
  const auto gens = WeilElement<S>::generators(d1);
  const PointModel<S> z = displaced<S>(x, gens);
  const PointModel<S> lhs = evaluate_at<S>(f, almost_complex_apply<S>(x, z));
  const PointModel<S> rhs = almost_complex_apply<S>(f.template eval<S>(x), evaluate_at<S>(f, z));
  return lhs[0].near(rhs[0], eps) && lhs[1].near(rhs[1], eps);
}

/// Complex product (a + ib)(w_1 + i w_2) on pairs of algebra elements.
template <Scalar S>
PointModel<S> complex_multiply(const S& a, const S& b, std::span<const WeilElement<S>> w) {
  return {a * w[0] - b * w[1], b * w[0] + a * w[1]};
}

template <Scalar S>
struct CrReport {
  bool regular = false;  // det df_x != 0
  bool orientation_preserving = false;
  bool cr_equations = false;
  bool i_commutes = false;
  std::optional<bool> conformal;  // only at regular points
  std::optional<bool> preserves_L;
  bool harmonic_components = false;
  bool complex_differentiable = false;
  bool holomorphic_at = false;  // CR and orientation preserving
  std::optional<std::pair<S, S>> derivative;  // f'(x) = a + ib when complex differentiable
};

template <Scalar S>
CrReport<S> cr_check(const FunctionModel& f, const std::vector<S>& x, double eps = kDefaultEpsilon) {
  if (f.n_in() != 2 || f.n_out() != 2) throw input_error("cr_check needs a map R^2 -> R^2");
  const Matrix<S> j = jacobian<S>(f, x);
  CrReport<S> r;
  const S det = determinant(j);
  r.regular = !is_zero<S>(det, eps);
  r.orientation_preserving = is_positive<S>(det, eps);
  r.cr_equations = near<S>(j(0, 0), j(1, 1), eps) && near<S>(j(0, 1), -j(1, 0), eps);
  r.i_commutes = preserves_almost_complex<S>(f, x, eps);
  if (r.regular) {
    const auto flat = MetricField::euclidean(2);
    r.conformal = conformal_check<S>(f, flat, flat, x, eps).conformal;
    r.preserves_L = preserves_L<S>(f, x, eps);
  }
  r.holomorphic_at = r.cr_equations && r.orientation_preserving;

  const auto flat = MetricField::euclidean(2);
  r.harmonic_components = is_harmonic_at<S>(flat, f[0], x, eps) && is_harmonic_at<S>(flat, f[1], x, eps);
  if (r.cr_equations) {
    const S a = j(0, 0), b = j(1, 0);
    const AlgebraPtr dl = make_dl_algebra(2);
    const auto gens = WeilElement<S>::generators(dl);
    const PointModel<S> z = displaced<S>(x, gens);
    const PointModel<S> fz = evaluate_at<S>(f, z);
    const std::vector<S> fx = f.template eval<S>(x);
    const PointModel<S> lin = complex_multiply<S>(a, b, gens);
    r.complex_differentiable = (lin[0] + fx[0]).near(fz[0], eps) && (lin[1] + fx[1]).near(fz[1], eps);
    if (r.complex_differentiable) r.derivative = std::make_pair(a, b);
  }
  return r;
}

}  // namespace infgeom
