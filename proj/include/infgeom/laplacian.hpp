#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "infgeom/chart.hpp"
#include "infgeom/errors.hpp"
#include "infgeom/expr.hpp"
#include "infgeom/jet.hpp"
#include "infgeom/metric.hpp"

namespace infgeom {

/// Everything the mirror-average computation produces.
template <Scalar S>
struct LaplacianReport {
  LPoint<S> lpoint;
  WeilElement<S> combination;  // f(z) + f(z') - 2 f(x)
  WeilElement<S> square_distance;  // g(x, z)
  bool well_posed = false;  // combination vanishes off the Q direction
  S coefficient{};  // L with combination = L g(x, z)
  S value{};  // n L
};

namespace detail {

template <Scalar S>
PointModel<S> offsets_from(std::span<const WeilElement<S>> p, std::span<const S> x) {
  PointModel<S> v;
  for (std::size_t i = 0; i < p.size(); ++i) v.push_back(p[i] - x[i]);
  return v;
}

/// Exact mode uses the plain geodesic chart; float mode normalizes it.
template <Scalar S>
GeodesicChart<S> laplacian_chart(const MetricField& m, const std::vector<S>& x, double eps) {
  return GeodesicChart<S>::make(m, x, !is_exact_v<S>, eps);
}

}  // namespace detail

/// f(z) + f(z') - 2 f(x) = L g(x, z) at the universal L-neighbour z; Δf(x) = nL.
template <Scalar S>
LaplacianReport<S> laplacian_report(const GeodesicChart<S>& chart, const Expr& f) {
  const std::vector<S>& x = chart.base();
  const double eps = chart.epsilon();
  LaplacianReport<S> r{universal_L_point(chart), {}, {}, false, S(0), S(0)};
  const PointModel<S>& z = r.lpoint.point;
  const PointModel<S> zm = mirror(chart, std::span<const WeilElement<S>>(z));
  const S fx = eval<S>(f, x);
  r.combination = evaluate_at<S>(f, z) + evaluate_at<S>(f, zm) - S(2) * fx;
  r.square_distance = g_eval<S>(chart.metric(), x, detail::offsets_from<S>(z, x));

  const std::size_t q = r.lpoint.q_index();
  r.well_posed = true;
  for (std::size_t i = 0; i < q; ++i)
    if (!is_zero<S>(r.combination[i], eps)) r.well_posed = false;
  if (!r.well_posed) throw std::logic_error("f(z) + f(z') - 2f(x) has components off the Q direction");
  const S gq = r.square_distance[q];
  if (is_zero<S>(gq, eps)) throw precondition_error("g(x, z) vanishes at the universal L-point");
  r.coefficient = r.combination[q] / gq;
  r.value = S(static_cast<int>(chart.n())) * r.coefficient;
  return r;
}

template <Scalar S>
S laplacian(const MetricField& m, const Expr& f, const std::vector<S>& x, double eps = kDefaultEpsilon) {
  return laplacian_report<S>(detail::laplacian_chart<S>(m, x, eps), f).value;
}

template <Scalar S>
S laplacian(const MetricField& m, const FunctionModel& f, const std::vector<S>& x, double eps = kDefaultEpsilon) {
  if (f.n_out() != 1) throw input_error("laplacian needs a scalar function");
  return laplacian<S>(m, f[0], x, eps);
}

/// tr(G(x)^-1 Hess(f o phi)(0)) in the geodesic chart, i.e.
/// g^jk (d_jk f - Γ^i_jk d_i f) at x.
template <Scalar S>
S laplacian_trace(const MetricField& m, const Expr& f, const std::vector<S>& x, double eps = kDefaultEpsilon) {
  const std::size_t n = m.n();
  const Matrix<S> ginv = inverse(m.at<S>(x), eps);
  const Christoffel<S> gamma = christoffel<S>(m, x, eps);
  std::vector<Expr> df;
  std::vector<S> grad;
  for (std::size_t i = 0; i < n; ++i) {
    df.push_back(diff(f, i));
    grad.push_back(eval<S>(df.back(), x));
  }
  S acc(0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      if (ginv(j, k) == S(0)) continue;
      S h = eval<S>(diff(df[j], k), x);
      for (std::size_t i = 0; i < n; ++i) h -= gamma.get(i, j, k) * grad[i];
      acc += ginv(j, k) * h;
    }
  return acc;
}

/// f(x) + df_x(z) + (1/2n) Δf(x) |z|^2 on the flat standard metric, z the
/// nilpotent offsets of an L-point.
template <Scalar S>
WeilElement<S> taylor_L(const MetricField& m, const Expr& f, const std::vector<S>& x, std::span<const WeilElement<S>> z) {
  if (!m.is_identity()) throw precondition_error("taylor_L needs the flat standard metric");
  const std::size_t n = m.n();
  if (x.size() != n || z.size() != n) throw input_error("dimension mismatch");
  detail::check_nilpotent_arguments<S>(z, n);
  const auto& v = z;
  WeilElement<S> r = WeilElement<S>::constant(v.front().algebra(), eval<S>(f, x));
  WeilElement<S> norm2(v.front().algebra());
  for (std::size_t i = 0; i < n; ++i) {
    r += eval<S>(diff(f, i), x) * v[i];
    norm2 += v[i] * v[i];
  }
  const S lap = laplacian<S>(m, f, x);
  return r + (lap / S(2 * static_cast<int>(n))) * norm2;
}

/// Affine preservation f(s x + (1 - s) z) = s f(x) + (1 - s) f(z) at the
/// universal L-neighbour, for one value of s.
template <Scalar S>
bool preserves_affine_combination(const GeodesicChart<S>& chart, const LPoint<S>& lp, const Expr& f, const S& s) {
  const S fx = eval<S>(f, chart.base());
  const PointModel<S> w = affine_combination(chart, s, std::span<const WeilElement<S>>(lp.point));
  const WeilElement<S> lhs = evaluate_at<S>(f, w);
  const WeilElement<S> rhs = (S(1) - s) * evaluate_at<S>(f, lp.point) + s * fx;
  return lhs.near(rhs, chart.epsilon());
}

template <Scalar S>
struct HarmonicReport {
  bool harmonic = false;
  S laplacian{};
  std::vector<std::pair<S, bool>> affine_checks;  // (s, preserved)
  bool affine_preserving = false;
};

/// The affine-combination scales probed by is_harmonic_at.
template <Scalar S>
std::vector<S> harmonic_probe_scales() {
  return {S(-1), S(2), S(1) / S(2)};
}

template <Scalar S>
HarmonicReport<S> harmonic_report(const MetricField& m, const Expr& f, const std::vector<S>& x,
                                  double eps = kDefaultEpsilon) {
  const auto chart = detail::laplacian_chart<S>(m, x, eps);
  const auto lr = laplacian_report<S>(chart, f);
  HarmonicReport<S> h;
  h.laplacian = lr.value;
  h.harmonic = is_zero<S>(lr.value, eps);
  h.affine_preserving = true;
  for (const S& s : harmonic_probe_scales<S>()) {
    const bool ok = preserves_affine_combination<S>(chart, lr.lpoint, f, s);
    h.affine_checks.emplace_back(s, ok);
    h.affine_preserving = h.affine_preserving && ok;
  }
  return h;
}

template <Scalar S>
bool is_harmonic_at(const MetricField& m, const Expr& f, const std::vector<S>& x, double eps = kDefaultEpsilon) {
  return harmonic_report<S>(m, f, x, eps).harmonic;
}

}  // namespace infgeom
