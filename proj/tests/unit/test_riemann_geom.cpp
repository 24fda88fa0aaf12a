#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "infgeom.hpp"
#include "oracles.hpp"

using namespace infgeom;

namespace {

using R = Rational;
using E = WeilElement<R>;

MetricField polar() { return MetricField(2, {{Expr(1), Expr(0)}, {Expr(0), parse_expr("x1^2")}}); }
MetricField sphere() { return MetricField(2, {{Expr(1), Expr(0)}, {Expr(0), parse_expr("sin(x1)^2")}}); }

PointModel<R> shifted(const std::vector<R>& x, const PointModel<R>& z) { return displaced<R>(x, z); }

PointModel<R> constants(const AlgebraPtr& a, const std::vector<R>& x) {
  PointModel<R> out;
  for (const auto& c : x) out.push_back(E::constant(a, c));
  return out;
}

std::vector<R> zeros(std::size_t n) { return std::vector<R>(n, R(0)); }

PointModel<R> embed_left(const TensorEmbedding<R>& emb, const PointModel<R>& p) {
  PointModel<R> out;
  for (const auto& e : p) out.push_back(emb.embed_left(e));
  return out;
}

PointModel<R> embed_right(const TensorEmbedding<R>& emb, const PointModel<R>& p) {
  PointModel<R> out;
  for (const auto& e : p) out.push_back(emb.embed_right(e));
  return out;
}

bool same(const PointModel<R>& a, const PointModel<R>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

/// A random nilpotent point of the given order in D_k(n).
PointModel<R> random_offsets(std::mt19937& rng, const AlgebraPtr& a, std::size_t n) {
  PointModel<R> z;
  for (std::size_t i = 0; i < n; ++i) {
    auto p = oracle::random_polynomial(rng, a->n(), a->degree_bound(), 4);
    p.add_term(Monomial::unit(a->n()), -p.coefficient(Monomial::unit(a->n())));
    z.push_back(E::from_polynomial(a, p));
  }
  return z;
}

}  // namespace

TEST(SquareDistance, EuclideanAtUniversalPointIsNQ) {
  for (int n = 1; n <= 4; ++n) {
    auto a = make_dl_algebra(n);
    auto z = E::generators(a);
    const auto un = static_cast<std::size_t>(n);
    EXPECT_EQ(g_eval<R>(MetricField::euclidean(un), zeros(un), z), R(n) * E::basis_element(a, un + 1));
  }
}

TEST(SquareDistance, ZeroOffsetGivesZero) {
  auto a = make_dk_algebra(2, 2);
  PointModel<R> z(2, E::zero(a));
  EXPECT_TRUE(g_eval<R>(polar(), std::vector<R>{R(3), R(1)}, z).is_zero());
}

TEST(SquareDistance, PolarAtUnitRadius) {
  auto z = E::generators(make_dk_algebra(2, 2));
  EXPECT_EQ(g_eval<R>(polar(), std::vector<R>{R(1), R(0)}, z), z[0] * z[0] + z[1] * z[1]);
}

TEST(SquareDistance, NeedsSecondOrderAlgebra) {
  auto z = E::generators(make_dk_algebra(2, 1));
  EXPECT_THROW(g_eval<R>(polar(), std::vector<R>{R(1), R(0)}, z), input_error);
  auto z2 = E::generators(make_dk_algebra(2, 2));
  EXPECT_THROW(gbar_eval<R>(polar(), std::vector<R>{R(1), R(0)}, z2), input_error);
}

TEST(SymmetricExtension, EuclideanHasNoCorrection) {
  auto z = E::generators(make_dk_algebra(3, 3));
  const auto m = MetricField::euclidean(3);
  EXPECT_EQ(gbar_eval<R>(m, zeros(3), z), g_eval<R>(m, zeros(3), z));
}

TEST(SymmetricExtension, SymmetricOnThirdOrderPoints) {
  std::mt19937 rng(101);
  for (std::size_t n : {2u, 3u}) {
    auto a = make_dk_algebra(static_cast<int>(n), 3);
    for (int t = 0; t < 8; ++t) {
      const auto m = oracle::random_metric(rng, n);
      const auto x = oracle::random_point(rng, n);
      const auto p = constants(a, x);
      const auto q = shifted(x, random_offsets(rng, a, n));
      EXPECT_EQ(gbar<R>(m, p, q), gbar<R>(m, q, p));
    }
  }
}

TEST(MetricIdentity, FirstOrderDifferenceOnRandomMetrics) {
  std::mt19937 rng(202);
  for (std::size_t n : {2u, 3u}) {
    auto d = make_dk_algebra(static_cast<int>(n), 1);
    TensorEmbedding<R> emb(d, d);
    const auto y1 = embed_left(emb, E::generators(d));
    const auto y2 = embed_right(emb, E::generators(d));
    for (int t = 0; t < 10; ++t) {
      const auto m = oracle::random_metric(rng, n);
      const auto x = oracle::random_point(rng, n);
      PointModel<R> diff;
      for (std::size_t i = 0; i < n; ++i) diff.push_back(y2[i] - y1[i]);
      EXPECT_EQ(g_eval<R>(m, x, diff), square_distance<R>(m, shifted(x, y1), shifted(x, y2)));
    }
  }
}

TEST(InnerProduct, Euclidean) {
  const auto m = MetricField::euclidean(2);
  TangentVector<R> e1{{R(0), R(0)}, {R(1), R(0)}}, e2{{R(0), R(0)}, {R(0), R(1)}};
  EXPECT_EQ(inner_product(m, e1, e1), 1);
  EXPECT_EQ(inner_product(m, e1, e2), 0);
}

TEST(InnerProduct, DefiningIdentityWithTwoSquareZeroGenerators) {
  std::mt19937 rng(303);
  auto d = make_dk_algebra(1, 1);
  TensorEmbedding<R> emb(d, d);
  const E d1 = emb.embed_left(E::generator(d, 0));
  const E d2 = emb.embed_right(E::generator(d, 0));
  for (int t = 0; t < 10; ++t) {
    const auto m = oracle::random_metric(rng, 2);
    const auto x = oracle::random_point(rng, 2);
    TangentVector<R> ts{x, {oracle::random_rational(rng), oracle::random_rational(rng)}};
    TangentVector<R> ss{x, {oracle::random_rational(rng), oracle::random_rational(rng)}};
    PointModel<R> p, q;
    for (std::size_t i = 0; i < 2; ++i) {
      p.push_back(d1 * ts.u[i] + x[i]);
      q.push_back(d2 * ss.u[i] + x[i]);
    }
    EXPECT_EQ(d1 * d2 * inner_product(m, ts, ss), square_distance<R>(m, p, q) * R(-1, 2));
  }
}

TEST(Christoffel, EuclideanVanishes) {
  EXPECT_TRUE(christoffel<R>(MetricField::euclidean(3), std::vector<R>{1, 2, 3}).is_zero());
}

TEST(Christoffel, PolarAtUnitRadius) {
  const auto g = christoffel<R>(polar(), std::vector<R>{1, 0});
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) {
        R expected = 0;
        if (i == 0 && j == 1 && k == 1) expected = -1;
        if (i == 1 && j + k == 1) expected = 1;
        EXPECT_EQ(g.get(i, j, k), expected) << i << j << k;
      }
}

TEST(Christoffel, SymmetricInLowerIndices) {
  std::mt19937 rng(404);
  for (int t = 0; t < 5; ++t) {
    const auto g = christoffel<R>(oracle::random_metric(rng, 3), oracle::random_point(rng, 3));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(g.get(i, j, k), g.get(i, k, j));
  }
}

TEST(Christoffel, SingularMetricRejected) {
  const MetricField m(2, {{Expr(1), Expr(0)}, {Expr(0), parse_expr("x1^2")}});
  EXPECT_THROW(christoffel<R>(m, std::vector<R>{0, 0}), precondition_error);
}

TEST(Chart, EuclideanIsTranslation) {
  const auto c = geodesic_chart<R>(MetricField::euclidean(2), {R(2), R(-1)}, true);
  auto y = E::generators(make_dk_algebra(2, 2));
  EXPECT_TRUE(same(c.from_chart(y), shifted({R(2), R(-1)}, y)));
}

TEST(Chart, PulledBackMetricHasVanishingFirstPartials) {
  std::mt19937 rng(505);
  std::vector<std::pair<MetricField, std::vector<R>>> cases = {{polar(), {R(1), R(0)}}, {polar(), {R(3), R(1, 2)}}};
  for (int t = 0; t < 4; ++t) cases.push_back({oracle::random_metric(rng, 2), oracle::random_point(rng, 2)});
  auto d = make_dk_algebra(2, 1);
  const auto y = E::generators(d);
  for (const auto& [m, x] : cases) {
    const auto c = geodesic_chart<R>(m, x, false);
    const auto jet = c.pulled_back_metric().jet<R>(y);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        EXPECT_TRUE(jet[i][j].nilpotent_part().is_zero());
        EXPECT_EQ(jet[i][j].unit_part(), c.chart_metric_at_base()(i, j));
      }
  }
}

TEST(Chart, NormalChartInFloatMode) {
  const auto c = geodesic_chart<double>(polar(), {2.0, 0.5}, true);
  EXPECT_TRUE(c.is_normal());
  const auto jet = c.pulled_back_metric().jet<double>(WeilElement<double>::generators(make_dk_algebra(2, 1)));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_NEAR(jet[i][j][0], i == j ? 1.0 : 0.0, 1e-12);
      EXPECT_NEAR(jet[i][j][1], 0.0, 1e-12);
      EXPECT_NEAR(jet[i][j][2], 0.0, 1e-12);
    }
}

TEST(Chart, ExactNormalizationNeedsIdentityOrNormalizer) {
  EXPECT_THROW(geodesic_chart<R>(polar(), {R(2), R(0)}, true), precondition_error);
  Matrix<R> a(2, 2);
  a(0, 0) = 1;
  a(1, 1) = R(1, 2);
  EXPECT_TRUE(GeodesicChart<R>::with_normalizer(polar(), {R(2), R(0)}, a).is_normal());
  a(1, 1) = 1;
  EXPECT_THROW(GeodesicChart<R>::with_normalizer(polar(), {R(2), R(0)}, a), precondition_error);
}

TEST(Chart, InverseUndoesForwardToSecondOrder) {
  std::mt19937 rng(606);
  auto a = make_dk_algebra(2, 2);
  for (int t = 0; t < 5; ++t) {
    const auto c = geodesic_chart<R>(oracle::random_metric(rng, 2), oracle::random_point(rng, 2), false);
    const auto y = random_offsets(rng, a, 2);
    EXPECT_TRUE(same(c.to_chart(c.from_chart(y)), y));
  }
}

TEST(Mirror, FlatChartNegates) {
  auto z = E::generators(make_dk_algebra(2, 2));
  const auto c = geodesic_chart<R>(MetricField::euclidean(2), zeros(2), true);
  EXPECT_TRUE(same(mirror(c, std::span<const E>(z)), PointModel<R>{-z[0], -z[1]}));
}

TEST(Mirror, InvolutionInCurvedCharts) {
  std::mt19937 rng(707);
  auto a = make_dk_algebra(2, 2);
  for (int t = 0; t < 6; ++t) {
    const auto x = oracle::random_point(rng, 2);
    const auto c = geodesic_chart<R>(t == 0 ? polar() : oracle::random_metric(rng, 2), t == 0 ? std::vector<R>{1, 0} : x, false);
    const auto z = shifted(c.base(), random_offsets(rng, a, 2));
    const auto once = mirror(c, std::span<const E>(z));
    EXPECT_TRUE(same(mirror(c, std::span<const E>(once)), z));
  }
}

TEST(Mirror, FirstOrderIsCoordinatewise) {
  std::mt19937 rng(808);
  auto a = make_dk_algebra(2, 1);
  for (int t = 0; t < 5; ++t) {
    const auto c = geodesic_chart<R>(oracle::random_metric(rng, 2), oracle::random_point(rng, 2), false);
    const auto z = shifted(c.base(), random_offsets(rng, a, 2));
    const auto m = mirror(c, std::span<const E>(z));
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(m[i], E::constant(a, 2 * c.base()[i]) - z[i]);
  }
}

TEST(Mirror, RejectsThirdOrderPoints) {
  auto z = E::generators(make_dk_algebra(2, 3));
  const auto c = geodesic_chart<R>(MetricField::euclidean(2), zeros(2), true);
  EXPECT_THROW(mirror(c, std::span<const E>(z)), precondition_error);
}

TEST(AffineCombination, EndpointsAndMirror) {
  std::mt19937 rng(909);
  auto a = make_dk_algebra(2, 2);
  for (int t = 0; t < 5; ++t) {
    const auto c = geodesic_chart<R>(oracle::random_metric(rng, 2), oracle::random_point(rng, 2), false);
    const auto z = shifted(c.base(), random_offsets(rng, a, 2));
    const std::span<const E> zs(z);
    EXPECT_TRUE(same(affine_combination(c, R(1), zs), constants(a, c.base())));
    EXPECT_TRUE(same(affine_combination(c, R(0), zs), z));
    EXPECT_TRUE(same(affine_combination(c, R(2), zs), mirror(c, zs)));
  }
}

TEST(AffineCombination, LNeighboursAreClosed) {
  for (auto [m, x] : std::vector<std::pair<MetricField, std::vector<R>>>{{MetricField::euclidean(2), zeros(2)},
                                                                        {polar(), {R(1), R(0)}}}) {
    const auto c = geodesic_chart<R>(m, x, true);
    const auto lp = universal_L_point(c);
    ASSERT_TRUE(is_L_neighbor<R>(m, x, lp.point));
    for (R t : {R(-1), R(1, 3), R(5, 2)})
      EXPECT_TRUE(is_L_neighbor<R>(m, x, affine_combination(c, t, std::span<const E>(lp.point))));
  }
}

TEST(AffineCombination, IsCriticalPointOfWeightedDistance) {
  // y0 = t x + (1-t) z is critical for t ḡ(x, y) + (1-t) ḡ(z, y): moving
  // y0 along any square-zero d e_k leaves the value unchanged to first order.
  struct Case {
    MetricField m;
    std::vector<R> x;
  };
  std::vector<Case> cases = {{MetricField::euclidean(1), {R(0)}},
                             {MetricField::euclidean(2), {R(0), R(0)}},
                             {MetricField::euclidean(2), {R(1), R(-2)}},
                             {polar(), {R(1), R(0)}}};
  for (const auto& [m, x] : cases) {
    const std::size_t n = m.n();
    auto a = make_dk_algebra(static_cast<int>(n), 2);
    TensorEmbedding<R> emb(a, make_dk_algebra(1, 1));
    const E d = emb.embed_right(E::generator(emb.right(), 0));
    const auto c = geodesic_chart<R>(m, x, false);
    const auto z = shifted(x, E::generators(a));
    for (R t : {R(0), R(1, 2), R(2), R(-3)}) {
      const auto y0 = embed_left(emb, affine_combination(c, t, std::span<const E>(z)));
      const auto ze = embed_left(emb, z);
      const auto xe = constants(emb.algebra(), x);
      auto weighted = [&](const PointModel<R>& y) {
        return t * gbar<R>(m, xe, y) + (R(1) - t) * gbar<R>(m, ze, y);
      };
      const E base = weighted(y0);
      for (std::size_t k = 0; k < n; ++k) {
        auto y = y0;
        y[k] += d;
        EXPECT_TRUE(emb.left_component(weighted(y) - base, 1).is_zero()) << "n=" << n << " t=" << t << " k=" << k;
      }
    }
  }
}

TEST(Parallelogram, DegenerateSymmetricAndFlat) {
  std::mt19937 rng(1010);
  auto d = make_dk_algebra(1, 1);
  TensorEmbedding<R> emb(d, d);
  const E d1 = emb.embed_left(E::generator(d, 0)), d2 = emb.embed_right(E::generator(d, 0));
  const auto flat = geodesic_chart<R>(MetricField::euclidean(2), zeros(2), true);
  PointModel<R> y{d1, E::zero(emb.algebra())}, z{E::zero(emb.algebra()), d2};
  EXPECT_TRUE(same(parallelogram(flat, std::span<const E>(y), std::span<const E>(z)), PointModel<R>{d1, d2}));
  for (int t = 0; t < 4; ++t) {
    const auto c = geodesic_chart<R>(oracle::random_metric(rng, 2), oracle::random_point(rng, 2), false);
    const PointModel<R> yy = shifted(c.base(), {d1 * oracle::random_rational(rng), d1 * oracle::random_rational(rng)});
    const PointModel<R> zz = shifted(c.base(), {d2 * oracle::random_rational(rng), d2 * oracle::random_rational(rng)});
    const auto xx = constants(emb.algebra(), c.base());
    EXPECT_TRUE(same(parallelogram(c, std::span<const E>(yy), std::span<const E>(xx)), yy));
    EXPECT_TRUE(same(parallelogram(c, std::span<const E>(yy), std::span<const E>(zz)),
                     parallelogram(c, std::span<const E>(zz), std::span<const E>(yy))));
  }
}

TEST(GeodesicProlong, RestrictsToTangentOnD) {
  std::mt19937 rng(1111);
  auto d = make_dk_algebra(1, 1);
  const E dd = E::generator(d, 0);
  for (int t = 0; t < 4; ++t) {
    const auto c = geodesic_chart<R>(oracle::random_metric(rng, 2), oracle::random_point(rng, 2), false);
    TangentVector<R> tv{c.base(), {oracle::random_rational(rng), oracle::random_rational(rng)}};
    const auto p = geodesic_prolong(c, tv, dd);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(p[i], dd * tv.u[i] + c.base()[i]);
  }
}

TEST(GeodesicProlong, FlatAlongFirstAxis) {
  auto a = make_dk_algebra(1, 2);
  const E delta = E::generator(a, 0);
  const auto c = geodesic_chart<R>(MetricField::euclidean(3), zeros(3), true);
  const auto p = geodesic_prolong(c, TangentVector<R>{zeros(3), {R(1), R(0), R(0)}}, delta);
  EXPECT_TRUE(same(p, PointModel<R>{delta, E::zero(a), E::zero(a)}));
}

TEST(GeodesicProlong, DistanceToTangentPoint) {
  // ḡ(t(d), t̄(δ)) = (δ² - 2 d δ) <t,t>
  std::mt19937 rng(1212);
  auto d1 = make_dk_algebra(1, 1), d2 = make_dk_algebra(1, 2);
  TensorEmbedding<R> emb(d1, d2);
  const E d = emb.embed_left(E::generator(d1, 0)), delta = emb.embed_right(E::generator(d2, 0));
  std::vector<std::pair<MetricField, std::vector<R>>> cases = {{polar(), {R(1), R(0)}}, {polar(), {R(2), R(1)}}};
  for (int t = 0; t < 5; ++t) cases.push_back({oracle::random_metric(rng, 2), oracle::random_point(rng, 2)});
  for (const auto& [m, x] : cases) {
    const auto c = geodesic_chart<R>(m, x, false);
    TangentVector<R> tv{x, {oracle::random_rational(rng), oracle::random_rational(rng)}};
    PointModel<R> td;
    for (std::size_t i = 0; i < 2; ++i) td.push_back(d * tv.u[i] + x[i]);
    const auto tbar = geodesic_prolong(c, tv, delta);
    EXPECT_EQ(gbar<R>(m, td, tbar), (delta * delta - R(2) * d * delta) * inner_product(m, tv, tv));
  }
}

TEST(SymmetricExtension, FirstAndSecondOrderInGeodesicChart) {
  // For y first order and z second order in a geodesic chart at x,
  // ḡ(y, z) = (z - y)^T Ĝ(0) (z - y).
  std::mt19937 rng(1313);
  auto d1 = make_dk_algebra(2, 1), d2 = make_dk_algebra(2, 2);
  TensorEmbedding<R> emb(d1, d2);
  const auto y = embed_left(emb, E::generators(d1));
  const auto z = embed_right(emb, E::generators(d2));
  std::vector<std::pair<MetricField, std::vector<R>>> cases = {{polar(), {R(1), R(0)}}};
  for (int t = 0; t < 4; ++t) cases.push_back({oracle::random_metric(rng, 2), oracle::random_point(rng, 2)});
  for (const auto& [m, x] : cases) {
    const auto c = geodesic_chart<R>(m, x, false);
    PointModel<R> diff;
    for (std::size_t i = 0; i < 2; ++i) diff.push_back(z[i] - y[i]);
    EXPECT_EQ(gbar<R>(m, c.from_chart(y), c.from_chart(z)), detail::quadratic_form<R>(c.chart_metric_at_base(), diff));
  }
}

TEST(ScalarComponent, BasePointGivesZero) {
  auto a = make_dk_algebra(2, 2);
  const std::vector<R> x{R(1), R(0)};
  const auto z = constants(a, x);
  EXPECT_TRUE(scalar_component<R>(polar(), z, TangentVector<R>{x, {R(1), R(1)}}).is_zero());
}

TEST(ScalarComponent, RecoversGeodesicParameter) {
  std::mt19937 rng(1414);
  auto a = make_dk_algebra(1, 2);
  const E delta = E::generator(a, 0);
  std::vector<std::pair<MetricField, std::vector<R>>> cases = {{MetricField::euclidean(2), zeros(2)},
                                                                {polar(), {R(1), R(0)}}};
  for (int t = 0; t < 4; ++t) cases.push_back({oracle::random_metric(rng, 2), oracle::random_point(rng, 2)});
  for (const auto& [m, x] : cases) {
    const auto c = geodesic_chart<R>(m, x, false);
    TangentVector<R> tv{x, {oracle::random_rational(rng), oracle::random_rational(rng)}};
    const auto z = geodesic_prolong(c, tv, delta);
    EXPECT_EQ(scalar_component<R>(m, z, tv), delta);
    EXPECT_TRUE(same(orth_project(c, std::span<const E>(z), tv), z));
  }
}

TEST(ScalarComponent, FlatGenericPoint) {
  auto a = make_dk_algebra(3, 2);
  const auto z = E::generators(a);
  const auto m = MetricField::euclidean(3);
  EXPECT_EQ(scalar_component<R>(m, z, TangentVector<R>{zeros(3), {R(1), R(0), R(0)}}), z[0]);
  EXPECT_EQ(scalar_component<R>(m, z, TangentVector<R>{zeros(3), {R(2), R(0), R(0)}}), z[0] * R(1, 2));
}

TEST(ScalarComponent, ImproperTangentRejected) {
  auto z = E::generators(make_dk_algebra(2, 2));
  EXPECT_THROW(scalar_component<R>(MetricField::euclidean(2), z, TangentVector<R>{zeros(2), {R(0), R(0)}}),
               precondition_error);
}

TEST(OrthProject, FlatAxisAndDiagonal) {
  auto a = make_dk_algebra(2, 2);
  const auto z = E::generators(a);
  const auto c = geodesic_chart<R>(MetricField::euclidean(2), zeros(2), true);
  const std::span<const E> zs(z);
  EXPECT_TRUE(same(orth_project(c, zs, TangentVector<R>{zeros(2), {R(1), R(0)}}), PointModel<R>{z[0], E::zero(a)}));
  const E half = (z[0] + z[1]) * R(1, 2);
  EXPECT_TRUE(same(orth_project(c, zs, TangentVector<R>{zeros(2), {R(1), R(1)}}), PointModel<R>{half, half}));
}

TEST(LNeighbour, FirstOrderPointsQualify) {
  std::mt19937 rng(1515);
  auto a = make_dk_algebra(2, 1);
  for (int t = 0; t < 5; ++t) {
    const auto m = oracle::random_metric(rng, 2);
    const auto x = oracle::random_point(rng, 2);
    EXPECT_TRUE(is_L_neighbor<R>(m, x, shifted(x, random_offsets(rng, a, 2))));
  }
}

TEST(LNeighbour, GenericSecondOrderPointDoesNot) {
  auto z = E::generators(make_dk_algebra(2, 2));
  EXPECT_FALSE(is_L_neighbor<R>(MetricField::euclidean(2), zeros(2), z));
}

TEST(LNeighbour, ThirdOrderInputIsNotANeighbour) {
  auto z = E::generators(make_dk_algebra(2, 3));
  EXPECT_FALSE(is_L_neighbor<R>(MetricField::euclidean(2), zeros(2), z));
}

TEST(LNeighbour, UniversalPointOnCurvedMetrics) {
  std::mt19937 rng(1616);
  for (int t = 0; t < 5; ++t) {
    const auto m = oracle::random_metric(rng, 2);
    const auto x = oracle::random_point(rng, 2);
    const auto c = geodesic_chart<R>(m, x, false);
    const auto lp = universal_L_point(c);
    EXPECT_TRUE(is_L_neighbor<R>(m, x, lp.point));
    EXPECT_TRUE(satisfies_l_relations<R>(lp.chart_coords, c.chart_metric_at_base()));
  }
}

TEST(LNeighbour, FlatSymmetryUnderReflection) {
  std::mt19937 rng(1717);
  const auto m = MetricField::euclidean(2);
  auto a = make_dk_algebra(2, 2);
  auto dl = make_dl_algebra(2);
  for (int t = 0; t < 30; ++t) {
    const auto x = oracle::random_point(rng, 2);
    PointModel<R> off = t % 3 == 0 ? E::generators(dl) : random_offsets(rng, a, 2);
    if (t % 3 == 0) off = {off[0] * R(t + 1), off[1] * R(t + 1)};
    const auto z = shifted(x, off);
    // By translation invariance x ~ z reads as the offset -off from x.
    PointModel<R> back;
    for (const auto& e : off) back.push_back(-e);
    EXPECT_EQ(is_L_neighbor<R>(m, x, z), is_L_neighbor<R>(m, x, shifted(x, back)));
    EXPECT_EQ(satisfies_dl_relations<R>(off), satisfies_dl_relations<R>(back));
  }
}

TEST(UniversalPoint, FlatChartGivesGenerators) {
  const auto c = geodesic_chart<R>(MetricField::euclidean(3), zeros(3), true);
  const auto lp = universal_L_point(c);
  EXPECT_TRUE(same(lp.point, E::generators(lp.algebra)));
  EXPECT_TRUE(satisfies_dl_relations<R>(lp.point));
  EXPECT_EQ(g_eval<R>(MetricField::euclidean(3), zeros(3), lp.point), R(3) * E::basis_element(lp.algebra, lp.q_index()));
}

TEST(Laplacian, FlatExamples) {
  const auto m = MetricField::euclidean(2);
  EXPECT_EQ(laplacian<R>(m, parse_expr("x1^2 + x2^2"), zeros(2)), 4);
  EXPECT_EQ(laplacian<R>(m, parse_expr("x1^2 - x2^2"), zeros(2)), 0);
}

TEST(Laplacian, PolarExample) {
  EXPECT_EQ(laplacian<R>(polar(), parse_expr("x1^2"), {R(1), R(0)}), 4);
  EXPECT_EQ(laplacian_trace<R>(polar(), parse_expr("x1^2"), {R(1), R(0)}), 4);
}

TEST(Laplacian, FlatMatchesSecondPartials) {
  std::mt19937 rng(1818);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 1 + t % 4;
    const auto p = oracle::random_polynomial(rng, n, 4, 6);
    const auto x = oracle::random_point(rng, n);
    EXPECT_EQ(laplacian<R>(MetricField::euclidean(n), from_polynomial(p), x), oracle::flat_laplacian(p, x));
  }
}

TEST(Laplacian, MirrorAndTracePathsAgreeOnRandomMetrics) {
  std::mt19937 rng(1919);
  for (int t = 0; t < 8; ++t) {
    const std::size_t n = 2 + t % 2;
    const auto m = oracle::random_metric(rng, n);
    const auto f = from_polynomial(oracle::random_polynomial(rng, n, 3, 5));
    const auto x = oracle::random_point(rng, n);
    EXPECT_EQ(laplacian<R>(m, f, x), laplacian_trace<R>(m, f, x));
  }
}

TEST(Laplacian, CurvedMatchesLaplaceBeltrami) {
  const std::vector<std::vector<double>> pts = {{1.0, 0.0}, {0.7, 0.3}, {2.0, -1.0}};
  for (const auto& m : {polar(), sphere()})
    for (const char* text : {"x1^2*x2", "sin(x1)*x2^2", "x1*x2 + x2^3"})
      for (const auto& x : pts) {
        const Expr f = parse_expr(text);
        EXPECT_NEAR(laplacian<double>(m, f, x), oracle::laplace_beltrami_2d(m, f, x), 1e-8) << text;
      }
}

TEST(Laplacian, CombinationLivesOnTopDirection) {
  std::mt19937 rng(2020);
  for (int t = 0; t < 5; ++t) {
    const auto m = oracle::random_metric(rng, 2);
    const auto c = geodesic_chart<R>(m, oracle::random_point(rng, 2), false);
    const auto r = laplacian_report(c, from_polynomial(oracle::random_polynomial(rng, 2, 4)));
    EXPECT_TRUE(r.well_posed);
    for (std::size_t i = 0; i < r.lpoint.q_index(); ++i) EXPECT_EQ(r.combination[i], 0);
  }
}

TEST(TaylorL, ReproducesExtension) {
  std::mt19937 rng(2121);
  for (int n = 1; n <= 3; ++n) {
    const auto un = static_cast<std::size_t>(n);
    const auto m = MetricField::euclidean(un);
    const auto z = E::generators(make_dl_algebra(n));
    std::vector<Expr> fs = {parse_expr("x1^2"), parse_expr("3*x1 - 2")};
    for (int t = 0; t < 5; ++t) fs.push_back(from_polynomial(oracle::random_polynomial(rng, un, 3, 6)));
    for (const auto& f : fs) {
      const auto x = oracle::random_point(rng, un);
      EXPECT_EQ(taylor_L<R>(m, f, x, z), kl_extend<R>(f, x, z));
    }
  }
}

TEST(TaylorL, CurvedMetricRejected) {
  auto z = E::generators(make_dl_algebra(2));
  EXPECT_THROW(taylor_L<R>(polar(), parse_expr("x1"), {R(1), R(0)}, z), precondition_error);
}

TEST(Harmonic, ScalingCorpus) {
  const auto m = MetricField::euclidean(2);
  for (const char* text : {"x1*x2", "x1^2 - x2^2", "x1^3 - 3*x1*x2^2"})
    for (const auto& x : {zeros(2), std::vector<R>{R(1), R(-2)}, std::vector<R>{R(1, 2), R(3)}}) {
      const auto r = harmonic_report<R>(m, parse_expr(text), x);
      EXPECT_TRUE(r.harmonic) << text;
      EXPECT_TRUE(r.affine_preserving) << text;
    }
  for (const char* text : {"x1^2", "x1^2 + x2^2"}) {
    const auto r = harmonic_report<R>(m, parse_expr(text), zeros(2));
    EXPECT_FALSE(r.harmonic) << text;
    EXPECT_FALSE(r.affine_preserving) << text;
    for (const auto& [s, ok] : r.affine_checks) EXPECT_FALSE(ok) << text << " s=" << s;
  }
}

TEST(Harmonic, ScalingOfExtensionAtUniversalPoint) {
  // f(x) = 0 and f harmonic: f(s z) = s f(z) on the universal L-point.
  const auto z = E::generators(make_dl_algebra(2));
  for (const char* text : {"x1*x2", "x1^2 - x2^2", "x1^3 - 3*x1*x2^2", "x1^2", "x1^2 + x2^2"}) {
    const Expr f = parse_expr(text);
    const bool harmonic = laplacian<R>(MetricField::euclidean(2), f, zeros(2)) == 0;
    for (R s : {R(-1), R(2), R(1, 2)}) {
      PointModel<R> sz{z[0] * s, z[1] * s};
      const bool scales = kl_extend<R>(f, zeros(2), sz) == s * kl_extend<R>(f, zeros(2), z);
      EXPECT_EQ(scales, harmonic) << text;
    }
  }
}

TEST(Harmonic, CurvedMetric) {
  // x2 is harmonic for the polar metric: Δ = r^-1 d_r(r d_r) + r^-2 d_θ^2.
  EXPECT_TRUE(is_harmonic_at<R>(polar(), parse_expr("x2"), {R(2), R(1)}));
  EXPECT_FALSE(is_harmonic_at<R>(polar(), parse_expr("x1"), {R(2), R(1)}));
  const auto r = harmonic_report<R>(polar(), parse_expr("x2"), {R(2), R(1)});
  EXPECT_TRUE(r.affine_preserving);
}
