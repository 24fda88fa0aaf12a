#include <gtest/gtest.h>

#include <random>

#include "infgeom.hpp"
#include "oracles.hpp"

using namespace infgeom;

namespace {

Polynomial<Rational> Z(std::size_t n, std::size_t i) { return Polynomial<Rational>::variable(n, i); }

long binomial(long n, long k) {
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST(DkAlgebra, OneVariableOrderTwo) {
  auto a = make_dk_algebra(1, 2);
  ASSERT_EQ(a->dimension(), 3u);
  EXPECT_EQ(a->basis()[0], Monomial(std::vector<unsigned>{0}));
  EXPECT_EQ(a->basis()[1], Monomial(std::vector<unsigned>{1}));
  EXPECT_EQ(a->basis()[2], Monomial(std::vector<unsigned>{2}));
}

TEST(DkAlgebra, FirstOrderNeighbourhood) {
  auto a = make_dk_algebra(2, 1);
  EXPECT_EQ(a->dimension(), 3u);
  auto z = WeilElement<Rational>::generators(a);
  EXPECT_TRUE((z[0] * z[1]).is_zero());
  EXPECT_TRUE((z[0] * z[0]).is_zero());
}

TEST(DkAlgebra, DimensionIsBinomial) {
  for (int n = 1; n <= 4; ++n)
    for (int k = 0; k <= 4; ++k) EXPECT_EQ(make_dk_algebra(n, k)->dimension(), static_cast<std::size_t>(binomial(n + k, k)));
  EXPECT_EQ(make_dk_algebra(3, 2)->dimension(), 10u);
}

TEST(DkAlgebra, RejectsBadParameters) {
  EXPECT_THROW(make_dk_algebra(0, 2), input_error);
  EXPECT_THROW(make_dk_algebra(2, -1), input_error);
  EXPECT_THROW(make_dl_algebra(0), input_error);
}

TEST(DlAlgebra, TwoVariables) {
  auto a = make_dl_algebra(2);
  ASSERT_EQ(a->dimension(), 4u);
  auto z = WeilElement<Rational>::generators(a);
  const auto q = WeilElement<Rational>::basis_element(a, 3);
  EXPECT_EQ(z[0] * z[0], q);
  EXPECT_EQ(z[1] * z[1], q);
  EXPECT_TRUE((z[0] * z[1]).is_zero());
  EXPECT_TRUE((z[0] * q).is_zero());
  EXPECT_TRUE((q * q).is_zero());
}

TEST(DlAlgebra, OneVariableIsSecondOrder) {
  auto a = make_dl_algebra(1);
  EXPECT_EQ(a->dimension(), 3u);
  EXPECT_TRUE(match_tables(*a, *make_dk_algebra(1, 2)).has_value());
}

TEST(DlAlgebra, ThreeVariables) {
  auto a = make_dl_algebra(3);
  auto z = WeilElement<Rational>::generators(a);
  EXPECT_TRUE((z[0] * z[1]).is_zero());
  EXPECT_EQ(z[1] * z[1], WeilElement<Rational>::basis_element(a, 4));
}

TEST(DlAlgebra, DimensionLaw) {
  for (int n = 1; n <= 8; ++n) EXPECT_EQ(make_dl_algebra(n)->dimension(), static_cast<std::size_t>(n + 2));
}

TEST(DlAlgebra, TripleProductsVanish) {
  for (int n = 1; n <= 5; ++n) {
    auto a = make_dl_algebra(n);
    for (std::size_t i = 1; i < a->dimension(); ++i)
      for (std::size_t j = 1; j < a->dimension(); ++j)
        for (std::size_t k = 1; k < a->dimension(); ++k) {
          auto e = WeilElement<Rational>::basis_element(a, i) * WeilElement<Rational>::basis_element(a, j) *
                   WeilElement<Rational>::basis_element(a, k);
          EXPECT_TRUE(e.is_zero());
        }
  }
}

TEST(DlAlgebra, BasisIsIndependentAndSpanning) {
  // Coordinates of 1, Z_1..Z_n and Σ Z_i² form an invertible matrix.
  for (int n = 2; n <= 5; ++n) {
    auto a = make_dl_algebra(n);
    const auto d = a->dimension();
    Matrix<Rational> m(d, d);
    auto z = WeilElement<Rational>::generators(a);
    std::vector<WeilElement<Rational>> family{WeilElement<Rational>::one(a)};
    WeilElement<Rational> sum(a);
    for (auto& zi : z) {
      family.push_back(zi);
      sum += zi * zi;
    }
    family.push_back(sum);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) m(r, c) = family[r][c];
    EXPECT_EQ(rank(m), d);
  }
}

TEST(WeilAlgebra, AxiomsHoldExhaustively) {
  std::vector<AlgebraPtr> algebras = {make_dk_algebra(1, 2), make_dk_algebra(2, 2), make_dk_algebra(3, 1),
                                      make_dk_algebra(2, 3), make_dl_algebra(2), make_dl_algebra(4),
                                      tensor_product(*make_dl_algebra(2), *make_dk_algebra(1, 1))};
  for (const auto& a : algebras) EXPECT_FALSE(a->verify_axioms().has_value()) << *a->verify_axioms();
}

TEST(WeilAlgebra, RandomTriplesAboveTwentyDimensions) {
  auto a = make_dk_algebra(3, 3);  // dimension 20
  auto b = make_dk_algebra(4, 3);  // dimension 35
  std::mt19937 rng(11);
  for (const auto& alg : {a, b}) {
    for (int t = 0; t < 20; ++t) {
      auto rand_elem = [&] {
        std::vector<Rational> c;
        for (std::size_t i = 0; i < alg->dimension(); ++i) c.push_back(oracle::random_rational(rng));
        return WeilElement<Rational>(alg, c);
      };
      auto x = rand_elem(), y = rand_elem(), z = rand_elem();
      EXPECT_EQ((x * y) * z, x * (y * z));
      EXPECT_EQ(x * y, y * x);
      EXPECT_EQ(x * (y + z), x * y + x * z);
    }
  }
}

TEST(WeilAlgebra, BasisMonomialsAreNilpotent) {
  for (const auto& a : {make_dk_algebra(2, 3), make_dl_algebra(3)}) {
    for (std::size_t i = 1; i < a->dimension(); ++i)
      EXPECT_TRUE(WeilElement<Rational>::basis_element(a, i).pow(a->degree_bound() + 1).is_zero());
  }
}

TEST(Quotient, DlRelationsReproduceDlTableExactly) {
  for (int n = 2; n <= 4; ++n) {
    std::vector<Polynomial<Rational>> rels;
    const auto un = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i < un; ++i)
      for (std::size_t j = i + 1; j < un; ++j) {
        rels.push_back(Z(un, i) * Z(un, i) - Z(un, j) * Z(un, j));
        rels.push_back(Z(un, i) * Z(un, j));
      }
    auto q = quotient_by_relations(n, 2, rels);
    auto dl = make_dl_algebra(n);
    EXPECT_EQ(*q, *dl);
    EXPECT_TRUE(match_tables(*q, *dl).has_value());
  }
}

TEST(Quotient, EmptyRelationsGiveTruncation) {
  EXPECT_EQ(*quotient_by_relations(1, 2, {}), *make_dk_algebra(1, 2));
}

TEST(Quotient, KillingOneVariable) {
  auto q = quotient_by_relations(2, 2, {Z(2, 0)});
  ASSERT_EQ(q->dimension(), 3u);
  EXPECT_EQ(q->basis()[1], Monomial(std::vector<unsigned>{0, 1}));
  EXPECT_EQ(q->basis()[2], Monomial(std::vector<unsigned>{0, 2}));
}

TEST(Quotient, IdealClosureUsesTruncatedMultiples) {
  // Z1 - Z2^2 with bound 2: Z1*Z1 = Z2^4 -> 0 and Z1*Z2 = Z2^3 -> 0 only
  // follow from multiples whose full degree exceeds the bound.
  auto q = quotient_by_relations(2, 2, {Z(2, 0) - Z(2, 1) * Z(2, 1)});
  EXPECT_FALSE(q->verify_axioms().has_value());
  auto z = WeilElement<Rational>::generators(q);
  EXPECT_TRUE((z[0] * z[0]).is_zero());
  EXPECT_EQ(z[0], z[1] * z[1]);
}

TEST(Elements, SumSquaredInDl2) {
  auto a = make_dl_algebra(2);
  auto z = WeilElement<Rational>::generators(a);
  EXPECT_EQ((z[0] + z[1]).pow(2), Rational(2) * WeilElement<Rational>::basis_element(a, 3));
}

TEST(Elements, UnitLawAndTruncation) {
  auto a = make_dk_algebra(1, 2);
  auto z = WeilElement<Rational>::generator(a, 0);
  EXPECT_EQ((z + z * z) * z, z * z);
  std::mt19937 rng(3);
  for (int t = 0; t < 10; ++t) {
    WeilElement<Rational> x(a, {oracle::random_rational(rng), oracle::random_rational(rng), oracle::random_rational(rng)});
    EXPECT_EQ(x * WeilElement<Rational>::one(a), x);
  }
}

TEST(Elements, MixedAlgebrasRejected) {
  auto a = make_dl_algebra(2), b = make_dl_algebra(2);
  EXPECT_THROW(WeilElement<Rational>::one(a) + WeilElement<Rational>::one(b), algebra_mismatch);
  EXPECT_THROW(WeilElement<Rational>::one(a) * WeilElement<Rational>::one(b), algebra_mismatch);
}

TEST(Elements, InverseOfUnitPlusNilpotent) {
  auto a = make_dk_algebra(2, 3);
  auto z = WeilElement<Rational>::generators(a);
  auto u = z[0] * Rational(3) + z[1] * z[0] + Rational(2);
  EXPECT_EQ(u * u.inverse(), WeilElement<Rational>::one(a));
  EXPECT_THROW(z[0].inverse(), precondition_error);
}

TEST(DlRelations, GenericPointSatisfies) {
  for (int n = 1; n <= 5; ++n) {
    auto z = WeilElement<Rational>::generators(make_dl_algebra(n));
    EXPECT_TRUE(satisfies_dl_relations<Rational>(z));
  }
}

TEST(DlRelations, SecondOrderGenericPointFails) {
  auto z = WeilElement<Rational>::generators(make_dk_algebra(2, 2));
  EXPECT_FALSE(satisfies_dl_relations<Rational>(z));
}

TEST(DlRelations, FirstOrderPointsAreLPoints) {
  auto d = WeilElement<Rational>::generator(make_dk_algebra(1, 1), 0);
  std::vector<WeilElement<Rational>> z = {Rational(3) * d, Rational(-2) * d};
  EXPECT_TRUE(satisfies_dl_relations<Rational>(z));
  auto gens = WeilElement<Rational>::generators(make_dk_algebra(3, 1));
  EXPECT_TRUE(satisfies_dl_relations<Rational>(gens));
}

TEST(DlRelations, NonNilpotentRejected) {
  auto a = make_dl_algebra(2);
  auto z = WeilElement<Rational>::generators(a);
  z[0] += Rational(1);
  EXPECT_FALSE(satisfies_dl_relations<Rational>(z));
}

TEST(DlRelations, FlatSymmetryUnderReflection) {
  std::mt19937 rng(5);
  auto a = make_dk_algebra(2, 2);
  for (int t = 0; t < 30; ++t) {
    std::vector<WeilElement<Rational>> z;
    for (int i = 0; i < 2; ++i) {
      auto p = oracle::random_polynomial(rng, 2, 2, 3);
      p.add_term(Monomial::unit(2), -p.coefficient(Monomial::unit(2)));
      z.push_back(WeilElement<Rational>::from_polynomial(a, p));
    }
    std::vector<WeilElement<Rational>> minus = {-z[0], -z[1]};
    EXPECT_EQ(satisfies_dl_relations<Rational>(z), satisfies_dl_relations<Rational>(minus));
  }
}

TEST(AdaptedLAlgebra, GeneratorsSatisfyAdaptedRelations) {
  Matrix<Rational> p(2, 2);
  p(0, 0) = 2;
  p(0, 1) = p(1, 0) = 1;
  p(1, 1) = 3;
  auto a = make_dl_algebra_for_inner_product(p);
  EXPECT_EQ(a->dimension(), 4u);
  EXPECT_FALSE(a->verify_axioms().has_value());
  auto z = WeilElement<Rational>::generators(a);
  EXPECT_TRUE(satisfies_l_relations<Rational>(z, p));
  EXPECT_FALSE(satisfies_dl_relations<Rational>(z));
}

TEST(Json, AlgebraRoundTrip) {
  for (const auto& a : {make_dl_algebra(3), make_dk_algebra(2, 2), quotient_by_relations(2, 2, {Z(2, 0)})}) {
    auto back = algebra_from_json(Json::parse(to_json(*a).dump()));
    EXPECT_EQ(*back, *a);
  }
}

TEST(Json, MalformedAlgebraRejected) {
  EXPECT_THROW(algebra_from_json(Json::parse(R"({"n": 1})")), input_error);
  EXPECT_THROW(algebra_from_json(Json::parse(R"([1,2])")), input_error);
}
