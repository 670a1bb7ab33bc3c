#include <gtest/gtest.h>

#include <random>

#include "leafstab/cohomology.hpp"

using namespace leafstab;

namespace {

QMatrix random_invertible(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> d(-3, 3);
  while (true) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m(i, j) = d(rng);
    }
    if (rank(m) == n) return m;
  }
}

std::vector<std::size_t> dims(const LieAlgebraData& g, const ModuleData& v) { return cohomology_dims(ce_complex(g, v)); }

}  // namespace

TEST(Linalg, RankNullspaceInverse) {
  QMatrix m(3, 3);
  int vals[3][3] = {{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m(i, j) = vals[i][j];
  }
  EXPECT_EQ(rank(m), 2u);
  auto ns = nullspace(m);
  ASSERT_EQ(ns.size(), 1u);
  QMatrix v(3, 1);
  for (int i = 0; i < 3; ++i) v(i, 0) = ns[0][i];
  EXPECT_TRUE((m * v).is_zero());
  EXPECT_FALSE(inverse(m).has_value());
  std::mt19937 rng(5);
  auto p = random_invertible(rng, 4);
  EXPECT_EQ(p * *inverse(p), QMatrix::identity(4));
}

TEST(LieAlgebra, RejectsBadStructureConstants) {
  std::vector<std::vector<std::vector<Rational>>> c(2, std::vector<std::vector<Rational>>(2, std::vector<Rational>(2)));
  c[0][1][0] = 1;
  EXPECT_THROW(LieAlgebraData("bad", c), DomainError);
  // Antisymmetric but not Jacobi: [e1,e2] = e3, [e2,e3] = e3, [e1,e3] = 0.
  std::vector<std::vector<std::vector<Rational>>> j(3, std::vector<std::vector<Rational>>(3, std::vector<Rational>(3)));
  j[0][1][2] = 1;
  j[1][0][2] = -1;
  j[1][2][2] = 1;
  j[2][1][2] = -1;
  j[0][2][0] = 1;
  j[2][0][0] = -1;
  EXPECT_THROW(LieAlgebraData("nonjacobi", j), DomainError);
}

TEST(Module, RejectsNonRepresentation) {
  auto g = LieAlgebraData::aff1();
  std::vector<QMatrix> a(2, QMatrix(1, 1));
  a[0](0, 0) = 1;
  EXPECT_THROW(ModuleData(g, "bad", a), DomainError);
  EXPECT_NO_THROW(ModuleData::adjoint(LieAlgebraData::su2()));
  EXPECT_NO_THROW(ModuleData::coadjoint(LieAlgebraData::aff1()));
}

TEST(CeComplex, AbelianTrivialIsZero) {
  auto g = LieAlgebraData::abelian(2);
  auto c = ce_complex(g, ModuleData::trivial(g));
  for (const auto& d : c.differentials()) EXPECT_TRUE(d.is_zero());
  EXPECT_EQ(cohomology_dims(c), (std::vector<std::size_t>{1, 2, 1}));
}

TEST(CeComplex, Aff1TrivialMatrix) {
  auto g = LieAlgebraData::aff1();
  auto c = ce_complex(g, ModuleData::trivial(g));
  // dω(e1, e2) = -ω([e1, e2]) = -ω(e1).
  QMatrix expected(1, 2);
  expected(0, 0) = -1;
  EXPECT_EQ(c.differentials()[1], expected);
  EXPECT_EQ(rank(c.differentials()[1]), 1u);
  EXPECT_EQ(cohomology_dims(c), (std::vector<std::size_t>{1, 1, 0}));
}

TEST(CeComplex, Aff1WithCoefficients) {
  auto g = LieAlgebraData::aff1();
  // Centreless and every derivation inner.
  EXPECT_EQ(dims(g, ModuleData::adjoint(g)), (std::vector<std::size_t>{0, 0, 0}));
  // Invariant e2*, one outer cocycle.
  EXPECT_EQ(dims(g, ModuleData::coadjoint(g)), (std::vector<std::size_t>{1, 1, 0}));
}

TEST(CeComplex, Su2) {
  auto g = LieAlgebraData::su2();
  auto adj = ce_complex(g, ModuleData::adjoint(g));
  EXPECT_TRUE((adj.differentials()[1] * adj.differentials()[0]).is_zero());
  EXPECT_EQ(cohomology_dims(ce_complex(g, ModuleData::trivial(g))), (std::vector<std::size_t>{1, 0, 0, 1}));
  EXPECT_EQ(cohomology_dims(adj), (std::vector<std::size_t>{0, 0, 0, 0}));
  EXPECT_EQ(dims(g, ModuleData::coadjoint(g)), (std::vector<std::size_t>{0, 0, 0, 0}));
}

TEST(CeComplex, EulerCharacteristicVanishes) {
  for (const auto& g : {LieAlgebraData::abelian(3), LieAlgebraData::aff1(), LieAlgebraData::su2()}) {
    for (const auto& v : {ModuleData::trivial(g, 2), ModuleData::adjoint(g), ModuleData::coadjoint(g)}) {
      long chi = 0;
      auto h = dims(g, v);
      for (std::size_t k = 0; k < h.size(); ++k) chi += (k % 2 ? -1 : 1) * static_cast<long>(h[k]);
      EXPECT_EQ(chi, 0);
    }
  }
}

TEST(CochainComplex, RejectsNonComplex) {
  QMatrix a(1, 1), b(1, 1);
  a(0, 0) = 1;
  b(0, 0) = 1;
  EXPECT_THROW(CochainComplex({a, b}), DomainError);
  EXPECT_THROW(CochainComplex({QMatrix(2, 1), QMatrix(1, 3)}), DomainError);
}

TEST(CohomologyProperty, BasisChangeInvariance) {
  std::mt19937 rng(71);
  for (const auto& g : {LieAlgebraData::aff1(), LieAlgebraData::su2(), LieAlgebraData::abelian(2)}) {
    for (const auto& v : {ModuleData::trivial(g), ModuleData::adjoint(g), ModuleData::coadjoint(g)}) {
      auto c = ce_complex(g, v);
      auto cd = c.cochain_dims();
      std::vector<QMatrix> p;
      for (auto n : cd) p.push_back(random_invertible(rng, n));
      std::vector<QMatrix> d;
      for (std::size_t k = 0; k < c.differentials().size(); ++k) {
        d.push_back(*inverse(p[k + 1]) * c.differentials()[k] * p[k]);
      }
      EXPECT_EQ(cohomology_dims(CochainComplex(d)), cohomology_dims(c));
    }
  }
}

TEST(Cone, TorusSigmaZero) {
  auto t = GradedRingModel::torus();
  EXPECT_EQ(cone_cohomology(t, 2), 3u);
  EXPECT_EQ(cone_cohomology(t, 1), 3u);
}

TEST(Cone, S2xS2) {
  auto r = GradedRingModel::s2xs2();
  EXPECT_EQ(cone_cohomology(r, 2), 1u);
  EXPECT_EQ(cone_cohomology(r, 1), 0u);
  EXPECT_THROW(cone_cohomology(r, -1), DomainError);
}

TEST(Cone, RejectsInconsistentModel) {
  QMatrix c0(1, 1);
  c0(0, 0) = 2;
  EXPECT_THROW(GradedRingModel("bad", {1, 2, 1}, {c0}, {Rational(1)}), DomainError);
  EXPECT_THROW(GradedRingModel("bad", {1, 2, 1}, {QMatrix(2, 1)}, {Rational(0)}), DomainError);
  EXPECT_THROW(GradedRingModel("bad", {1, 0, 2}, {}, {Rational(0)}), DomainError);
  EXPECT_THROW(GradedRingModel::preset("k3"), DomainError);
}

TEST(ConeProperty, SigmaZeroAndEulerCharacteristic) {
  std::mt19937 rng(72);
  std::uniform_int_distribution<int> b(0, 3), e(-2, 2);
  for (int trial = 0; trial < 30; ++trial) {
    const int top = 2 + trial % 4;
    std::vector<std::size_t> betti{1};
    for (int k = 1; k <= top; ++k) betti.push_back(b(rng));
    auto bt = [&](int k) { return k >= 0 && k <= top ? betti[k] : std::size_t{0}; };
    std::vector<QMatrix> zero, cup;
    for (int k = 0; k + 2 <= top; ++k) {
      zero.emplace_back(bt(k + 2), bt(k));
      QMatrix m(bt(k + 2), bt(k));
      for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = e(rng);
      }
      cup.push_back(m);
    }
    std::vector<Rational> sigma(bt(2));
    for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = cup[0](i, 0);
    GradedRingModel z("zero", betti, zero, std::vector<Rational>(bt(2)));
    GradedRingModel r("random", betti, cup, sigma);
    long chi = 0;
    for (int k = 0; k <= top + 2; ++k) {
      EXPECT_EQ(cone_cohomology(z, k), bt(k) + bt(k - 1));
      chi += (k % 2 ? -1 : 1) * static_cast<long>(cone_cohomology(r, k));
    }
    EXPECT_EQ(chi, 0);
  }
}

TEST(SigmaExactness, Examples) {
  auto r = GradedRingModel::s2xs2();
  EXPECT_TRUE(sigma_exactness_test(r, {Rational(0), Rational(0)}));
  EXPECT_FALSE(sigma_exactness_test(r, r.sigma_class()));
  EXPECT_THROW(sigma_exactness_test(r, {Rational(1)}), DomainError);

  QMatrix cob(2, 1);
  cob(0, 0) = 1;
  cob(1, 0) = 1;
  GradedRingModel deficient("deficient", {1, 0, 2}, {}, {Rational(0), Rational(0)}, cob);
  EXPECT_TRUE(sigma_exactness_test(deficient, {Rational(2), Rational(2)}));
  EXPECT_FALSE(sigma_exactness_test(deficient, {Rational(1), Rational(0)}));
}

TEST(Criteria, S2xS2Family) {
  auto rep = evaluate_criteria(GradedRingModel::s2xs2());
  EXPECT_TRUE(rep.criterion1);
  EXPECT_FALSE(rep.criterion2);
  EXPECT_TRUE(rep.criterion3);
  EXPECT_EQ(rep.groups[1].dim, 1u);
}

TEST(Criteria, TorusFamily) {
  auto rep = evaluate_criteria(GradedRingModel::torus());
  EXPECT_FALSE(rep.criterion1 || rep.criterion2 || rep.criterion3);
  EXPECT_EQ(rep.groups[0].dim, 2u);
  EXPECT_EQ(rep.groups[1].dim, 3u);
  EXPECT_EQ(rep.groups[2].dim, 3u);
}

TEST(Criteria, PointLeaves) {
  auto su2 = evaluate_criteria(LieAlgebraData::su2());
  for (const auto& g : su2.groups) EXPECT_EQ(g.dim, 0u) << g.name;
  EXPECT_TRUE(su2.criterion1 && su2.criterion2 && su2.criterion3);

  auto aff = evaluate_criteria(LieAlgebraData::aff1());
  EXPECT_TRUE(aff.criterion1);
  EXPECT_FALSE(aff.criterion3);

  auto ab = evaluate_criteria(LieAlgebraData::abelian(2));
  EXPECT_FALSE(ab.criterion1 || ab.criterion2 || ab.criterion3);
  for (const auto& g : ab.groups) EXPECT_GT(g.dim, 0u) << g.name;
}
