#include <gtest/gtest.h>

#include "corpus.hpp"
#include "leafstab/bigraded.hpp"
#include "random_objects.hpp"

using namespace leafstab;
using namespace leafstab::corpus;

namespace {

int sgn(int e) { return e % 2 == 0 ? 1 : -1; }

RationalFunction scalar(const ChartPtr& c, int v) { return RationalFunction(c->num_vars(), Rational(v)); }

BigradedElement vert1(const ChartPtr& c, const RationalFunction& f, std::uint8_t a = 0) {
  BigradedElement e(c, 1, 0);
  e.add_term({}, {a}, f);
  return e;
}

RFMatrix block_product(const RFMatrix& a, const RFMatrix& b) {
  RFMatrix r(a.size(), std::vector<RationalFunction>(a.size(), RationalFunction(a[0][0].nvars())));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      for (std::size_t k = 0; k < a.size(); ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

Multivector random_nondegenerate(testkit::Sampler& s, const ChartPtr& c) {
  Multivector th = s.multivector(c, 2, 2, 5);
  Multivector base(c, 2);
  // Keep the horizontal block away from zero: C^{12} = 1 + (terms already present).
  base.add_term({0, 1}, scalar(c, 1) + th.coefficient({0, 1}) * scalar(c, 0) + RationalFunction(s.poly(c->num_vars(), 1)));
  Multivector out = th - Multivector(c, 2);
  Multivector strip(c, 2);
  strip.add_term({0, 1}, th.coefficient({0, 1}));
  out -= strip;
  out += base;
  if (out.coefficient({0, 1}).is_zero()) out.add_term({0, 1}, scalar(c, 1));
  return out;
}

}  // namespace

TEST(OmegaBracket, TrivialOnBaseForms) {
  auto c = plane_line();
  testkit::Sampler s(41);
  for (int t = 0; t < 10; ++t) {
    BigradedElement u(c, 1, 1), v(c, 1, 1);
    u.add_term({0}, {0}, RationalFunction(s.poly(c->num_vars(), 2, 2)));
    v.add_term({1}, {0}, RationalFunction(s.poly(c->num_vars(), 2, 2)));
    EXPECT_TRUE(omega_bracket(u, v).is_zero());
  }
}

TEST(OmegaBracket, VerticalExample) {
  auto c = plane_line();
  auto f = var(c, "x1") * var(c, "x2") + scalar(c, 3);
  EXPECT_EQ(omega_bracket(vert1(c, var(c, "y1")), vert1(c, f)), -vert1(c, f));
}

TEST(OmegaBracket, AntisymmetryOnVerticalElements) {
  auto c = make_chart({"x1", "x2"}, {"y1", "y2", "y3"});
  testkit::Sampler s(42);
  for (int t = 0; t < 30; ++t) {
    int q = s.integer(0, 3), q2 = s.integer(0, 3);
    auto u = s.bigraded(c, q, 0, 2), v = s.bigraded(c, q2, 0, 2);
    auto sum = omega_bracket(u, v) + RationalFunction(c->num_vars(), Rational(sgn((q - 1) * (q2 - 1)))) * omega_bracket(v, u);
    EXPECT_TRUE(sum.is_zero());
  }
}

TEST(OmegaBracketProperty, GradedAntisymmetryInTotalDegree) {
  auto c = make_chart({"x1", "x2", "x3"}, {"y1", "y2"});
  testkit::Sampler s(43);
  for (int t = 0; t < 40; ++t) {
    auto u = s.bigraded(c, s.integer(0, 2), s.integer(0, 2), 2);
    auto v = s.bigraded(c, s.integer(0, 2), s.integer(0, 2), 2);
    int e = u.total_degree() * v.total_degree();
    auto sum = omega_bracket(u, v) + RationalFunction(c->num_vars(), Rational(sgn(e))) * omega_bracket(v, u);
    EXPECT_TRUE(sum.is_zero());
  }
}

TEST(OmegaBracketProperty, GradedJacobi) {
  auto c = make_chart({"x1", "x2", "x3"}, {"y1", "y2"});
  testkit::Sampler s(44);
  int checked = 0;
  while (checked < 40) {
    auto u = s.bigraded(c, s.integer(0, 2), s.integer(0, 1), 2);
    auto v = s.bigraded(c, s.integer(0, 2), s.integer(0, 1), 2);
    auto w = s.bigraded(c, s.integer(0, 2), s.integer(0, 1), 2);
    if (u.total_degree() + v.total_degree() + w.total_degree() > 3) continue;
    ++checked;
    auto lhs = omega_bracket(u, omega_bracket(v, w));
    auto rhs = omega_bracket(omega_bracket(u, v), w) +
               RationalFunction(c->num_vars(), Rational(sgn(u.total_degree() * v.total_degree()))) *
                   omega_bracket(v, omega_bracket(u, w));
    EXPECT_TRUE((lhs - rhs).is_zero());
  }
}

TEST(DGamma, FlatConnectionExamples) {
  auto c = plane_line();
  ConnectionData flat(c);
  BigradedElement expected(c, 1, 1);
  expected.add_term({0}, {0}, scalar(c, 1));
  EXPECT_EQ(d_gamma(flat, vert1(c, var(c, "x1"))), expected);
  EXPECT_TRUE(d_gamma(flat, vert1(c, scalar(c, 4))).is_zero());
}

TEST(DGammaProperty, SquareIsCurvatureAction) {
  auto c = make_chart({"x1", "x2", "x3"}, {"y1", "y2"});
  testkit::Sampler s(45);
  for (int t = 0; t < 20; ++t) {
    auto g = s.connection(c, 2);
    auto u = s.bigraded(c, s.integer(0, 2), s.integer(0, 1), 2);
    auto lhs = d_gamma(g, d_gamma(g, u));
    EXPECT_TRUE((lhs - omega_bracket(curvature(g), u)).is_zero());
  }
}

TEST(DGammaProperty, DerivationOfBracket) {
  auto c = make_chart({"x1", "x2"}, {"y1", "y2"});
  testkit::Sampler s(46);
  for (int t = 0; t < 20; ++t) {
    auto g = s.connection(c, 2);
    auto u = s.bigraded(c, s.integer(0, 2), s.integer(0, 1), 2);
    auto v = s.bigraded(c, s.integer(0, 2), s.integer(0, 1), 2);
    auto lhs = d_gamma(g, omega_bracket(u, v));
    auto rhs = omega_bracket(d_gamma(g, u), v) +
               RationalFunction(c->num_vars(), Rational(sgn(u.total_degree()))) * omega_bracket(u, d_gamma(g, v));
    EXPECT_TRUE((lhs - rhs).is_zero());
  }
}

TEST(Curvature, Examples) {
  auto c = plane_line();
  EXPECT_TRUE(curvature(ConnectionData(c)).is_zero());
  ConnectionData g(c);
  g.set(0, 0, var(c, "x2"));
  BigradedElement expected(c, 1, 2);
  expected.add_term({0, 1}, {0}, scalar(c, -1));
  EXPECT_EQ(curvature(g), expected);

  auto line = make_chart({"x1"}, {"y1", "y2"});
  testkit::Sampler s(47);
  EXPECT_TRUE(curvature(s.connection(line, 2)).is_zero());
}

TEST(TripleFromBivector, TorusEpsilon) {
  auto c = make_chart({"x1", "x2"}, {"y1"}, {"eps"});
  auto eps = var(c, "eps");
  auto theta = torus_epsilon_bivector(c, eps);
  auto t = triple_from_bivector(theta);
  EXPECT_TRUE(t.vertical.is_zero());
  EXPECT_EQ(t.connection.coefficient(0, 0), eps);
  EXPECT_TRUE(t.connection.coefficient(1, 0).is_zero());
  // 𝔽 as a matrix is the inverse of the horizontal block of θ.
  RFMatrix cblock{{scalar(c, 0), scalar(c, -1)}, {scalar(c, 1), scalar(c, 0)}};
  auto h = t.horizontal.coefficient({0, 1}, {});
  RFMatrix fblock{{scalar(c, 0), h}, {-h, scalar(c, 0)}};
  auto prod = block_product(fblock, cblock);
  EXPECT_EQ(prod[0][0], scalar(c, 1));
  EXPECT_EQ(prod[1][1], scalar(c, 1));
  EXPECT_TRUE(prod[0][1].is_zero() && prod[1][0].is_zero());
  EXPECT_EQ(bivector_from_triple(t), theta);
}

TEST(TripleFromBivector, ConstantHorizontalBlock) {
  auto c = make_chart({"x1", "x2", "x3", "x4"}, {"y1"});
  Multivector theta(c, 2);
  theta.add_term({0, 1}, scalar(c, 2));
  theta.add_term({2, 3}, scalar(c, 3));
  theta.add_term({0, 2}, scalar(c, 1));
  auto t = triple_from_bivector(theta);
  EXPECT_TRUE(t.vertical.is_zero());
  EXPECT_TRUE(t.connection.is_zero());
  RFMatrix cblock(4, std::vector<RationalFunction>(4, scalar(c, 0)));
  RFMatrix fblock = cblock;
  for (std::uint8_t i = 0; i < 4; ++i)
    for (std::uint8_t j = i + 1; j < 4; ++j) {
      cblock[i][j] = theta.coefficient({i, j});
      cblock[j][i] = -cblock[i][j];
      fblock[i][j] = t.horizontal.coefficient({i, j}, {});
      fblock[j][i] = -fblock[i][j];
    }
  auto prod = block_product(fblock, cblock);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(prod[i][j], scalar(c, i == j ? 1 : 0));
  EXPECT_EQ(bivector_from_triple(t), theta);
}

TEST(TripleFromBivector, BlockDiagonal) {
  auto c = make_chart({"x1", "x2"}, {"y1", "y2"});
  Multivector theta(c, 2);
  theta.add_term({0, 1}, scalar(c, 1));
  theta.add_term({2, 3}, scalar(c, 1));
  auto t = triple_from_bivector(theta);
  BigradedElement v(c, 2, 0);
  v.add_term({}, {0, 1}, scalar(c, 1));
  EXPECT_EQ(t.vertical, v);
  EXPECT_TRUE(t.connection.is_zero());
  EXPECT_EQ(t.horizontal, area_form(c, scalar(c, -1)));
  EXPECT_EQ(bivector_from_triple(t), theta);
}

TEST(TripleFromBivector, Errors) {
  auto c = plane_line();
  Multivector mixed(c, 2);
  mixed.add_term({0, 2}, scalar(c, 1));
  EXPECT_THROW(triple_from_bivector(mixed), DomainError);
  Multivector th(c, 2);
  th.add_term({0, 1}, var(c, "x1"));
  EXPECT_NO_THROW(triple_from_bivector(th));
  SamplePoints bad{{Rational(0), Rational(1), Rational(0)}};
  EXPECT_THROW(triple_from_bivector(th, bad), DomainError);
  SamplePoints good{{Rational(2), Rational(1), Rational(0)}};
  EXPECT_NO_THROW(triple_from_bivector(th, good));
}

TEST(BivectorFromTriple, StandardArea) {
  auto c = plane_line();
  GeometricTriple t(BigradedElement(c, 2, 0), ConnectionData(c), area_form(c, scalar(c, 1)));
  auto theta = bivector_from_triple(t);
  // Oracle: 2x2 inverse of [[0,1],[-1,0]] is [[0,-1],[1,0]].
  Multivector expected(c, 2);
  expected.add_term({0, 1}, scalar(c, -1));
  EXPECT_EQ(theta, expected);
  EXPECT_EQ(triple_from_bivector(theta), t);
  EXPECT_THROW(bivector_from_triple(GeometricTriple(c)), DomainError);
}

TEST(RoundTripProperty, RandomBivectors) {
  auto c = make_chart({"x1", "x2"}, {"y1", "y2"});
  testkit::Sampler s(48);
  for (int t = 0; t < 5; ++t) {
    auto theta = random_nondegenerate(s, c);
    auto tr = triple_from_bivector(theta);
    EXPECT_EQ(bivector_from_triple(tr), theta);
    EXPECT_EQ(triple_from_bivector(bivector_from_triple(tr)), tr);
  }
}

TEST(StructureEquations, ProductFamily) {
  auto c = plane_line();
  auto y = var(c, "y1");
  auto r = verify_structure_equations(product_family(c, scalar(c, 1) + y + y * y));
  EXPECT_TRUE(r.all_zero());
}

TEST(StructureEquations, TorusEpsilon) {
  auto c = make_chart({"x1", "x2"}, {"y1"}, {"eps"});
  auto t = triple_from_bivector(torus_epsilon_bivector(c, var(c, "eps")));
  EXPECT_TRUE(verify_structure_equations(t).all_zero());
}

TEST(StructureEquations, CurvatureMismatch) {
  auto c = plane_line();
  GeometricTriple t(BigradedElement(c, 2, 0), ConnectionData(c), area_form(c, scalar(c, 1)));
  t.connection.set(0, 0, var(c, "x2"));
  auto r = verify_structure_equations(t);
  BigradedElement expected(c, 1, 2);
  expected.add_term({0, 1}, {0}, scalar(c, -1));
  EXPECT_EQ(r.r4, expected);
  EXPECT_TRUE(r.r1.is_zero() && r.r2.is_zero() && r.r3.is_zero());
  EXPECT_FALSE(is_poisson(bivector_from_triple(t)));
}

TEST(StructureEquations, CoupledTriple) {
  auto c = plane_space();
  auto t = coupled_su2(c);
  EXPECT_FALSE(curvature(t.connection).is_zero());
  EXPECT_TRUE(verify_structure_equations(t).all_zero());
  EXPECT_TRUE(is_poisson(bivector_from_triple(t)));
}

TEST(StructureEquationsProperty, ZeroResidualsIffPoisson) {
  auto c = make_chart({"x1", "x2"}, {"y1", "y2"});
  testkit::Sampler s(49);
  int poisson_seen = 0;
  for (int t = 0; t < 12; ++t) {
    Multivector theta = random_nondegenerate(s, c);
    if (t % 3 == 0) {
      // Poisson by construction: constant coefficients.
      theta = Multivector(c, 2);
      theta.add_term({0, 1}, RationalFunction(c->num_vars(), s.rational() + Rational(7)));
      theta.add_term({0, 2}, RationalFunction(c->num_vars(), s.rational()));
      theta.add_term({1, 3}, RationalFunction(c->num_vars(), s.rational()));
      theta.add_term({2, 3}, RationalFunction(c->num_vars(), s.rational()));
    }
    bool p = is_poisson(theta);
    poisson_seen += p;
    EXPECT_EQ(verify_structure_equations(triple_from_bivector(theta)).all_zero(), p);
  }
  EXPECT_GT(poisson_seen, 0);
  auto big = plane_space();
  auto tr = coupled_su2(big);
  EXPECT_EQ(verify_structure_equations(tr).all_zero(), is_poisson(bivector_from_triple(tr)));
}

TEST(TotalDifferential, SquaresToZeroOnPoissonTriples) {
  testkit::Sampler s(50);
  std::vector<GeometricTriple> triples;
  auto c1 = plane_line();
  triples.push_back(product_family(c1, scalar(c1, 1) + var(c1, "y1") * var(c1, "y1")));
  auto c2 = make_chart({"x1", "x2"}, {"y1"}, {"eps"});
  triples.push_back(triple_from_bivector(torus_epsilon_bivector(c2, var(c2, "eps"))));
  triples.push_back(coupled_su2(plane_space()));
  for (const auto& t : triples) {
    for (int k = 0; k < 6; ++k) {
      auto u = s.bigraded(t.chart(), s.integer(0, 2), s.integer(0, 1), 2);
      GradedSum g(t.chart());
      g.add(u);
      EXPECT_TRUE(total_differential(t, total_differential(t, g)).is_zero());
    }
  }
}

TEST(TotalDifferential, CollapsesWithoutVerticalAndConnection) {
  auto c = plane_line();
  auto t = product_family(c, scalar(c, 1) + var(c, "y1"));
  testkit::Sampler s(51);
  auto u = s.bigraded(c, 1, 0, 2);
  auto d = total_differential(t, u);
  EXPECT_TRUE(d.d10.is_zero());
  EXPECT_EQ(d.d01, d_gamma(ConnectionData(c), u));
  EXPECT_EQ(d.dm12, omega_bracket(t.horizontal, u));
}

TEST(TotalDifferential, LinearTriplePreservesBaseForms) {
  auto c = plane_space();
  auto t = coupled_su2(c);
  testkit::Sampler s(52);
  for (int k = 0; k < 6; ++k) {
    BigradedElement u(c, s.integer(0, 2), s.integer(0, 1));
    for (int j = 0; j < 2; ++j) {
      u.add_term(s.distinct(u.p(), 2), s.distinct(u.q(), 3), RationalFunction(s.poly(c->num_vars(), 2, 2)));
    }
    auto d = total_differential(t, u);
    EXPECT_TRUE(d.d10.is_y_independent());
    EXPECT_TRUE(d.d01.is_y_independent());
    EXPECT_TRUE(d.dm12.is_y_independent());
  }
}

TEST(Invert, SingularAndRational) {
  auto c = make_chart({"x1", "x2"}, {});
  auto x1 = var(c, "x1"), x2 = var(c, "x2");
  RFMatrix sing{{x1, x2}, {x1 * x2, x2 * x2}};
  EXPECT_FALSE(invert(sing).has_value());
  RFMatrix m{{x1, scalar(c, 1) / x2}, {scalar(c, 2), x1 + x2}};
  auto inv = invert(m);
  ASSERT_TRUE(inv.has_value());
  auto p = block_product(m, *inv);
  EXPECT_EQ(p[0][0], scalar(c, 1));
  EXPECT_EQ(p[1][1], scalar(c, 1));
  EXPECT_TRUE(p[0][1].is_zero() && p[1][0].is_zero());
}
