#include <gtest/gtest.h>

#include "leafstab/multivector.hpp"
#include "random_objects.hpp"

using namespace leafstab;

namespace {

int sgn(int e) { return e % 2 == 0 ? 1 : -1; }

struct R3 {
  ChartPtr chart = make_chart({"x1", "x2", "x3"}, {});
  std::size_t n = 3;
  RationalFunction x(std::size_t i) const { return RationalFunction::variable(n, i); }
  RationalFunction c(int v) const { return RationalFunction(n, Rational(v)); }
  Multivector d(std::size_t i) const { return Multivector::basis(chart, i); }
  Multivector biv(std::size_t i, std::size_t j, const RationalFunction& f) const {
    Multivector m(chart, 2);
    m.add_term({static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j)}, f);
    return m;
  }
  Multivector su2() const { return biv(0, 1, x(2)) + biv(2, 0, x(1)) + biv(1, 2, x(0)); }
  Multivector jacobiator_counterexample() const { return biv(0, 1, x(2)) + biv(1, 2, x(1)); }
};

RationalFunction poisson_bracket(const Multivector& pi, const RationalFunction& f, const RationalFunction& g) {
  return evaluate(pi, {differential(pi.chart(), f), differential(pi.chart(), g)});
}

RationalFunction jacobiator(const Multivector& pi, const RationalFunction& f, const RationalFunction& g,
                            const RationalFunction& h) {
  return poisson_bracket(pi, poisson_bracket(pi, f, g), h) + poisson_bracket(pi, poisson_bracket(pi, g, h), f) +
         poisson_bracket(pi, poisson_bracket(pi, h, f), g);
}

}  // namespace

TEST(Schouten, CoordinateLieBracket) {
  R3 r;
  EXPECT_EQ(schouten(r.d(0), r.x(0) * r.d(1)), r.d(1));
}

TEST(Schouten, TopDegreeVanishesOnPlane) {
  auto chart = make_chart({"x1", "x2"}, {});
  Multivector pi(chart, 2);
  pi.add_term({0, 1}, RationalFunction::variable(2, 0));
  EXPECT_TRUE(schouten(pi, pi).is_zero());
}

TEST(Schouten, JacobiatorExample) {
  R3 r;
  auto pi = r.jacobiator_counterexample();
  auto b = schouten(pi, pi);
  EXPECT_EQ(b.degree(), 3);
  // Oracle: J(x1,x2,x3) = -x3 computed from the bracket of functions.
  EXPECT_EQ(jacobiator(pi, r.x(0), r.x(1), r.x(2)), -r.x(2));
  Multivector expected(r.chart, 3);
  expected.add_term({0, 1, 2}, r.c(2) * r.x(2));
  EXPECT_EQ(b, expected);
}

TEST(Schouten, PiPiAgainstJacobiatorRandom) {
  // Sign convention of the bracket: [π,π](df,dg,dh) = -2 J(f,g,h).
  R3 r;
  testkit::Sampler s(21);
  for (int trial = 0; trial < 20; ++trial) {
    auto pi = s.multivector(r.chart, 2, 2, 3);
    auto lhs = evaluate(schouten(pi, pi), {differential(r.chart, r.x(0)), differential(r.chart, r.x(1)),
                                           differential(r.chart, r.x(2))});
    EXPECT_EQ(lhs, Rational(-2) * jacobiator(pi, r.x(0), r.x(1), r.x(2)));
  }
}

TEST(IsPoisson, ReferenceExamples) {
  auto chart = make_chart({"x1", "x2"}, {}, {"eps"});
  auto x1 = RationalFunction::variable(3, 0), x2 = RationalFunction::variable(3, 1);
  auto eps = RationalFunction::variable(3, 2);
  Multivector pe(chart, 2);
  pe.add_term({0, 1}, x1 * x1 + x2 * x2 + eps);
  EXPECT_TRUE(is_poisson(pe));
  R3 r;
  EXPECT_TRUE(is_poisson(r.su2()));
  EXPECT_FALSE(is_poisson(r.jacobiator_counterexample()));
  EXPECT_THROW(is_poisson(r.d(0)), DomainError);
}

TEST(Hamiltonian, Examples) {
  R3 r;
  auto std2 = r.biv(0, 1, r.c(1));
  EXPECT_EQ(hamiltonian_vf(std2, r.x(0)), r.d(1));
  EXPECT_TRUE(hamiltonian_vf(std2, r.c(5)).is_zero());
  EXPECT_EQ(hamiltonian_vf(r.su2(), r.x(0)), r.x(2) * r.d(1) - r.x(1) * r.d(2));
}

TEST(Hamiltonian, PairingDefinition) {
  R3 r;
  testkit::Sampler s(22);
  for (int trial = 0; trial < 10; ++trial) {
    auto pi = s.multivector(r.chart, 2, 2);
    auto f = RationalFunction(s.poly(3, 2)), g = RationalFunction(s.poly(3, 2));
    auto xf = hamiltonian_vf(pi, f);
    EXPECT_EQ(evaluate(xf, {differential(r.chart, g)}), poisson_bracket(pi, f, g));
  }
}

TEST(PiSharp, Examples) {
  R3 r;
  auto std2 = r.biv(0, 1, r.c(1));
  EXPECT_EQ(pi_sharp(std2, Form::basis(r.chart, 0)), r.d(1));
  EXPECT_TRUE(pi_sharp(std2, Form(r.chart, 1)).is_zero());
  testkit::Sampler s(23);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = RationalFunction(s.poly(3, 3));
    EXPECT_EQ(pi_sharp(r.su2(), differential(r.chart, f)), hamiltonian_vf(r.su2(), f));
  }
  EXPECT_THROW(pi_sharp(r.d(0), Form::basis(r.chart, 0)), DomainError);
}

TEST(PoissonDifferential, Examples) {
  R3 r;
  auto std2 = r.biv(0, 1, r.c(1));
  auto f = Multivector::scalar(r.chart, r.x(0));
  EXPECT_EQ(poisson_differential(std2, f), -hamiltonian_vf(std2, r.x(0)));
  EXPECT_EQ(poisson_differential(std2, f), -r.d(1));
  EXPECT_TRUE(poisson_differential(r.su2(), r.su2()).is_zero());
  EXPECT_THROW(poisson_differential(r.jacobiator_counterexample(), f), DomainError);
}

TEST(PoissonDifferential, SquaresToZero) {
  R3 r;
  testkit::Sampler s(24);
  for (int deg = 0; deg <= 2; ++deg) {
    for (int trial = 0; trial < 5; ++trial) {
      auto y = s.multivector(r.chart, deg, 2);
      EXPECT_TRUE(poisson_differential(r.su2(), poisson_differential(r.su2(), y)).is_zero());
    }
  }
}

TEST(SchoutenProperty, GradedAntisymmetry) {
  auto chart = make_chart({"x1", "x2", "x3", "x4"}, {});
  testkit::Sampler s(31);
  for (int trial = 0; trial < 40; ++trial) {
    int p = s.integer(0, 3), q = s.integer(0, 3);
    auto x = s.multivector(chart, p, 2), y = s.multivector(chart, q, 2);
    EXPECT_EQ(schouten(x, y), Rational(-sgn((p - 1) * (q - 1))) * RationalFunction(4, 1) * schouten(y, x));
  }
}

TEST(SchoutenProperty, GradedLeibniz) {
  auto chart = make_chart({"x1", "x2", "x3", "x4"}, {});
  testkit::Sampler s(32);
  for (int trial = 0; trial < 40; ++trial) {
    int p = s.integer(0, 3), q = s.integer(0, 2), r = s.integer(0, 2);
    auto x = s.multivector(chart, p, 2), y = s.multivector(chart, q, 2), z = s.multivector(chart, r, 2);
    auto lhs = schouten(x, wedge(y, z));
    auto rhs = wedge(schouten(x, y), z) + RationalFunction(4, Rational(sgn((p - 1) * q))) * wedge(y, schouten(x, z));
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(SchoutenProperty, GradedJacobi) {
  auto chart = make_chart({"x1", "x2", "x3", "x4"}, {});
  testkit::Sampler s(33);
  for (int trial = 0; trial < 40; ++trial) {
    int p = s.integer(0, 2), q = s.integer(0, 2), r = s.integer(0, 2);
    auto x = s.multivector(chart, p, 2), y = s.multivector(chart, q, 2), z = s.multivector(chart, r, 2);
    auto lhs = schouten(x, schouten(y, z));
    auto rhs = schouten(schouten(x, y), z) +
               RationalFunction(4, Rational(sgn((p - 1) * (q - 1)))) * schouten(y, schouten(x, z));
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(Forms, ExteriorDerivativeSquaresToZero) {
  R3 r;
  testkit::Sampler s(34);
  for (int trial = 0; trial < 10; ++trial) {
    Form w(r.chart, 1);
    for (std::uint8_t i = 0; i < 3; ++i) w.add_term({i}, RationalFunction(s.poly(3, 3)));
    EXPECT_TRUE(exterior_derivative(exterior_derivative(w)).is_zero());
  }
}

TEST(Multivector, ZeroCarriesAnyDegree) {
  R3 r;
  Multivector z(r.chart, 3);
  EXPECT_EQ(z + r.biv(0, 1, r.c(1)), r.biv(0, 1, r.c(1)));
  EXPECT_THROW(r.d(0) + r.biv(0, 1, r.c(1)), DomainError);
}
