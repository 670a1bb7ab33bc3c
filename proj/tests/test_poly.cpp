#include <gtest/gtest.h>

#include "leafstab/poly.hpp"
#include "random_objects.hpp"

using namespace leafstab;

namespace {

struct Vars {
  ChartPtr chart = make_chart({"x1", "x2"}, {"y1", "y2"});
  std::size_t n = chart->num_vars();
  RationalFunction x1 = RationalFunction::variable(n, 0);
  RationalFunction x2 = RationalFunction::variable(n, 1);
  RationalFunction y1 = RationalFunction::variable(n, 2);
  RationalFunction y2 = RationalFunction::variable(n, 3);
  RationalFunction c(int v) const { return RationalFunction(n, Rational(v)); }
};

}  // namespace

TEST(PolyArith, DifferenceOfSquares) {
  Vars v;
  auto r = poly_arith(v.x1 + v.y1, v.x1 - v.y1, ArithOp::mul);
  EXPECT_EQ(r, v.x1 * v.x1 - v.y1 * v.y1);
  EXPECT_TRUE(r.is_polynomial());
}

TEST(PolyArith, AddZeroIsIdentity) {
  Vars v;
  auto p = v.x1 * v.x2 + v.c(3);
  EXPECT_EQ(poly_arith(p, RationalFunction(v.n), ArithOp::add), p);
}

TEST(PolyArith, QuotientEvaluates) {
  Vars v;
  auto q = poly_arith(v.x1 * v.x1 - v.c(1), v.x1 - v.c(1), ArithOp::div);
  std::vector<Rational> pt{3, 0, 0, 0};
  // Oracle: numerator 8, denominator 2.
  EXPECT_EQ(q.evaluate(pt), Rational(4));
  EXPECT_TRUE(q.is_polynomial());
}

TEST(PolyArith, DivisionByZeroThrows) {
  Vars v;
  EXPECT_THROW(poly_arith(v.x1, RationalFunction(v.n), ArithOp::div), ArithmeticError);
}

TEST(PolyArith, EvaluateAtPoleThrows) {
  Vars v;
  auto q = v.c(1) / v.x1;
  std::vector<Rational> pt{0, 1, 0, 0};
  EXPECT_THROW(q.evaluate(pt), ArithmeticError);
}

TEST(Partial, PowerRule) {
  Vars v;
  EXPECT_EQ(partial(v.x1 * v.x1 * v.y1, *v.chart, "x1"), v.c(2) * v.x1 * v.y1);
}

TEST(Partial, Constant) {
  Vars v;
  EXPECT_TRUE(partial(v.c(7), *v.chart, "x1").is_zero());
}

TEST(Partial, QuotientRule) {
  Vars v;
  EXPECT_EQ(partial(v.c(1) / v.x1, *v.chart, "x1"), -(v.c(1) / (v.x1 * v.x1)));
}

TEST(Partial, UnknownVariable) {
  Vars v;
  EXPECT_THROW(partial(v.x1, *v.chart, "z"), ChartError);
}

TEST(SubstituteFiber, Direct) {
  Vars v;
  std::vector<Poly> s{Poly::variable(v.n, 0), Poly(v.n)};
  EXPECT_EQ(substitute_fiber(v.x1 + v.y1 * v.y1, *v.chart, s), v.x1 + v.x1 * v.x1);
}

TEST(SubstituteFiber, IndependentOfFiber) {
  Vars v;
  std::vector<Poly> s{Poly::variable(v.n, 1), Poly::variable(v.n, 0)};
  auto f = v.x1 * v.x2 + v.c(2);
  EXPECT_EQ(substitute_fiber(f, *v.chart, s), f);
}

TEST(SubstituteFiber, ProductExpands) {
  Vars v;
  std::vector<Poly> s{Poly::variable(v.n, 0), -Poly::variable(v.n, 0)};
  EXPECT_EQ(substitute_fiber(v.y1 * v.y2, *v.chart, s), -(v.x1 * v.x1));
}

TEST(SubstituteFiber, RejectsFiberVariables) {
  Vars v;
  std::vector<Poly> s{Poly::variable(v.n, 2), Poly(v.n)};
  EXPECT_THROW(substitute_fiber(v.y1, *v.chart, s), DomainError);
}

TEST(PolyPrint, Canonical) {
  Vars v;
  auto p = v.x1 * v.x1 - v.c(2) * v.x1 * v.y1 + Rational(1, 2) * v.y2;
  EXPECT_EQ(p.to_string(*v.chart), "x1^2 - 2*x1*y1 + 1/2*y2");
  EXPECT_EQ(RationalFunction(v.n).to_string(*v.chart), "0");
  EXPECT_EQ((v.c(1) / (v.x1 + v.c(1))).to_string(*v.chart), "(1)/(x1 + 1)");
}

TEST(PolyProperty, RingAxioms) {
  testkit::Sampler s(11);
  for (int trial = 0; trial < 60; ++trial) {
    auto a = s.rational_function(4, 2), b = s.rational_function(4, 2), c = s.rational_function(4, 2);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a + b, b + a);
    EXPECT_TRUE((a - a).is_zero());
    if (!b.is_zero()) EXPECT_EQ((a / b) * b, a);
  }
}

TEST(PolyProperty, MixedPartialsCommute) {
  testkit::Sampler s(12);
  for (int trial = 0; trial < 60; ++trial) {
    auto f = s.rational_function(4, 3);
    std::size_t u = static_cast<std::size_t>(s.integer(0, 3));
    std::size_t w = static_cast<std::size_t>(s.integer(0, 3));
    EXPECT_EQ(f.derivative(u).derivative(w), f.derivative(w).derivative(u));
  }
}

TEST(PolyProperty, SubstitutionIsRingHomomorphism) {
  testkit::Sampler s(13);
  Vars v;
  for (int trial = 0; trial < 60; ++trial) {
    auto f = s.rational_function(4, 2), g = s.rational_function(4, 2);
    std::vector<Poly> sec{s.poly(4, 2, 2), s.poly(4, 2, 2)};
    auto sf = substitute_fiber(f, *v.chart, sec);
    auto sg = substitute_fiber(g, *v.chart, sec);
    try {
      EXPECT_EQ(substitute_fiber(f * g, *v.chart, sec), sf * sg);
      EXPECT_EQ(substitute_fiber(f + g, *v.chart, sec), sf + sg);
    } catch (const ArithmeticError&) {
      // substituted denominator vanished identically
    }
  }
}

TEST(PolyProperty, ExactDivisionAgreesWithProduct) {
  testkit::Sampler s(14);
  for (int trial = 0; trial < 60; ++trial) {
    Poly a = s.poly(4, 3), b = s.poly(4, 2);
    if (b.is_zero()) continue;
    auto q = Poly::divide_exact(a * b, b);
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(*q, a);
  }
}
