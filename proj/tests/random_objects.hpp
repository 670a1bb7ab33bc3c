#pragma once

// Seeded generators for randomized property tests.

#include <random>

#include "leafstab/bigraded.hpp"

namespace leafstab::testkit {

class Sampler {
 public:
  explicit Sampler(unsigned seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Rational rational() {
    int num = integer(-5, 5);
    int den = integer(1, 3);
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  /// Polynomial in the first `active` variables with total degree <= max_deg.
  Poly poly(std::size_t nvars, std::size_t active, unsigned max_deg, int max_terms = 4) {
    Poly p(nvars);
    int n = integer(1, max_terms);
    for (int t = 0; t < n; ++t) {
      Exponent e(nvars, 0);
      unsigned deg = static_cast<unsigned>(integer(0, static_cast<int>(max_deg)));
      for (unsigned d = 0; d < deg; ++d) e[static_cast<std::size_t>(integer(0, static_cast<int>(active) - 1))] += 1;
      Rational c = rational();
      c.canonicalize();
      p.add_term(e, c);
    }
    return p;
  }

  Poly poly(std::size_t nvars, unsigned max_deg) { return poly(nvars, nvars, max_deg); }

  RationalFunction rational_function(std::size_t nvars, unsigned max_deg) {
    Poly den = poly(nvars, 1);
    den += Poly(nvars, Rational(integer(2, 4)));
    if (den.is_zero()) den = Poly(nvars, Rational(1));
    return RationalFunction(poly(nvars, max_deg), den);
  }

  /// Random multivector of the given degree with polynomial coefficients.
  Multivector multivector(const ChartPtr& chart, int degree, unsigned coeff_deg, int max_terms = 3) {
    Multivector m(chart, degree);
    const int n = static_cast<int>(chart->num_vars());
    if (degree > n) return m;
    int terms = integer(1, max_terms);
    for (int t = 0; t < terms; ++t) {
      MultiIndex idx;
      while (static_cast<int>(idx.size()) < degree) {
        auto v = static_cast<std::uint8_t>(integer(0, n - 1));
        if (std::find(idx.begin(), idx.end(), v) == idx.end()) idx.push_back(v);
      }
      m.add_term(idx, poly(chart->num_vars(), coeff_deg));
    }
    return m;
  }

  /// Random element of bidegree (q,p) with polynomial coefficients.
  BigradedElement bigraded(const ChartPtr& chart, int q, int p, unsigned coeff_deg, int max_terms = 3) {
    BigradedElement e(chart, q, p);
    const int n = static_cast<int>(chart->base_dim()), m = static_cast<int>(chart->fiber_dim());
    if (q > m || p > n) return e;
    int terms = integer(1, max_terms);
    for (int t = 0; t < terms; ++t) {
      e.add_term(distinct(p, n), distinct(q, m), poly(chart->num_vars(), chart->base_dim() + chart->fiber_dim(), coeff_deg));
    }
    return e;
  }

  ConnectionData connection(const ChartPtr& chart, unsigned coeff_deg) {
    ConnectionData g(chart);
    for (std::size_t i = 0; i < chart->base_dim(); ++i) {
      for (std::size_t a = 0; a < chart->fiber_dim(); ++a) {
        if (integer(0, 2) > 0) g.set(i, a, poly(chart->num_vars(), chart->base_dim() + chart->fiber_dim(), coeff_deg));
      }
    }
    return g;
  }

  MultiIndex distinct(int count, int range) {
    MultiIndex idx;
    while (static_cast<int>(idx.size()) < count) {
      auto v = static_cast<std::uint8_t>(integer(0, range - 1));
      if (std::find(idx.begin(), idx.end(), v) == idx.end()) idx.push_back(v);
    }
    return idx;
  }

  std::mt19937& engine() { return rng_; }

 private:
  std::mt19937 rng_;
};

}  // namespace leafstab::testkit
