#include "leafstab/section.hpp"

#include <map>
#include <tuple>

#include "leafstab/linalg.hpp"

namespace leafstab {

Section::Section(ChartPtr chart, std::vector<Poly> components) : chart_(std::move(chart)), components_(std::move(components)) {
  if (!chart_) throw ChartError("null chart");
  if (components_.size() != chart_->fiber_dim()) throw DomainError("section needs one component per fiber variable");
  for (const auto& c : components_) {
    if (c.nvars() != chart_->num_vars()) throw ChartError("section component lives on a different chart");
    for (std::size_t a = 0; a < chart_->fiber_dim(); ++a) {
      if (c.depends_on(chart_->fiber_index(a))) throw DomainError("section component depends on a fiber variable");
    }
  }
}

Section Section::zero(const ChartPtr& chart) {
  return Section(chart, std::vector<Poly>(chart->fiber_dim(), Poly(chart->num_vars())));
}

BigradedElement Section::as_element() const {
  BigradedElement e(chart_, 1, 0);
  for (std::size_t a = 0; a < components_.size(); ++a) {
    e.add_term({}, {static_cast<std::uint8_t>(a)}, RationalFunction(components_[a]));
  }
  return e;
}

namespace {

/// Coefficients of t^k in f(x, s + t y).
std::vector<RationalFunction> shift_expand(const RationalFunction& f, const Chart& chart, const std::vector<Poly>& s) {
  const std::size_t n = chart.base_dim(), m = chart.fiber_dim(), nv = chart.num_vars();
  for (std::size_t a = 0; a < m; ++a) {
    if (f.denominator().depends_on(chart.fiber_index(a))) throw DomainError("coefficient is not polynomial in the fiber");
  }
  std::vector<Poly> acc_total;
  std::vector<std::vector<Poly>> s_pow(m);
  auto power = [&](std::size_t b, unsigned k) -> const Poly& {
    auto& cache = s_pow[b];
    if (cache.empty()) cache.emplace_back(nv, Rational(1));
    while (cache.size() <= k) cache.push_back(cache.back() * s[b]);
    return cache[k];
  };
  for (const auto& [e, c] : f.numerator().terms()) {
    Exponent base = e;
    for (std::size_t b = 0; b < m; ++b) base[n + b] = 0;
    std::vector<Poly> acc{Poly::monomial(nv, base, c)};
    for (std::size_t b = 0; b < m; ++b) {
      const unsigned fb = e[n + b];
      if (fb == 0) continue;
      std::vector<Poly> next(acc.size() + fb, Poly(nv));
      Rational binom = 1;
      for (unsigned j = 0; j <= fb; ++j) {
        // C(fb, j) s_b^{fb-j} y_b^j
        Poly factor = power(b, fb - j) * binom;
        if (j > 0) factor = factor * Poly::variable(nv, n + b).pow(j);
        for (std::size_t k = 0; k < acc.size(); ++k) {
          if (!acc[k].is_zero()) next[k + j] += acc[k] * factor;
        }
        binom = binom * (fb - j) / (j + 1);
      }
      acc = std::move(next);
    }
    if (acc_total.size() < acc.size()) acc_total.resize(acc.size(), Poly(nv));
    for (std::size_t k = 0; k < acc.size(); ++k) acc_total[k] += acc[k];
  }
  std::vector<RationalFunction> out;
  out.reserve(acc_total.size());
  for (auto& p : acc_total) out.emplace_back(std::move(p), f.denominator());
  return out;
}

BigradedElement section_derivative(const Section& s) {
  const auto& chart = s.chart();
  BigradedElement ds(chart, 1, 1);
  for (std::size_t i = 0; i < chart->base_dim(); ++i) {
    for (std::size_t a = 0; a < chart->fiber_dim(); ++a) {
      ds.add_term({static_cast<std::uint8_t>(i)}, {static_cast<std::uint8_t>(a)},
                  RationalFunction(s.components()[a].derivative(i)));
    }
  }
  return ds;
}

void check_section(const ChartPtr& chart, const Section& s) { require_same_chart(chart, s.chart()); }

}  // namespace

BigradedElement restrict(const BigradedElement& u, const Section& s) {
  check_section(u.chart(), s);
  const auto& chart = *u.chart();
  return u.map_coefficients([&](const RationalFunction& c) { return substitute_fiber(c, chart, s.components()); });
}

BigradedElement restrict_connection(const ConnectionData& g, const Section& s) {
  return restrict(g.as_element(), s) - section_derivative(s);
}

ObstructionPair leaf_obstruction(const GeometricTriple& t, const Section& s) {
  return {restrict(t.vertical, s), restrict_connection(t.connection, s)};
}

GradedSum restrict_triple(const GeometricTriple& t, const Section& s) {
  GradedSum r(t.chart());
  r.add(restrict(t.vertical, s));
  r.add(restrict_connection(t.connection, s));
  r.add(restrict(t.horizontal, s));
  return r;
}

std::vector<BigradedElement> shifted_expansion(const BigradedElement& u, const Section& s) {
  check_section(u.chart(), s);
  const auto& chart = u.chart();
  std::vector<BigradedElement> out;
  u.for_each_term([&](const MultiIndex& base, const MultiIndex& fiber, const RationalFunction& c) {
    auto coeffs = shift_expand(c, *chart, s.components());
    while (out.size() < coeffs.size()) out.emplace_back(chart, u.q(), u.p());
    for (std::size_t k = 0; k < coeffs.size(); ++k) out[k].add_term(base, fiber, coeffs[k]);
  });
  if (out.empty()) out.emplace_back(chart, u.q(), u.p());
  return out;
}

BigradedElement rescale(const BigradedElement& u, const Rational& t, const Section& s) {
  if (t == 0) throw DomainError("rescale: t must be non-zero");
  auto terms = shifted_expansion(u, s);
  const std::size_t nv = u.chart()->num_vars();
  BigradedElement r(u.chart(), u.q(), u.p());
  Rational tk = 1 / t;
  for (const auto& e : terms) {
    r += e * RationalFunction(nv, tk);
    tk *= t;
  }
  return r;
}

ConnectionData rescale_connection(const ConnectionData& g, const Rational& t, const Section& s) {
  if (t == 0) throw DomainError("rescale: t must be non-zero");
  const std::size_t nv = g.chart()->num_vars();
  auto terms = shifted_expansion(g.as_element(), s);
  BigradedElement r = -section_derivative(s);
  Rational tk = 1;
  for (const auto& e : terms) {
    r += e * RationalFunction(nv, tk);
    tk *= t;
  }
  return ConnectionData::from_element(r * RationalFunction(nv, 1 / t));
}

BigradedElement linearize(const BigradedElement& u, const Section& s) {
  auto terms = shifted_expansion(u, s);
  return terms.size() > 1 ? terms[1] : BigradedElement(u.chart(), u.q(), u.p());
}

ConnectionData linearize_connection(const ConnectionData& g, const Section& s) {
  return ConnectionData::from_element(linearize(g.as_element(), s));
}

GeometricTriple linearize_triple(const GeometricTriple& t, const Section& s) {
  return GeometricTriple(linearize(t.vertical, s), linearize_connection(t.connection, s), linearize(t.horizontal, s));
}

GradedSum LinearizedDifferential::sum() const {
  GradedSum g(d01.chart());
  g.add(d10);
  g.add(d01);
  g.add(dm12);
  return g;
}

GradedSum LinearizedDifferential::reduced() const {
  GradedSum g(d01.chart());
  for (const auto* e : {&d10, &d01, &dm12}) {
    if (e->q() != 0) g.add(*e);
  }
  return g;
}

LinearizedDifferential linearized_differential(const GeometricTriple& t, const Section& s, const BigradedElement& w) {
  if (!w.is_y_independent()) throw DomainError("linearized differential expects y-independent input");
  GeometricTriple lin = linearize_triple(t, s);
  return {omega_bracket(lin.vertical, w), d_gamma(lin.connection, w), omega_bracket(lin.horizontal, w)};
}

GradedSum linearized_differential(const GeometricTriple& t, const Section& s, const GradedSum& w, bool reduced) {
  GradedSum out(t.chart());
  for (const auto& [k, e] : w.parts()) {
    auto d = linearized_differential(t, s, e);
    out += reduced ? d.reduced() : d.sum();
  }
  return out;
}

GeometricTriple first_jet(const GeometricTriple& t) {
  const Section zero = Section::zero(t.chart());
  if (!leaf_obstruction(t, zero).is_zero()) throw DomainError("first_jet: the zero section is not a leaf");
  return GeometricTriple(linearize(t.vertical, zero), linearize_connection(t.connection, zero),
                         restrict(t.horizontal, zero) + linearize(t.horizontal, zero));
}

std::vector<Section> flat_kernel_sections(const GeometricTriple& jet, unsigned degree_bound) {
  const auto& chart = jet.chart();
  const std::size_t n = chart->base_dim(), m = chart->fiber_dim(), nv = chart->num_vars();
  const Section zero = Section::zero(chart);

  // Monomials in the base variables of total degree <= bound.
  std::vector<Exponent> monomials;
  Exponent e(nv, 0);
  auto enumerate = [&](auto&& self, std::size_t var, unsigned remaining) -> void {
    if (var == n) {
      monomials.push_back(e);
      return;
    }
    for (unsigned k = 0; k <= remaining; ++k) {
      e[var] = static_cast<std::uint16_t>(k);
      self(self, var + 1, remaining - k);
    }
    e[var] = 0;
  };
  enumerate(enumerate, 0, degree_bound);

  using Key = std::tuple<int, int, MultiIndex, MultiIndex>;
  std::map<Key, std::vector<RationalFunction>> columns;
  const std::size_t unknowns = monomials.size() * m;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t k = 0; k < monomials.size(); ++k) {
      const std::size_t col = a * monomials.size() + k;
      BigradedElement w(chart, 1, 0);
      w.add_term({}, {static_cast<std::uint8_t>(a)}, RationalFunction(Poly::monomial(nv, monomials[k], Rational(1))));
      GradedSum out = linearized_differential(jet, zero, w).reduced();
      for (const auto& [qp, part] : out.parts()) {
        part.for_each_term([&](const MultiIndex& base, const MultiIndex& fiber, const RationalFunction& c) {
          auto& v = columns[Key{qp.first, qp.second, base, fiber}];
          if (v.empty()) v.assign(unknowns, RationalFunction(nv));
          v[col] = c;
        });
      }
    }
  }

  // Clear denominators per key, then one equation per monomial.
  std::vector<std::vector<Rational>> rows;
  for (auto& [key, vals] : columns) {
    Poly l(nv, Rational(1));
    for (const auto& c : vals) {
      if (!c.is_polynomial() && !Poly::divide_exact(l, c.denominator())) l = l * c.denominator();
    }
    std::map<Exponent, std::vector<Rational>> eqs;
    for (std::size_t col = 0; col < unknowns; ++col) {
      if (vals[col].is_zero()) continue;
      RationalFunction p = vals[col] * RationalFunction(l);
      if (!p.is_polynomial()) throw ArithmeticError("failed to clear denominators");
      Poly num = p.numerator() * (Rational(1) / p.denominator().constant_term());
      for (const auto& [ex, coef] : num.terms()) {
        auto& row = eqs[ex];
        if (row.empty()) row.assign(unknowns, Rational(0));
        row[col] = coef;
      }
    }
    for (auto& [ex, row] : eqs) rows.push_back(std::move(row));
  }

  QMatrix a(rows.size(), unknowns);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < unknowns; ++c) a(r, c) = rows[r][c];
  }
  std::vector<Section> basis;
  for (const auto& v : nullspace(a)) {
    std::vector<Poly> comps(m, Poly(nv));
    for (std::size_t a_idx = 0; a_idx < m; ++a_idx) {
      for (std::size_t k = 0; k < monomials.size(); ++k) {
        comps[a_idx].add_term(monomials[k], v[a_idx * monomials.size() + k]);
      }
    }
    basis.emplace_back(chart, std::move(comps));
  }
  return basis;
}

bool is_first_order(const GeometricTriple& t) {
  bool polynomial = true;
  t.horizontal.for_each_term([&](const MultiIndex&, const MultiIndex&, const RationalFunction& c) {
    polynomial = polynomial && c.is_polynomial();
  });
  return (t.vertical.is_zero() || t.vertical.is_linear_in_y()) &&
         (t.connection.is_zero() || t.connection.is_linear_in_y()) && polynomial && t.horizontal.y_degree() <= 1;
}

GeometricTriple deform_by_cocycle(const GeometricTriple& t, const GradedSum& c, const Rational& param) {
  require_same_chart(t.chart(), c.chart());
  if (!is_first_order(t)) throw DomainError("deform_by_cocycle: triple is not of first-order type");
  for (const auto& [qp, part] : c.parts()) {
    if (qp != std::make_pair(2, 0) && qp != std::make_pair(1, 1) && qp != std::make_pair(0, 2)) {
      throw DomainError("deform_by_cocycle: c may only have components (2,0), (1,1), (0,2)");
    }
    if (!part.is_y_independent()) throw DomainError("deform_by_cocycle: c must have y-independent coefficients");
  }
  const RationalFunction tp(t.chart()->num_vars(), param);
  BigradedElement g = t.connection.as_element() + c.part(1, 1) * tp;
  return GeometricTriple(t.vertical + c.part(2, 0) * tp, ConnectionData::from_element(g),
                         t.horizontal + c.part(0, 2) * tp);
}

bool is_cocycle(const GeometricTriple& t, const GradedSum& c) {
  return linearized_differential(t, Section::zero(t.chart()), c).is_zero();
}

GradedSum residual_sum(const StructureResiduals& r) {
  GradedSum g(r.r1.chart());
  for (const auto* e : r.items()) g.add(*e);
  return g;
}

}  // namespace leafstab
