#include "leafstab/bigraded.hpp"

#include <algorithm>

namespace leafstab {

BigradedElement::BigradedElement(ChartPtr chart, int q, int p) : chart_(std::move(chart)), q_(q), p_(p) {
  if (!chart_) throw ChartError("null chart");
  if (p_ < 0) throw DomainError("invalid bidegree");
}

void BigradedElement::add_term(MultiIndex base, MultiIndex fiber, const RationalFunction& c) {
  if (static_cast<int>(fiber.size()) != q_) throw DomainError("fiber index length does not match q");
  for (auto& a : fiber) {
    if (a >= chart_->fiber_dim()) throw ChartError("fiber index outside chart");
    a = static_cast<std::uint8_t>(chart_->fiber_index(a));
  }
  Multivector v(chart_, q_);
  v.add_term(std::move(fiber), c);
  add(std::move(base), v);
}

void BigradedElement::add(MultiIndex base, const Multivector& v) {
  require_same_chart(chart_, v.chart());
  if (v.is_zero()) return;
  if (v.degree() != q_) throw DomainError("vertical part has wrong degree");
  if (static_cast<int>(base.size()) != p_) throw DomainError("base index length does not match p");
  for (auto i : base) {
    if (i >= chart_->base_dim()) throw ChartError("base index outside chart");
  }
  for (const auto& [idx, c] : v.terms()) {
    for (auto a : idx) {
      if (!chart_->is_fiber(a)) throw DomainError("vertical part contains a base direction");
    }
  }
  int sign = detail::sort_sign(base);
  if (sign == 0) return;
  add_sorted(base, sign > 0 ? v : -v);
}

void BigradedElement::add_sorted(const MultiIndex& base, const Multivector& v) {
  if (v.is_zero()) return;
  auto it = terms_.find(base);
  if (it == terms_.end()) {
    terms_.emplace(base, v);
    return;
  }
  it->second += v;
  if (it->second.is_zero()) terms_.erase(it);
}

RationalFunction BigradedElement::coefficient(const MultiIndex& base, const MultiIndex& fiber) const {
  auto it = terms_.find(base);
  if (it == terms_.end()) return RationalFunction(chart_->num_vars());
  MultiIndex g = fiber;
  for (auto& a : g) a = static_cast<std::uint8_t>(chart_->fiber_index(a));
  return it->second.coefficient(g);
}

const Multivector* BigradedElement::component(const MultiIndex& base) const {
  auto it = terms_.find(base);
  return it == terms_.end() ? nullptr : &it->second;
}

BigradedElement BigradedElement::operator-() const {
  BigradedElement r = *this;
  for (auto& [b, v] : r.terms_) v = -v;
  return r;
}

BigradedElement& BigradedElement::operator+=(const BigradedElement& o) {
  require_same_chart(chart_, o.chart_);
  if (o.is_zero()) return *this;
  if (is_zero()) {
    q_ = o.q_;
    p_ = o.p_;
  } else if (q_ != o.q_ || p_ != o.p_) {
    throw DomainError("adding elements of different bidegree");
  }
  for (const auto& [b, v] : o.terms_) add_sorted(b, v);
  return *this;
}

BigradedElement& BigradedElement::operator-=(const BigradedElement& o) { return *this += -o; }

BigradedElement& BigradedElement::operator*=(const RationalFunction& f) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= f;
    it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

bool BigradedElement::operator==(const BigradedElement& o) const {
  if (!(*chart_ == *o.chart_)) return false;
  if (is_zero() && o.is_zero()) return true;
  return q_ == o.q_ && p_ == o.p_ && terms_ == o.terms_;
}

bool BigradedElement::is_y_independent() const {
  bool ok = true;
  for_each_term([&](const MultiIndex&, const MultiIndex&, const RationalFunction& c) {
    for (std::size_t a = 0; a < chart_->fiber_dim(); ++a) ok = ok && !c.depends_on(chart_->fiber_index(a));
  });
  return ok;
}

bool BigradedElement::is_linear_in_y() const {
  const std::size_t n = chart_->base_dim(), m = chart_->fiber_dim();
  bool ok = true;
  for_each_term([&](const MultiIndex&, const MultiIndex&, const RationalFunction& c) {
    if (!c.is_polynomial()) {
      ok = false;
      return;
    }
    for (const auto& [e, coef] : c.numerator().terms()) {
      std::size_t d = 0;
      for (std::size_t a = 0; a < m; ++a) d += e[n + a];
      ok = ok && d == 1;
    }
  });
  return ok;
}

std::size_t BigradedElement::y_degree() const {
  std::size_t d = 0;
  for_each_term([&](const MultiIndex&, const MultiIndex&, const RationalFunction& c) {
    if (!c.is_polynomial()) throw DomainError("coefficient is not polynomial");
    d = std::max(d, c.numerator().degree_in(chart_->base_dim(), chart_->fiber_dim()));
  });
  return d;
}

std::string BigradedElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [base, v] : terms_) {
    if (!out.empty()) out += " + ";
    std::string b;
    for (auto i : base) b += (b.empty() ? "d" : "^d") + chart_->name(i);
    out += (b.empty() ? "1" : b) + " (x) [" + v.to_string() + "]";
  }
  return out;
}

BigradedElement omega_bracket(const BigradedElement& u, const BigradedElement& v) {
  require_same_chart(u.chart(), v.chart());
  const auto& chart = u.chart();
  BigradedElement r(chart, u.q() + v.q() - 1, u.p() + v.p());
  if (u.q() + v.q() <= 0 || u.is_zero() || v.is_zero()) return r;
  const int sign = ((u.q() - 1) * v.p()) % 2 == 0 ? 1 : -1;
  MultiIndex merged;
  for (const auto& [bi, a] : u.terms()) {
    for (const auto& [bk, b] : v.terms()) {
      int s = detail::merge_sign(bi, bk, merged);
      if (s == 0) continue;
      Multivector br = schouten_partial(a, b, chart->base_dim(), chart->fiber_dim());
      if (br.is_zero()) continue;
      r.add(merged, s * sign > 0 ? br : -br);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

ConnectionData::ConnectionData(ChartPtr chart) : chart_(std::move(chart)) {
  if (!chart_) throw ChartError("null chart");
  const std::size_t nv = chart_->num_vars();
  coeffs_.assign(chart_->base_dim(), std::vector<RationalFunction>(chart_->fiber_dim(), RationalFunction(nv)));
}

void ConnectionData::set(std::size_t i, std::size_t a, RationalFunction f) {
  if (f.nvars() != chart_->num_vars()) throw ChartError("coefficient lives on a different chart");
  coeffs_.at(i).at(a) = std::move(f);
}

Multivector ConnectionData::field(std::size_t i) const {
  Multivector v(chart_, 1);
  for (std::size_t a = 0; a < chart_->fiber_dim(); ++a) {
    v.add_term({static_cast<std::uint8_t>(chart_->fiber_index(a))}, coeffs_.at(i)[a]);
  }
  return v;
}

BigradedElement ConnectionData::as_element() const {
  BigradedElement e(chart_, 1, 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) e.add({static_cast<std::uint8_t>(i)}, field(i));
  return e;
}

ConnectionData ConnectionData::from_element(const BigradedElement& e) {
  if (!e.is_zero() && (e.q() != 1 || e.p() != 1)) throw DomainError("connection element must have bidegree (1,1)");
  ConnectionData g(e.chart());
  e.for_each_term([&](const MultiIndex& base, const MultiIndex& fiber, const RationalFunction& c) {
    g.coeffs_[base[0]][fiber[0]] = c;
  });
  return g;
}

bool ConnectionData::is_zero() const {
  for (const auto& row : coeffs_) {
    for (const auto& c : row) {
      if (!c.is_zero()) return false;
    }
  }
  return true;
}

bool ConnectionData::is_linear_in_y() const { return as_element().is_linear_in_y(); }

bool ConnectionData::operator==(const ConnectionData& o) const {
  return *chart_ == *o.chart_ && coeffs_ == o.coeffs_;
}

BigradedElement d_gamma(const ConnectionData& g, const BigradedElement& u) {
  require_same_chart(g.chart(), u.chart());
  const auto& chart = u.chart();
  const std::size_t n = chart->base_dim(), m = chart->fiber_dim();
  BigradedElement r(chart, u.q(), u.p() + 1);
  MultiIndex merged;
  for (std::size_t i = 0; i < n; ++i) {
    const Multivector gi = g.field(i);
    const MultiIndex di{static_cast<std::uint8_t>(i)};
    for (const auto& [base, v] : u.terms()) {
      int s = detail::merge_sign(di, base, merged);
      if (s == 0) continue;
      Multivector dv = coefficient_derivative(v, i);
      if (!gi.is_zero()) dv += schouten_partial(gi, v, n, m);
      if (dv.is_zero()) continue;
      r.add(merged, s > 0 ? dv : -dv);
    }
  }
  return r;
}

BigradedElement curvature(const ConnectionData& g) {
  const auto& chart = g.chart();
  const std::size_t n = chart->base_dim(), m = chart->fiber_dim();
  BigradedElement r(chart, 1, 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Multivector gi = g.field(i), gj = g.field(j);
      Multivector w = coefficient_derivative(gj, i) - coefficient_derivative(gi, j) + schouten_partial(gi, gj, n, m);
      r.add({static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j)}, w);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

GeometricTriple::GeometricTriple(const ChartPtr& chart)
    : vertical(chart, 2, 0), connection(chart), horizontal(chart, 0, 2) {}

GeometricTriple::GeometricTriple(BigradedElement v, ConnectionData g, BigradedElement h)
    : vertical(std::move(v)), connection(std::move(g)), horizontal(std::move(h)) {
  require_same_chart(vertical.chart(), connection.chart());
  require_same_chart(horizontal.chart(), connection.chart());
  if (!vertical.is_zero() && (vertical.q() != 2 || vertical.p() != 0)) throw DomainError("vertical part must be (2,0)");
  if (!horizontal.is_zero() && (horizontal.q() != 0 || horizontal.p() != 2)) {
    throw DomainError("horizontal part must be (0,2)");
  }
  if (vertical.is_zero()) vertical = BigradedElement(connection.chart(), 2, 0);
  if (horizontal.is_zero()) horizontal = BigradedElement(connection.chart(), 0, 2);
}

bool GeometricTriple::operator==(const GeometricTriple& o) const {
  return vertical == o.vertical && connection == o.connection && horizontal == o.horizontal;
}

// ---------------------------------------------------------------------------

std::optional<RFMatrix> invert(const RFMatrix& m) {
  const std::size_t k = m.size();
  if (k == 0) return RFMatrix{};
  const std::size_t nv = m[0][0].nvars();
  // Clear denominators row by row: P = diag(L) m.
  std::vector<RationalFunction> scale(k);
  std::vector<std::vector<Poly>> a(k, std::vector<Poly>(2 * k, Poly(nv)));
  for (std::size_t r = 0; r < k; ++r) {
    if (m[r].size() != k) throw DomainError("matrix is not square");
    Poly l(nv, Rational(1));
    for (const auto& e : m[r]) {
      if (!e.is_polynomial() && !Poly::divide_exact(l, e.denominator())) l = l * e.denominator();
    }
    scale[r] = RationalFunction(l);
    for (std::size_t c = 0; c < k; ++c) {
      RationalFunction v = m[r][c] * scale[r];
      if (!v.is_polynomial()) throw ArithmeticError("failed to clear denominators");
      a[r][c] = v.numerator() * (Rational(1) / v.denominator().constant_term());
    }
    a[r][k + r] = Poly(nv, Rational(1));
  }
  Poly prev(nv, Rational(1));
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    while (piv < k && a[piv][c].is_zero()) ++piv;
    if (piv == k) return std::nullopt;
    std::swap(a[piv], a[c]);
    for (std::size_t r = c + 1; r < k; ++r) {
      for (std::size_t j = c + 1; j < 2 * k; ++j) {
        Poly num = a[c][c] * a[r][j] - a[r][c] * a[c][j];
        auto q = Poly::divide_exact(num, prev);
        if (!q) throw ArithmeticError("fraction-free elimination lost exactness");
        a[r][j] = std::move(*q);
      }
      a[r][c] = Poly(nv);
    }
    prev = a[c][c];
  }
  RFMatrix inv(k, std::vector<RationalFunction>(k, RationalFunction(nv)));
  for (std::size_t b = 0; b < k; ++b) {
    for (std::size_t ii = k; ii-- > 0;) {
      RationalFunction acc(a[ii][k + b]);
      for (std::size_t j = ii + 1; j < k; ++j) {
        if (!a[ii][j].is_zero()) acc -= RationalFunction(a[ii][j]) * inv[j][b];
      }
      inv[ii][b] = acc / RationalFunction(a[ii][ii]);
    }
  }
  // m^{-1} = P^{-1} diag(L).
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) inv[r][c] *= scale[c];
  }
  return inv;
}

namespace {

bool rational_matrix_invertible(std::vector<std::vector<Rational>> a) {
  const std::size_t k = a.size();
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    while (piv < k && a[piv][c] == 0) ++piv;
    if (piv == k) return false;
    std::swap(a[piv], a[c]);
    for (std::size_t r = c + 1; r < k; ++r) {
      if (a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t j = c; j < k; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return true;
}

void check_samples(const RFMatrix& block, const std::vector<const RationalFunction*>& produced,
                   const SamplePoints& samples, const char* what) {
  for (const auto& pt : samples) {
    std::vector<std::vector<Rational>> num(block.size(), std::vector<Rational>(block.size()));
    try {
      for (std::size_t i = 0; i < block.size(); ++i) {
        for (std::size_t j = 0; j < block.size(); ++j) num[i][j] = block[i][j].evaluate(pt);
      }
      for (const auto* f : produced) (void)f->evaluate(pt);
    } catch (const ArithmeticError&) {
      throw DomainError(std::string(what) + ": singular at a sample point");
    }
    if (!rational_matrix_invertible(num)) throw DomainError(std::string(what) + ": degenerate at a sample point");
  }
}

RFMatrix horizontal_block(const Multivector& theta) {
  const auto& chart = theta.chart();
  const std::size_t n = chart->base_dim(), nv = chart->num_vars();
  RFMatrix c(n, std::vector<RationalFunction>(n, RationalFunction(nv)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      c[i][j] = theta.coefficient({static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j)});
      c[j][i] = -c[i][j];
    }
  }
  return c;
}

RFMatrix form_block(const BigradedElement& h) {
  const auto& chart = h.chart();
  const std::size_t n = chart->base_dim(), nv = chart->num_vars();
  RFMatrix f(n, std::vector<RationalFunction>(n, RationalFunction(nv)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      f[i][j] = h.coefficient({static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j)}, {});
      f[j][i] = -f[i][j];
    }
  }
  return f;
}

}  // namespace

GeometricTriple triple_from_bivector(const Multivector& theta, const SamplePoints& samples) {
  if (theta.degree() != 2) throw DomainError("triple_from_bivector expects a bivector");
  const auto& chart = theta.chart();
  const std::size_t n = chart->base_dim(), m = chart->fiber_dim(), nv = chart->num_vars();
  const RFMatrix c = horizontal_block(theta);
  auto cinv = invert(c);
  if (!cinv) throw DomainError("not horizontally non-degenerate: horizontal block is singular");

  auto u8 = [](std::size_t v) { return static_cast<std::uint8_t>(v); };
  ConnectionData g(chart);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t a = 0; a < m; ++a) {
      RationalFunction acc(nv);
      for (std::size_t i = 0; i < n; ++i) {
        RationalFunction mia = theta.coefficient({u8(i), u8(n + a)});
        if (!mia.is_zero()) acc += (*cinv)[k][i] * mia;
      }
      g.set(k, a, acc);
    }
  }
  BigradedElement vert(chart, 2, 0);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      RationalFunction v = theta.coefficient({u8(n + a), u8(n + b)});
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (c[i][j].is_zero()) continue;
          v -= c[i][j] * g.coefficient(i, a) * g.coefficient(j, b);
        }
      }
      vert.add_term({}, {u8(a), u8(b)}, v);
    }
  }
  BigradedElement hor(chart, 0, 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) hor.add_term({u8(i), u8(j)}, {}, Rational(kHorizontalSign) * (*cinv)[i][j]);
  }
  GeometricTriple t(std::move(vert), std::move(g), std::move(hor));
  if (!samples.empty()) {
    std::vector<const RationalFunction*> produced;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t a = 0; a < m; ++a) produced.push_back(&t.connection.coefficient(k, a));
    }
    for (const auto& row : *cinv) {
      for (const auto& e : row) produced.push_back(&e);
    }
    check_samples(c, produced, samples, "not horizontally non-degenerate");
  }
  return t;
}

Multivector bivector_from_triple(const GeometricTriple& t, const SamplePoints& samples) {
  const auto& chart = t.chart();
  const std::size_t n = chart->base_dim(), m = chart->fiber_dim(), nv = chart->num_vars();
  const RFMatrix f = form_block(t.horizontal);
  auto finv = invert(f);
  if (!finv) throw DomainError("degenerate horizontal 2-form");
  if (!samples.empty()) {
    std::vector<const RationalFunction*> produced;
    for (const auto& row : *finv) {
      for (const auto& e : row) produced.push_back(&e);
    }
    check_samples(f, produced, samples, "degenerate horizontal 2-form");
  }
  RFMatrix c = *finv;
  for (auto& row : c) {
    for (auto& e : row) e *= Rational(kHorizontalSign);
  }
  auto u8 = [](std::size_t v) { return static_cast<std::uint8_t>(v); };
  Multivector theta(chart, 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) theta.add_term({u8(i), u8(j)}, c[i][j]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < m; ++a) {
      RationalFunction acc(nv);
      for (std::size_t j = 0; j < n; ++j) {
        if (!c[i][j].is_zero()) acc += c[i][j] * t.connection.coefficient(j, a);
      }
      theta.add_term({u8(i), u8(n + a)}, acc);
    }
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      RationalFunction v = t.vertical.coefficient({}, {u8(a), u8(b)});
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (c[i][j].is_zero()) continue;
          v += c[i][j] * t.connection.coefficient(i, a) * t.connection.coefficient(j, b);
        }
      }
      theta.add_term({u8(n + a), u8(n + b)}, v);
    }
  }
  return theta;
}

StructureResiduals verify_structure_equations(const GeometricTriple& t) {
  const auto& chart = t.chart();
  BigradedElement r1 = omega_bracket(t.vertical, t.vertical) * RationalFunction(chart->num_vars(), Rational(1, 2));
  BigradedElement r2 = d_gamma(t.connection, t.vertical);
  BigradedElement r3 = d_gamma(t.connection, t.horizontal);
  BigradedElement r4 = curvature(t.connection) + omega_bracket(t.horizontal, t.vertical);
  return {std::move(r1), std::move(r2), std::move(r3), std::move(r4)};
}

// ---------------------------------------------------------------------------

void GradedSum::add(const BigradedElement& e) {
  require_same_chart(chart_, e.chart());
  if (e.is_zero()) return;
  const auto key = std::make_pair(e.q(), e.p());
  auto it = parts_.find(key);
  if (it == parts_.end()) {
    parts_.emplace(key, e);
    return;
  }
  it->second += e;
  if (it->second.is_zero()) parts_.erase(it);
}

BigradedElement GradedSum::part(int q, int p) const {
  auto it = parts_.find({q, p});
  return it == parts_.end() ? BigradedElement(chart_, q, p) : it->second;
}

GradedSum& GradedSum::operator+=(const GradedSum& o) {
  for (const auto& [k, e] : o.parts_) add(e);
  return *this;
}

GradedSum& GradedSum::operator-=(const GradedSum& o) {
  for (const auto& [k, e] : o.parts_) add(-e);
  return *this;
}

bool GradedSum::operator==(const GradedSum& o) const { return (*this - o).is_zero(); }

GradedSum TotalDifferential::sum() const {
  GradedSum s(d01.chart());
  s.add(d10);
  s.add(d01);
  s.add(dm12);
  return s;
}

TotalDifferential total_differential(const GeometricTriple& t, const BigradedElement& u) {
  return {omega_bracket(t.vertical, u), d_gamma(t.connection, u), omega_bracket(t.horizontal, u)};
}

GradedSum total_differential(const GeometricTriple& t, const GradedSum& u) {
  GradedSum out(t.chart());
  for (const auto& [k, e] : u.parts()) out += total_differential(t, e).sum();
  return out;
}

}  // namespace leafstab
