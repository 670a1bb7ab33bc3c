#include "leafstab/poly.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace leafstab {

Chart::Chart(std::vector<std::string> base_vars, std::vector<std::string> fiber_vars, std::vector<std::string> params)
    : base_(std::move(base_vars)), fiber_(std::move(fiber_vars)), params_(std::move(params)) {
  if (base_.empty()) throw DomainError("chart needs at least one base variable");
  std::set<std::string> seen;
  for (const auto* list : {&base_, &fiber_, &params_}) {
    for (const auto& n : *list) {
      if (n.empty()) throw DomainError("empty variable name");
      if (!seen.insert(n).second) throw DomainError("duplicate variable name '" + n + "'");
    }
  }
}

const std::string& Chart::name(std::size_t var) const {
  if (var < base_.size()) return base_[var];
  if (var < base_.size() + fiber_.size()) return fiber_[var - base_.size()];
  if (var < num_vars()) return params_[var - base_.size() - fiber_.size()];
  throw ChartError("variable index out of range");
}

std::optional<std::size_t> Chart::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < num_vars(); ++i) {
    if (this->name(i) == name) return i;
  }
  return std::nullopt;
}

std::size_t Chart::require_index(const std::string& name) const {
  auto idx = index_of(name);
  if (!idx) throw ChartError("unknown variable '" + name + "'");
  return *idx;
}

void require_same_chart(const ChartPtr& a, const ChartPtr& b) {
  if (a == b) return;
  if (!a || !b || !(*a == *b)) throw ChartError("operands live on different charts");
}

// ---------------------------------------------------------------------------
// Poly

Poly::Poly(std::size_t nvars, const Rational& c) : nvars_(nvars) {
  if (c != 0) terms_.emplace(Exponent(nvars, 0), c).first->second.canonicalize();
}

Poly Poly::variable(std::size_t nvars, std::size_t var) {
  Exponent e(nvars, 0);
  e.at(var) = 1;
  return monomial(nvars, std::move(e), Rational(1));
}

Poly Poly::monomial(std::size_t nvars, Exponent e, const Rational& c) {
  Poly p(nvars);
  p.add_term(e, c);
  return p;
}

bool Poly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](auto k) { return k == 0; });
}

Rational Poly::constant_term() const {
  auto it = terms_.find(Exponent(nvars_, 0));
  return it == terms_.end() ? Rational(0) : it->second;
}

std::size_t Poly::total_degree() const {
  std::size_t d = 0;
  for (const auto& [e, c] : terms_) {
    std::size_t s = 0;
    for (auto k : e) s += k;
    d = std::max(d, s);
  }
  return d;
}

std::size_t Poly::degree_in(std::size_t first, std::size_t count) const {
  std::size_t d = 0;
  for (const auto& [e, c] : terms_) {
    std::size_t s = 0;
    for (std::size_t v = first; v < first + count; ++v) s += e[v];
    d = std::max(d, s);
  }
  return d;
}

bool Poly::depends_on(std::size_t var) const {
  return std::any_of(terms_.begin(), terms_.end(), [var](const auto& t) { return t.first[var] != 0; });
}

void Poly::add_term(const Exponent& e, const Rational& c) {
  if (c == 0) return;
  if (e.size() != nvars_) throw ChartError("exponent length does not match variable count");
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (inserted) {
    it->second.canonicalize();
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.nvars_ != nvars_) throw ChartError("polynomials over different variable counts");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.nvars_ != nvars_) throw ChartError("polynomials over different variable counts");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Poly& Poly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.nvars_ != b.nvars_) throw ChartError("polynomials over different variable counts");
  Poly r(a.nvars_);
  Exponent e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t v = 0; v < e.size(); ++v) e[v] = static_cast<std::uint16_t>(ea[v] + eb[v]);
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Poly Poly::pow(unsigned k) const {
  Poly r(nvars_, Rational(1));
  Poly base = *this;
  while (k) {
    if (k & 1u) r = r * base;
    k >>= 1u;
    if (k) base = base * base;
  }
  return r;
}

Poly Poly::derivative(std::size_t var) const {
  if (var >= nvars_) throw ChartError("derivative variable out of range");
  Poly r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponent d = e;
    d[var] -= 1;
    r.add_term(d, c * e[var]);
  }
  return r;
}

std::optional<Poly> Poly::divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw ArithmeticError("division by the zero polynomial");
  if (a.nvars_ != b.nvars_) throw ChartError("polynomials over different variable counts");
  Poly q(a.nvars_);
  if (b.is_constant()) {
    q = a;
    q *= Rational(1) / b.constant_term();
    return q;
  }
  Poly r = a;
  const auto& [lb, lc] = b.leading();
  Exponent e(a.nvars_);
  while (!r.is_zero()) {
    const auto& [lr, rc] = r.leading();
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (lr[v] < lb[v]) return std::nullopt;
      e[v] = static_cast<std::uint16_t>(lr[v] - lb[v]);
    }
    Poly t = monomial(a.nvars_, e, rc / lc);
    q += t;
    r -= t * b;
  }
  return q;
}

Poly Poly::substitute(std::size_t var, const Poly& p) const {
  std::vector<std::optional<Poly>> repl(nvars_);
  repl.at(var) = p;
  return substitute(repl);
}

Poly Poly::substitute(std::span<const std::optional<Poly>> replacements) const {
  if (replacements.size() != nvars_) throw ChartError("substitution list has wrong length");
  // Cache powers of replacement polynomials.
  std::vector<std::vector<Poly>> powers(nvars_);
  auto power_of = [&](std::size_t v, unsigned k) -> const Poly& {
    auto& cache = powers[v];
    if (cache.empty()) cache.emplace_back(nvars_, Rational(1));
    while (cache.size() <= k) cache.push_back(cache.back() * *replacements[v]);
    return cache[k];
  };
  Poly out(nvars_);
  for (const auto& [e, c] : terms_) {
    Exponent kept = e;
    Poly term(nvars_);
    bool any = false;
    for (std::size_t v = 0; v < nvars_; ++v) {
      if (replacements[v] && e[v] != 0) {
        kept[v] = 0;
        any = true;
      }
    }
    term.add_term(kept, c);
    if (any) {
      for (std::size_t v = 0; v < nvars_; ++v) {
        if (replacements[v] && e[v] != 0) term = term * power_of(v, e[v]);
      }
    }
    out += term;
  }
  return out;
}

Rational Poly::evaluate(std::span<const Rational> point) const {
  if (point.size() != nvars_) throw ChartError("evaluation point has wrong dimension");
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (std::size_t v = 0; v < nvars_; ++v) {
      for (unsigned k = 0; k < e[v]; ++k) t *= point[v];
    }
    sum += t;
  }
  return sum;
}

double Poly::evaluate(std::span<const double> point) const {
  if (point.size() != nvars_) throw ChartError("evaluation point has wrong dimension");
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c.get_d();
    for (std::size_t v = 0; v < nvars_; ++v) {
      if (e[v]) t *= std::pow(point[v], static_cast<int>(e[v]));
    }
    sum += t;
  }
  return sum;
}

namespace {

std::string monomial_string(const Exponent& e, const Chart& chart) {
  std::string s;
  for (std::size_t v = 0; v < e.size(); ++v) {
    if (!e[v]) continue;
    if (!s.empty()) s += "*";
    s += chart.name(v);
    if (e[v] > 1) s += "^" + std::to_string(e[v]);
  }
  return s;
}

}  // namespace

std::string Poly::to_string(const Chart& chart) const {
  if (chart.num_vars() != nvars_) throw ChartError("chart does not match polynomial");
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    const bool neg = c < 0;
    Rational mag = abs(c);
    if (first) {
      if (neg) out << "-";
    } else {
      out << (neg ? " - " : " + ");
    }
    first = false;
    const std::string mono = monomial_string(e, chart);
    if (mono.empty()) {
      out << mag.get_str();
    } else if (mag == 1) {
      out << mono;
    } else {
      out << mag.get_str() << "*" << mono;
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// RationalFunction

RationalFunction::RationalFunction(Poly p) : num_(std::move(p)), den_(num_.nvars(), Rational(1)) {}

RationalFunction::RationalFunction(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw ArithmeticError("rational function with zero denominator");
  if (num_.nvars() != den_.nvars()) throw ChartError("numerator and denominator on different charts");
  normalize();
}

void RationalFunction::normalize() {
  if (num_.is_zero()) {
    den_ = Poly(num_.nvars(), Rational(1));
    return;
  }
  if (den_.is_constant()) {
    num_ *= Rational(1) / den_.constant_term();
    den_ = Poly(num_.nvars(), Rational(1));
    return;
  }
  if (auto q = Poly::divide_exact(num_, den_)) {
    num_ = std::move(*q);
    den_ = Poly(num_.nvars(), Rational(1));
    return;
  }
  // Monic denominator in lex order.
  Rational lc = den_.leading().second;
  if (lc != 1) {
    Rational inv = Rational(1) / lc;
    num_ *= inv;
    den_ *= inv;
  }
}

Rational RationalFunction::constant_value() const {
  if (!is_constant()) throw DomainError("rational function is not constant");
  return num_.constant_term() / den_.constant_term();
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
  } else if (auto k = Poly::divide_exact(den_, o.den_)) {
    num_ += o.num_ * *k;
  } else if (auto k2 = Poly::divide_exact(o.den_, den_)) {
    num_ = num_ * *k2 + o.num_;
    den_ = o.den_;
  } else {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
  }
  normalize();
  return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) { return *this += -o; }

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
  if (is_zero() || o.is_zero()) {
    num_ = Poly(nvars() ? nvars() : o.nvars());
    den_ = Poly(num_.nvars(), Rational(1));
    return *this;
  }
  if (is_polynomial() && o.is_polynomial()) {
    num_ = num_ * o.num_;
    return *this;
  }
  Poly a = num_, b = den_, c = o.num_, d = o.den_;
  if (!b.is_constant()) {
    if (auto q = Poly::divide_exact(c, b)) {
      c = std::move(*q);
      b = Poly(b.nvars(), Rational(1));
    }
  }
  if (!d.is_constant()) {
    if (auto q = Poly::divide_exact(a, d)) {
      a = std::move(*q);
      d = Poly(d.nvars(), Rational(1));
    }
  }
  num_ = a * c;
  den_ = b * d;
  normalize();
  return *this;
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) {
  if (o.is_zero()) throw ArithmeticError("division by zero");
  RationalFunction inv;
  inv.num_ = o.den_;
  inv.den_ = o.num_;
  inv.normalize();
  return *this *= inv;
}

RationalFunction& RationalFunction::operator*=(const Rational& c) {
  num_ *= c;
  if (num_.is_zero()) den_ = Poly(num_.nvars(), Rational(1));
  return *this;
}

bool RationalFunction::operator==(const RationalFunction& o) const {
  if (is_polynomial() && o.is_polynomial()) return num_ == o.num_;
  return num_ * o.den_ == o.num_ * den_;
}

RationalFunction RationalFunction::pow(unsigned k) const {
  RationalFunction r;
  r.num_ = num_.pow(k);
  r.den_ = den_.pow(k);
  r.normalize();
  return r;
}

RationalFunction RationalFunction::derivative(std::size_t var) const {
  if (is_polynomial()) return RationalFunction(num_.derivative(var));
  Poly dn = num_.derivative(var);
  Poly dd = den_.derivative(var);
  if (dd.is_zero()) return RationalFunction(dn, den_);
  return RationalFunction(dn * den_ - num_ * dd, den_ * den_);
}

RationalFunction RationalFunction::substitute(std::span<const std::optional<Poly>> replacements) const {
  if (is_polynomial()) return RationalFunction(num_.substitute(replacements));
  return RationalFunction(num_.substitute(replacements), den_.substitute(replacements));
}

Rational RationalFunction::evaluate(std::span<const Rational> point) const {
  Rational d = den_.evaluate(point);
  if (d == 0) throw ArithmeticError("denominator vanishes at evaluation point");
  return num_.evaluate(point) / d;
}

double RationalFunction::evaluate(std::span<const double> point) const {
  if (is_polynomial()) return num_.evaluate(point);
  return num_.evaluate(point) / den_.evaluate(point);
}

std::string RationalFunction::to_string(const Chart& chart) const {
  if (is_polynomial()) return num_.to_string(chart);
  return "(" + num_.to_string(chart) + ")/(" + den_.to_string(chart) + ")";
}

// ---------------------------------------------------------------------------

RationalFunction poly_arith(const RationalFunction& a, const RationalFunction& b, ArithOp op) {
  switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
    case ArithOp::div: return a / b;
  }
  throw DomainError("unknown arithmetic operation");
}

RationalFunction partial(const RationalFunction& f, const Chart& chart, const std::string& var) {
  return f.derivative(chart.require_index(var));
}

RationalFunction substitute_fiber(const RationalFunction& f, const Chart& chart, std::span<const Poly> s) {
  if (s.size() != chart.fiber_dim()) throw DomainError("need one substitution polynomial per fiber variable");
  std::vector<std::optional<Poly>> repl(chart.num_vars());
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = 0; b < chart.fiber_dim(); ++b) {
      if (s[a].depends_on(chart.fiber_index(b))) {
        throw DomainError("substitution polynomial mentions fiber variable '" + chart.fiber_vars()[b] + "'");
      }
    }
    repl[chart.fiber_index(a)] = s[a];
  }
  return f.substitute(repl);
}

}  // namespace leafstab
