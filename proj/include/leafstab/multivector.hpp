#pragma once

// Multivector fields and differential forms on a chart, the Schouten bracket
// and the Poisson calculus built on it.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "leafstab/poly.hpp"

namespace leafstab {

/// Strictly increasing list of chart variable indices.
using MultiIndex = std::vector<std::uint8_t>;

namespace detail {

/// Concatenate a and b into sorted order. Returns the sign of the sorting
/// permutation, or 0 when the two lists share an index.
int merge_sign(const MultiIndex& a, const MultiIndex& b, MultiIndex& out);

/// Sort an arbitrary index list; 0 on repeated indices, else permutation sign.
int sort_sign(MultiIndex& idx);

struct VectorTag {};
struct FormTag {};

}  // namespace detail

/// Sum of coefficient * (wedge of basis elements); basis elements are the
/// coordinate vector fields for Multivector and coordinate differentials for
/// Form. The zero element keeps whatever degree it was declared with.
template <class Tag>
class Alternating {
 public:
  using Terms = std::map<MultiIndex, RationalFunction>;

  Alternating(ChartPtr chart, int degree) : chart_(std::move(chart)), degree_(degree) {
    if (!chart_) throw ChartError("null chart");
    if (degree_ < 0) throw DomainError("negative degree");
  }

  static Alternating scalar(ChartPtr chart, const RationalFunction& f) {
    Alternating a(std::move(chart), 0);
    a.add_term({}, f);
    return a;
  }

  /// The single basis element with index `var` (∂_var or d var).
  static Alternating basis(ChartPtr chart, std::size_t var) {
    const std::size_t nv = chart->num_vars();
    Alternating a(std::move(chart), 1);
    a.add_term({static_cast<std::uint8_t>(var)}, RationalFunction(nv, Rational(1)));
    return a;
  }

  const ChartPtr& chart() const { return chart_; }
  std::size_t nvars() const { return chart_->num_vars(); }
  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  RationalFunction coefficient(const MultiIndex& idx) const {
    auto it = terms_.find(idx);
    return it == terms_.end() ? RationalFunction(nvars()) : it->second;
  }

  /// Adds c times the basis wedge in the given (possibly unsorted) order.
  void add_term(MultiIndex idx, const RationalFunction& c) {
    if (static_cast<int>(idx.size()) != degree_) throw DomainError("index length does not match degree");
    for (auto v : idx) {
      if (v >= nvars()) throw ChartError("index outside chart");
      if (chart_->is_param(v)) throw ChartError("parameter '" + chart_->name(v) + "' is not a direction");
    }
    int sign = detail::sort_sign(idx);
    if (sign == 0 || c.is_zero()) return;
    auto it = terms_.find(idx);
    if (it == terms_.end()) {
      terms_.emplace(std::move(idx), sign > 0 ? c : -c);
    } else {
      if (sign > 0) it->second += c; else it->second -= c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Alternating operator-() const {
    Alternating r = *this;
    for (auto& [k, c] : r.terms_) c = -c;
    return r;
  }
  Alternating& operator+=(const Alternating& o) {
    check_compatible(o);
    for (const auto& [k, c] : o.terms_) add_sorted(k, c);
    return *this;
  }
  Alternating& operator-=(const Alternating& o) {
    check_compatible(o);
    for (const auto& [k, c] : o.terms_) add_sorted(k, -c);
    return *this;
  }
  Alternating& operator*=(const RationalFunction& f) {
    if (f.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c *= f;
    return *this;
  }
  friend Alternating operator+(Alternating a, const Alternating& b) { return a += b; }
  friend Alternating operator-(Alternating a, const Alternating& b) { return a -= b; }
  friend Alternating operator*(Alternating a, const RationalFunction& f) { return a *= f; }
  friend Alternating operator*(const RationalFunction& f, Alternating a) { return a *= f; }

  bool operator==(const Alternating& o) const {
    if (!(*chart_ == *o.chart_)) return false;
    if (is_zero() && o.is_zero()) return true;
    return degree_ == o.degree_ && terms_ == o.terms_;
  }

  /// Apply fn to every coefficient; zero results are dropped.
  template <class Fn>
  Alternating map_coefficients(Fn&& fn) const {
    Alternating r(chart_, degree_);
    for (const auto& [k, c] : terms_) r.add_sorted(k, fn(c));
    return r;
  }

  std::string to_string() const;

 private:
  void check_compatible(const Alternating& o) {
    require_same_chart(chart_, o.chart_);
    if (degree_ != o.degree_ && !is_zero() && !o.is_zero()) throw DomainError("adding elements of different degree");
    if (is_zero() && degree_ != o.degree_) degree_ = o.degree_;
  }
  void add_sorted(const MultiIndex& k, const RationalFunction& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  ChartPtr chart_;
  int degree_;
  Terms terms_;
};

using Multivector = Alternating<detail::VectorTag>;
using Form = Alternating<detail::FormTag>;

extern template class Alternating<detail::VectorTag>;
extern template class Alternating<detail::FormTag>;

Multivector wedge(const Multivector& a, const Multivector& b);
Form wedge(const Form& a, const Form& b);

/// Schouten bracket, [X,Y] = -(-1)^{(p-1)(q-1)} [Y,X], Lie bracket on vector
/// fields, derivation in the second argument.
Multivector schouten(const Multivector& x, const Multivector& y);

/// Schouten bracket using only the derivatives in variables [first, first+count).
/// With count = fiber_dim and first = base_dim this is the fiberwise bracket.
Multivector schouten_partial(const Multivector& x, const Multivector& y, std::size_t first, std::size_t count);

bool is_poisson(const Multivector& pi);

/// π^#(α) = π(α, ·).
Multivector pi_sharp(const Multivector& pi, const Form& alpha);
Multivector hamiltonian_vf(const Multivector& pi, const RationalFunction& f);

/// d_π X = [π, X]; throws DomainError when π is not Poisson.
Multivector poisson_differential(const Multivector& pi, const Multivector& x);

Form differential(const ChartPtr& chart, const RationalFunction& f);
Form exterior_derivative(const Form& w);

/// X(α_1, ..., α_k) for a degree-k multivector and k one-forms, with
/// (X_1∧...∧X_k)(α_1..α_k) = det[α_a(X_b)].
RationalFunction evaluate(const Multivector& x, const std::vector<Form>& alphas);

/// Partial derivative of every coefficient with respect to chart variable var.
template <class Tag>
Alternating<Tag> coefficient_derivative(const Alternating<Tag>& a, std::size_t var) {
  return a.map_coefficients([var](const RationalFunction& c) { return c.derivative(var); });
}

}  // namespace leafstab
