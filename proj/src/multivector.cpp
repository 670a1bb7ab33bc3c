#include "leafstab/multivector.hpp"

#include <algorithm>
#include <numeric>

namespace leafstab {

namespace detail {

int merge_sign(const MultiIndex& a, const MultiIndex& b, MultiIndex& out) {
  out.clear();
  out.reserve(a.size() + b.size());
  // Each element of b that jumps over k remaining elements of a contributes (-1)^k.
  int sign = 1;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return 0;
    if (a[i] < b[j]) {
      out.push_back(a[i++]);
    } else {
      if ((a.size() - i) % 2 == 1) sign = -sign;
      out.push_back(b[j++]);
    }
  }
  while (i < a.size()) out.push_back(a[i++]);
  while (j < b.size()) out.push_back(b[j++]);
  return sign;
}

int sort_sign(MultiIndex& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  }
  return sign;
}

}  // namespace detail

template <class Tag>
std::string Alternating<Tag>::to_string() const {
  if (terms_.empty()) return "0";
  const char* prefix = std::is_same_v<Tag, detail::FormTag> ? "d" : "@";
  std::string out;
  for (const auto& [k, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + c.to_string(*chart_) + ")";
    for (std::size_t l = 0; l < k.size(); ++l) {
      out += l == 0 ? " " : "^";
      out += prefix + chart_->name(k[l]);
    }
  }
  return out;
}

template class Alternating<detail::VectorTag>;
template class Alternating<detail::FormTag>;

namespace {

template <class Tag>
Alternating<Tag> wedge_impl(const Alternating<Tag>& a, const Alternating<Tag>& b) {
  require_same_chart(a.chart(), b.chart());
  Alternating<Tag> r(a.chart(), a.degree() + b.degree());
  MultiIndex merged;
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      int s = detail::merge_sign(ka, kb, merged);
      if (s == 0) continue;
      RationalFunction c = ca * cb;
      if (s < 0) c = -c;
      r.add_term(merged, c);
    }
  }
  return r;
}

// Σ_v (P ←∂ξ_v) ∧ (∂_v Q) over v in [first, first+count).
void half_bracket(const Multivector& p, const Multivector& q, std::size_t first, std::size_t count, int sign,
                  Multivector& out) {
  std::vector<std::optional<Multivector>> dq(count);
  MultiIndex rest, merged;
  for (const auto& [kp, cp] : p.terms()) {
    for (std::size_t l = 0; l < kp.size(); ++l) {
      const std::size_t v = kp[l];
      if (v < first || v >= first + count) continue;
      auto& d = dq[v - first];
      if (!d) d = coefficient_derivative(q, v);
      if (d->is_zero()) continue;
      rest = kp;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(l));
      const int s_right = ((kp.size() - 1 - l) % 2 == 0) ? 1 : -1;
      for (const auto& [kq, cq] : d->terms()) {
        int s = detail::merge_sign(rest, kq, merged);
        if (s == 0) continue;
        RationalFunction c = cp * cq;
        if (s * s_right * sign < 0) c = -c;
        out.add_term(merged, c);
      }
    }
  }
}

}  // namespace

Multivector wedge(const Multivector& a, const Multivector& b) { return wedge_impl(a, b); }
Form wedge(const Form& a, const Form& b) { return wedge_impl(a, b); }

Multivector schouten_partial(const Multivector& x, const Multivector& y, std::size_t first, std::size_t count) {
  require_same_chart(x.chart(), y.chart());
  const int p = x.degree();
  const int q = y.degree();
  if (p + q == 0) return Multivector(x.chart(), 0);
  Multivector r(x.chart(), p + q - 1);
  const int sym = ((p - 1) * (q - 1)) % 2 == 0 ? 1 : -1;
  half_bracket(x, y, first, count, 1, r);
  half_bracket(y, x, first, count, -sym, r);
  return r;
}

Multivector schouten(const Multivector& x, const Multivector& y) {
  const auto& c = *x.chart();
  return schouten_partial(x, y, 0, c.base_dim() + c.fiber_dim());
}

bool is_poisson(const Multivector& pi) {
  if (pi.degree() != 2) throw DomainError("is_poisson expects a bivector");
  return schouten(pi, pi).is_zero();
}

Multivector pi_sharp(const Multivector& pi, const Form& alpha) {
  require_same_chart(pi.chart(), alpha.chart());
  if (pi.degree() != 2 || alpha.degree() != 1) throw DomainError("pi_sharp expects a bivector and a 1-form");
  Multivector r(pi.chart(), 1);
  for (const auto& [k, c] : pi.terms()) {
    const RationalFunction ai = alpha.coefficient({k[0]});
    const RationalFunction aj = alpha.coefficient({k[1]});
    if (!ai.is_zero()) r.add_term({k[1]}, c * ai);
    if (!aj.is_zero()) r.add_term({k[0]}, -(c * aj));
  }
  return r;
}

Multivector hamiltonian_vf(const Multivector& pi, const RationalFunction& f) {
  if (pi.degree() != 2) throw DomainError("hamiltonian_vf expects a bivector");
  return pi_sharp(pi, differential(pi.chart(), f));
}

Multivector poisson_differential(const Multivector& pi, const Multivector& x) {
  if (!is_poisson(pi)) throw DomainError("poisson_differential: bivector is not Poisson");
  return schouten(pi, x);
}

Form differential(const ChartPtr& chart, const RationalFunction& f) {
  Form r(chart, 1);
  for (std::size_t v = 0; v < chart->base_dim() + chart->fiber_dim(); ++v) {
    r.add_term({static_cast<std::uint8_t>(v)}, f.derivative(v));
  }
  return r;
}

Form exterior_derivative(const Form& w) {
  Form r(w.chart(), w.degree() + 1);
  MultiIndex merged;
  for (std::size_t v = 0; v < w.chart()->base_dim() + w.chart()->fiber_dim(); ++v) {
    const MultiIndex dv{static_cast<std::uint8_t>(v)};
    for (const auto& [k, c] : w.terms()) {
      RationalFunction dc = c.derivative(v);
      if (dc.is_zero()) continue;
      int s = detail::merge_sign(dv, k, merged);
      if (s == 0) continue;
      r.add_term(merged, s > 0 ? dc : -dc);
    }
  }
  return r;
}

RationalFunction evaluate(const Multivector& x, const std::vector<Form>& alphas) {
  if (static_cast<int>(alphas.size()) != x.degree()) throw DomainError("evaluate: need one 1-form per degree");
  for (const auto& a : alphas) {
    require_same_chart(x.chart(), a.chart());
    if (a.degree() != 1) throw DomainError("evaluate: arguments must be 1-forms");
  }
  const std::size_t k = alphas.size();
  RationalFunction total(x.nvars());
  std::vector<std::size_t> perm(k);
  for (const auto& [idx, c] : x.terms()) {
    // Leibniz expansion of det[α_a(∂_{idx[b]})].
    std::iota(perm.begin(), perm.end(), 0);
    RationalFunction det(x.nvars());
    do {
      RationalFunction prod(x.nvars(), Rational(1));
      for (std::size_t a = 0; a < k && !prod.is_zero(); ++a) prod *= alphas[a].coefficient({idx[perm[a]]});
      if (prod.is_zero()) continue;
      MultiIndex p(perm.begin(), perm.end());
      if (detail::sort_sign(p) > 0) det += prod; else det -= prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    total += c * det;
  }
  return total;
}

}  // namespace leafstab
