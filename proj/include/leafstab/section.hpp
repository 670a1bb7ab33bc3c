#pragma once

// Restriction and linearization along sections of the trivial bundle, the leaf
// obstruction, rescaling, first jets, flat sections and cocycle deformations.

#include <vector>

#include "leafstab/bigraded.hpp"

namespace leafstab {

/// s(x) = (s^1(x), ..., s^m(x)), polynomial in the base variables (and
/// parameters).
class Section {
 public:
  Section(ChartPtr chart, std::vector<Poly> components);
  static Section zero(const ChartPtr& chart);

  const ChartPtr& chart() const { return chart_; }
  const std::vector<Poly>& components() const { return components_; }
  /// Σ_a s^a ∂y_a as an element of bidegree (1,0).
  BigradedElement as_element() const;
  bool operator==(const Section& o) const = default;

 private:
  ChartPtr chart_;
  std::vector<Poly> components_;
};

/// c(θ,s) = (θv|_s, Γ|_s).
struct ObstructionPair {
  BigradedElement vertical_part;    // (2,0)
  BigradedElement connection_part;  // (1,1)
  bool is_zero() const { return vertical_part.is_zero() && connection_part.is_zero(); }
};

/// u|_s: coefficients u(x, s(x)).
BigradedElement restrict(const BigradedElement& u, const Section& s);
/// Γ|_s = Σ (Γ_i^a(x, s(x)) - ∂_i s^a) dx^i ⊗ ∂y_a.
BigradedElement restrict_connection(const ConnectionData& g, const Section& s);
ObstructionPair leaf_obstruction(const GeometricTriple& t, const Section& s);
/// θ|_s = θv|_s + Γ|_s + 𝔽|_s.
GradedSum restrict_triple(const GeometricTriple& t, const Section& s);

/// Coefficients of t^k, k = 0..deg_y(u), in u(x, s(x) + t y). Coefficients
/// must be polynomial in y.
std::vector<BigradedElement> shifted_expansion(const BigradedElement& u, const Section& s);

/// φ_t^s(u) = (1/t) u(x, t y + s(x)).
BigradedElement rescale(const BigradedElement& u, const Rational& t, const Section& s);
/// φ_t^s(Γ) = (1/t) (Γ(x, t y + s(x)) - ∂s).
ConnectionData rescale_connection(const ConnectionData& g, const Rational& t, const Section& s);

/// lin_s u = Σ_b ∂_{y_b}u(x, s(x)) y_b.
BigradedElement linearize(const BigradedElement& u, const Section& s);
ConnectionData linearize_connection(const ConnectionData& g, const Section& s);
/// (lin_s θv, lin_s Γ, lin_s 𝔽).
GeometricTriple linearize_triple(const GeometricTriple& t, const Section& s);

struct LinearizedDifferential {
  BigradedElement d10;   // [lin θv, w]
  BigradedElement d01;   // d_{lin Γ} w
  BigradedElement dm12;  // [lin 𝔽, w]
  GradedSum sum() const;
  /// Drops every output component of bidegree (0, ·).
  GradedSum reduced() const;
};

/// d_{θ,s} on y-independent w.
LinearizedDifferential linearized_differential(const GeometricTriple& t, const Section& s, const BigradedElement& w);
GradedSum linearized_differential(const GeometricTriple& t, const Section& s, const GradedSum& w, bool reduced = false);

/// (lin θv, lin Γ, 𝔽|_0 + lin 𝔽) along the zero section; requires the zero
/// section to be a leaf.
GeometricTriple first_jet(const GeometricTriple& t);

/// Basis of polynomial sections of degree <= bound annihilated by the reduced
/// linearized differential of the jet at the zero section.
std::vector<Section> flat_kernel_sections(const GeometricTriple& jet, unsigned degree_bound);

/// θv linear, Γ linear, 𝔽 of degree <= 1 in y.
bool is_first_order(const GeometricTriple& t);

/// (θv + t c20, Γ + t c11, 𝔽 + t c02) for y-independent c.
GeometricTriple deform_by_cocycle(const GeometricTriple& t, const GradedSum& c, const Rational& param);

/// d_{π,0} c = 0 with π the first-order triple itself.
bool is_cocycle(const GeometricTriple& t, const GradedSum& c);

/// Structure-equation residuals assembled into one graded sum.
GradedSum residual_sum(const StructureResiduals& r);

}  // namespace leafstab
