#pragma once

// Bigraded algebra of base forms with values in vertical multivectors on a
// trivialized bundle chart, connections, curvature and geometric triples.

#include <optional>
#include <string>
#include <vector>

#include "leafstab/multivector.hpp"

namespace leafstab {

/// Element of bidegree (q, p): sum over base multi-indices I (|I| = p) of
/// dx^I ⊗ P_I, where P_I is a vertical multivector of degree q (indices are
/// global fiber variable indices, coefficients may depend on x and y).
class BigradedElement {
 public:
  using Terms = std::map<MultiIndex, Multivector>;

  BigradedElement(ChartPtr chart, int q, int p);

  const ChartPtr& chart() const { return chart_; }
  int q() const { return q_; }
  int p() const { return p_; }
  /// Degree in the graded Lie algebra: p + q - 1.
  int total_degree() const { return p_ + q_ - 1; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Adds c dx^{base} ⊗ ∂y^{fiber}; `fiber` holds fiber positions 0..m-1.
  void add_term(MultiIndex base, MultiIndex fiber, const RationalFunction& c);
  /// Adds dx^{base} ⊗ v for a vertical multivector v of degree q.
  void add(MultiIndex base, const Multivector& v);

  /// Coefficient u_I^J with J given in fiber positions.
  RationalFunction coefficient(const MultiIndex& base, const MultiIndex& fiber) const;
  const Multivector* component(const MultiIndex& base) const;

  BigradedElement operator-() const;
  BigradedElement& operator+=(const BigradedElement& o);
  BigradedElement& operator-=(const BigradedElement& o);
  BigradedElement& operator*=(const RationalFunction& f);
  friend BigradedElement operator+(BigradedElement a, const BigradedElement& b) { return a += b; }
  friend BigradedElement operator-(BigradedElement a, const BigradedElement& b) { return a -= b; }
  friend BigradedElement operator*(BigradedElement a, const RationalFunction& f) { return a *= f; }
  friend BigradedElement operator*(const RationalFunction& f, BigradedElement a) { return a *= f; }
  bool operator==(const BigradedElement& o) const;

  template <class Fn>
  BigradedElement map_coefficients(Fn&& fn) const {
    BigradedElement r(chart_, q_, p_);
    for (const auto& [base, v] : terms_) r.add_sorted(base, v.map_coefficients(fn));
    return r;
  }

  /// Calls fn(base, fiber_positions, coefficient) for every stored term.
  template <class Fn>
  void for_each_term(Fn&& fn) const {
    const std::size_t n = chart_->base_dim();
    MultiIndex fiber;
    for (const auto& [base, v] : terms_) {
      for (const auto& [idx, c] : v.terms()) {
        fiber.assign(idx.begin(), idx.end());
        for (auto& a : fiber) a = static_cast<std::uint8_t>(a - n);
        fn(base, fiber, c);
      }
    }
  }

  bool is_y_independent() const;
  /// Every coefficient is a homogeneous linear polynomial in y.
  bool is_linear_in_y() const;
  /// Maximum degree in y over all (polynomial) coefficients; throws for
  /// non-polynomial coefficients.
  std::size_t y_degree() const;

  std::string to_string() const;

 private:
  void add_sorted(const MultiIndex& base, const Multivector& v);

  ChartPtr chart_;
  int q_;
  int p_;
  Terms terms_;
};

/// Bracket on Ω_E: [α⊗A, β⊗B] = (-1)^{(q-1)p'} (α∧β) ⊗ [A,B]_vertical.
BigradedElement omega_bracket(const BigradedElement& u, const BigradedElement& v);

/// Γ_i = Γ_i^a ∂y_a; horizontal lift hor(∂x_i) = ∂x_i + Γ_i.
class ConnectionData {
 public:
  explicit ConnectionData(ChartPtr chart);

  const ChartPtr& chart() const { return chart_; }
  const RationalFunction& coefficient(std::size_t i, std::size_t a) const { return coeffs_.at(i).at(a); }
  void set(std::size_t i, std::size_t a, RationalFunction f);

  /// The vertical vector field Γ_i.
  Multivector field(std::size_t i) const;
  /// Σ_i dx^i ⊗ Γ_i, bidegree (1,1).
  BigradedElement as_element() const;
  static ConnectionData from_element(const BigradedElement& e);

  bool is_zero() const;
  bool is_linear_in_y() const;
  bool operator==(const ConnectionData& o) const;

  template <class Fn>
  ConnectionData map_coefficients(Fn&& fn) const {
    ConnectionData r(chart_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      for (std::size_t a = 0; a < coeffs_[i].size(); ++a) r.coeffs_[i][a] = fn(coeffs_[i][a]);
    }
    return r;
  }

 private:
  ChartPtr chart_;
  std::vector<std::vector<RationalFunction>> coeffs_;
};

/// d_Γ u = Σ_i dx^i ∧ (∂_{x_i} + ad_{Γ_i}) u.
BigradedElement d_gamma(const ConnectionData& g, const BigradedElement& u);

/// Ω_Γ = Σ_{i<j} dx^i∧dx^j ⊗ (∂_iΓ_j - ∂_jΓ_i + [Γ_i,Γ_j]); d_Γ² = ad_Ω.
BigradedElement curvature(const ConnectionData& g);

struct GeometricTriple {
  BigradedElement vertical;    // (2,0)
  ConnectionData connection;
  BigradedElement horizontal;  // (0,2)

  explicit GeometricTriple(const ChartPtr& chart);
  GeometricTriple(BigradedElement v, ConnectionData g, BigradedElement h);
  const ChartPtr& chart() const { return connection.chart(); }
  bool operator==(const GeometricTriple& o) const;
};

/// Sign relating the horizontal form to the inverse of the horizontal block:
/// 𝔽 = kHorizontalSign * C^{-1}.
inline constexpr int kHorizontalSign = 1;

/// Sample points (values for every chart variable) used to check that the
/// horizontal block and all produced denominators are non-singular.
using SamplePoints = std::vector<std::vector<Rational>>;

GeometricTriple triple_from_bivector(const Multivector& theta, const SamplePoints& samples = {});
Multivector bivector_from_triple(const GeometricTriple& t, const SamplePoints& samples = {});

struct StructureResiduals {
  BigradedElement r1;  // ½[θv,θv]          (3,0)
  BigradedElement r2;  // d_Γ θv             (2,1)
  BigradedElement r3;  // d_Γ 𝔽              (0,3)
  BigradedElement r4;  // Ω_Γ + [𝔽,θv]        (1,2)

  bool all_zero() const { return r1.is_zero() && r2.is_zero() && r3.is_zero() && r4.is_zero(); }
  std::vector<const BigradedElement*> items() const { return {&r1, &r2, &r3, &r4}; }
};

StructureResiduals verify_structure_equations(const GeometricTriple& t);

/// Finite sum of homogeneous elements keyed by bidegree (q, p).
class GradedSum {
 public:
  explicit GradedSum(ChartPtr chart) : chart_(std::move(chart)) {}

  const ChartPtr& chart() const { return chart_; }
  void add(const BigradedElement& e);
  /// Component of bidegree (q,p); zero when absent.
  BigradedElement part(int q, int p) const;
  const std::map<std::pair<int, int>, BigradedElement>& parts() const { return parts_; }
  bool is_zero() const { return parts_.empty(); }

  GradedSum& operator+=(const GradedSum& o);
  GradedSum& operator-=(const GradedSum& o);
  friend GradedSum operator+(GradedSum a, const GradedSum& b) { return a += b; }
  friend GradedSum operator-(GradedSum a, const GradedSum& b) { return a -= b; }
  bool operator==(const GradedSum& o) const;

 private:
  ChartPtr chart_;
  std::map<std::pair<int, int>, BigradedElement> parts_;
};

struct TotalDifferential {
  BigradedElement d10;   // [θv, u]
  BigradedElement d01;   // d_Γ u
  BigradedElement dm12;  // [𝔽, u]
  GradedSum sum() const;
};

TotalDifferential total_differential(const GeometricTriple& t, const BigradedElement& u);
GradedSum total_differential(const GeometricTriple& t, const GradedSum& u);

/// Square matrix over the rational-function field.
using RFMatrix = std::vector<std::vector<RationalFunction>>;

/// Inverse by fraction-free elimination; nullopt when singular.
std::optional<RFMatrix> invert(const RFMatrix& m);

}  // namespace leafstab
