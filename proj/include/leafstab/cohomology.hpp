#pragma once

// Chevalley-Eilenberg complexes of small Lie algebras, mapping-cone cohomology
// over graded ring models and the stability-criteria evaluator.

#include <optional>
#include <string>
#include <vector>

#include "leafstab/linalg.hpp"

namespace leafstab {

/// Lie algebra with basis e_1..e_n and [e_i, e_j] = Σ_k c_{ij}^k e_k.
class LieAlgebraData {
 public:
  /// c[i][j][k] = c_{ij}^k. Throws DomainError unless antisymmetric and Jacobi.
  LieAlgebraData(std::string name, std::vector<std::vector<std::vector<Rational>>> c);

  static LieAlgebraData abelian(std::size_t n);
  /// [e1, e2] = e1.
  static LieAlgebraData aff1();
  /// [e1, e2] = e3 and cyclic.
  static LieAlgebraData su2();

  const std::string& name() const { return name_; }
  std::size_t dim() const { return c_.size(); }
  const Rational& structure_constant(std::size_t i, std::size_t j, std::size_t k) const { return c_[i][j][k]; }

 private:
  std::string name_;
  std::vector<std::vector<std::vector<Rational>>> c_;
};

/// Representation ρ: g → gl(V), one matrix per basis element of g.
class ModuleData {
 public:
  /// Throws DomainError unless ρ([e_i, e_j]) = [ρ(e_i), ρ(e_j)].
  ModuleData(const LieAlgebraData& g, std::string name, std::vector<QMatrix> action);

  static ModuleData trivial(const LieAlgebraData& g, std::size_t dim = 1);
  static ModuleData adjoint(const LieAlgebraData& g);
  static ModuleData coadjoint(const LieAlgebraData& g);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  const QMatrix& action(std::size_t i) const { return action_[i]; }

 private:
  std::string name_;
  std::size_t dim_;
  std::vector<QMatrix> action_;
};

/// D_k: C^k → C^{k+1}, k = 0..size-1, as (dim C^{k+1}) × (dim C^k) matrices.
class CochainComplex {
 public:
  /// Throws DomainError on shape mismatch or D_{k+1} D_k ≠ 0.
  explicit CochainComplex(std::vector<QMatrix> d);
  const std::vector<QMatrix>& differentials() const { return d_; }
  /// dim C^k for k = 0..size().
  std::vector<std::size_t> cochain_dims() const;

 private:
  std::vector<QMatrix> d_;
};

CochainComplex ce_complex(const LieAlgebraData& g, const ModuleData& v);

/// dim H^k for k = 0..differentials().size().
std::vector<std::size_t> cohomology_dims(const CochainComplex& c);

/// Cohomology of S at the level of a ring model together with σ ∪ −.
class GradedRingModel {
 public:
  /// cup[k] is the (betti[k+2]) × (betti[k]) matrix of σ ∪ − (missing
  /// trailing entries mean zero maps). coboundaries, when given, has betti[2]
  /// rows and spans the classes of the H² representatives that are exact.
  GradedRingModel(std::string name, std::vector<std::size_t> betti, std::vector<QMatrix> cup,
                  std::vector<Rational> sigma_class, std::optional<QMatrix> coboundaries = std::nullopt);

  static GradedRingModel torus(const Rational& area = 0);
  static GradedRingModel sphere();
  /// σ = ω₂ − ω₁ on S²×S².
  static GradedRingModel s2xs2();
  /// Presets by name: "t2", "s2", "s2xs2".
  static GradedRingModel preset(const std::string& name);

  const std::string& name() const { return name_; }
  std::size_t betti(int k) const;
  std::size_t top_degree() const { return betti_.size() - 1; }
  const std::vector<std::size_t>& betti_numbers() const { return betti_; }
  /// σ ∪ −: H^k → H^{k+2}; zero matrix where no data is given.
  QMatrix cup_sigma(int k) const;
  const std::vector<Rational>& sigma_class() const { return sigma_; }
  const std::optional<QMatrix>& coboundaries() const { return coboundaries_; }

 private:
  std::string name_;
  std::vector<std::size_t> betti_;
  std::vector<QMatrix> cup_;
  std::vector<Rational> sigma_;
  std::optional<QMatrix> coboundaries_;
};

/// dim H^k_σ = dim coker(σ∪: H^{k-2} → H^k) + dim ker(σ∪: H^{k-1} → H^{k+1}).
std::size_t cone_cohomology(const GradedRingModel& r, int k);

/// True iff the class vanishes in the model (zero, or a coboundary).
bool sigma_exactness_test(const GradedRingModel& r, const std::vector<Rational>& class2);

struct CohomologyGroup {
  std::string name;
  std::size_t dim;
  bool operator==(const CohomologyGroup&) const = default;
};

struct CriteriaReport {
  std::string family;
  std::vector<CohomologyGroup> groups;
  bool criterion1 = false;  // stability
  bool criterion2 = false;  // strong stability
  bool criterion3 = false;  // algebroid stability
};

/// S×I family with leafwise symplectic class σ.
CriteriaReport evaluate_criteria(const GradedRingModel& r);
/// Singular point with isotropy Lie algebra g.
CriteriaReport evaluate_criteria(const LieAlgebraData& g);

}  // namespace leafstab
