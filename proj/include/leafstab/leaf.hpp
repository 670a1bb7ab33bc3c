#pragma once

// Numerical leaf search over the periodic 2-torus: discrete obstruction, the
// L² functional, its analytic gradient, the discrete flat kernel and a
// projected descent. Grid loops come in a serial reference and an OpenMP
// version that produce bitwise identical results.

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "leafstab/bigraded.hpp"

namespace leafstab::leaf {

struct Grid {
  Grid(std::size_t n1, std::size_t n2);
  std::size_t n1, n2;
  std::size_t points() const { return n1 * n2; }
  double h1() const;
  double h2() const;
  double cell_area() const { return h1() * h2(); }
  /// Row-major point index p = j1 * n2 + j2.
  std::array<double, 2> coordinates(std::size_t p) const;
};

/// m real components per grid point, point-major.
class DiscreteSection {
 public:
  DiscreteSection(Grid grid, std::size_t fiber_dim);
  DiscreteSection(Grid grid, std::size_t fiber_dim, std::vector<double> values);
  static DiscreteSection sample(Grid grid, std::size_t fiber_dim,
                                const std::function<double(double, double, std::size_t)>& f);

  const Grid& grid() const { return grid_; }
  std::size_t fiber_dim() const { return m_; }
  double& operator()(std::size_t p, std::size_t a) { return v_[p * m_ + a]; }
  double operator()(std::size_t p, std::size_t a) const { return v_[p * m_ + a]; }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

  /// Σ_p Σ_a u v · cell area.
  double dot(const DiscreteSection& o) const;
  DiscreteSection& operator+=(const DiscreteSection& o);
  DiscreteSection& axpy(double alpha, const DiscreteSection& o);
  DiscreteSection& operator*=(double alpha);

 private:
  Grid grid_;
  std::size_t m_;
  std::vector<double> v_;
};

/// Values and fiber derivatives of the triple at one point (x, y).
struct PointJet {
  std::vector<double> vertical;    // θv^{ab}, a < b, lexicographic pairs
  std::vector<double> d_vertical;  // ∂_{y_c} θv^{ab}: [pair * m + c]
  std::vector<double> connection;  // Γ_i^a: [i * m + a]
  std::vector<double> d_connection;  // ∂_{y_c} Γ_i^a: [(i * m + a) * m + c]
  double horizontal = 0;           // 𝔽 coefficient of dx1∧dx2
};

class DiscreteTriple {
 public:
  explicit DiscreteTriple(std::size_t fiber_dim, bool first_order = false);
  virtual ~DiscreteTriple() = default;
  std::size_t fiber_dim() const { return m_; }
  std::size_t pairs() const { return m_ * (m_ - 1) / 2; }
  bool first_order() const { return first_order_; }
  /// Throws NumericError outside the evaluator domain.
  virtual void evaluate(double x1, double x2, const double* y, PointJet& out) const = 0;
  PointJet make_jet() const;

 private:
  std::size_t m_;
  bool first_order_;
};

/// A symbolic triple on (x1, x2; y1..ym) without free parameters, evaluated
/// in double precision with exact symbolic fiber derivatives.
std::shared_ptr<const DiscreteTriple> sample_triple(const GeometricTriple& t);

struct TripleCallbacks {
  std::size_t fiber_dim = 1;
  /// Upper-triangular θv entries.
  std::function<std::vector<double>(double, double, const double*)> vertical;
  /// Γ_i^a at [i * m + a].
  std::function<std::vector<double>(double, double, const double*)> connection;
  std::function<double(double, double, const double*)> horizontal;
};

/// Fiber derivatives by central differences with step 1e-6.
std::shared_ptr<const DiscreteTriple> callable_triple(TripleCallbacks cb);

/// Built-in families on T² × ℝ: "torus-area-family" (a), "torus-epsilon" (eps),
/// "torus-f-shift" (a, delta). Missing parameters default to 0.
GeometricTriple family_triple(const std::string& name, const std::map<std::string, Rational>& params);
std::vector<std::string> family_names();

struct DiscreteObstruction {
  std::size_t points = 0;
  std::size_t pairs = 0;
  std::size_t fiber_dim = 0;
  std::vector<double> vertical;    // [p * pairs + k]
  std::vector<double> connection;  // Γ(x, s) - D s: [p * 2m + i * m + a]
  double max_abs() const;
};

/// Periodic second-order forward difference along direction i (0 or 1).
DiscreteSection difference(const DiscreteSection& s, int direction);
DiscreteSection difference_transpose(const DiscreteSection& s, int direction);

namespace serial {
DiscreteObstruction discrete_obstruction(const DiscreteTriple& t, const DiscreteSection& s);
double functional(const DiscreteTriple& t, const DiscreteSection& s);
DiscreteSection gradient(const DiscreteTriple& t, const DiscreteSection& s);
}  // namespace serial

namespace omp {
DiscreteObstruction discrete_obstruction(const DiscreteTriple& t, const DiscreteSection& s);
double functional(const DiscreteTriple& t, const DiscreteSection& s);
DiscreteSection gradient(const DiscreteTriple& t, const DiscreteSection& s);
}  // namespace omp

/// Threads used by the omp kernels: OpenMP's maximum, capped by LEAFSTAB_THREADS.
int thread_count();

using omp::discrete_obstruction;
using omp::functional;
using omp::gradient;

/// Orthonormal (for DiscreteSection::dot) basis of the kernel of the
/// linearized obstruction at s = 0. Throws NumericError when an eigenvalue
/// falls between the kernel and range thresholds.
std::vector<DiscreteSection> kernel_basis(const DiscreteTriple& t, const Grid& grid);

/// s - Σ_k <s, e_k> e_k.
DiscreteSection project_out(const DiscreteSection& s, const std::vector<DiscreteSection>& basis);

struct FindLeafParams {
  int max_iter = 5000;
  double tol = 1e-10;
  double armijo_c1 = 1e-4;
  double shrink = 0.5;
  double min_step = 1e-30;
  /// Stop when the projected L² gradient is below grad_tol · sqrt(Φ).
  double grad_tol = 1e-12;
  /// Stop when an accepted step lowers Φ by at most stall_tol · Φ.
  double stall_tol = 1e-15;
};

struct OptimReport {
  DiscreteSection final_section;
  double residual = 0;
  int iterations = 0;
  bool converged = false;
  std::string stop_reason;
  std::vector<double> kernel_component;
  /// Φ after each accepted step, starting with Φ(s0).
  std::vector<double> trace;
};

OptimReport find_leaf(const DiscreteTriple& t_ref, const DiscreteTriple& t, const DiscreteSection& s0,
                      const FindLeafParams& params = {});

/// Pointwise 𝔽(x, s(x)) - ω + (D1 β2 - D2 β1) for a fixed leafwise form ω
/// (one value per grid point) and β with two components per grid point.
std::vector<double> strong_obstruction(const DiscreteTriple& t, const DiscreteSection& s, const DiscreteSection& beta,
                                       const std::vector<double>& omega);

}  // namespace leafstab::leaf
