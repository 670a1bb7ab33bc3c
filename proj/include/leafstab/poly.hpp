#pragma once

// Exact multivariate polynomials and rational functions over Q on a single
// coordinate chart with base variables x^1..x^n followed by fiber variables
// y^1..y^m.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "leafstab/errors.hpp"

namespace leafstab {

using Rational = mpq_class;

/// Variables are ordered base, fiber, then symbolic parameters. Parameters
/// are constants for the calculus (never differentiated, never directions).
class Chart {
 public:
  Chart(std::vector<std::string> base_vars, std::vector<std::string> fiber_vars,
        std::vector<std::string> params = {});

  std::size_t base_dim() const { return base_.size(); }
  std::size_t fiber_dim() const { return fiber_.size(); }
  std::size_t param_dim() const { return params_.size(); }
  std::size_t num_vars() const { return base_.size() + fiber_.size() + params_.size(); }

  /// Global index of fiber variable a (fiber variables follow the base ones).
  std::size_t fiber_index(std::size_t a) const { return base_.size() + a; }
  std::size_t param_index(std::size_t k) const { return base_.size() + fiber_.size() + k; }
  bool is_fiber(std::size_t var) const { return var >= base_.size() && var < base_.size() + fiber_.size(); }
  bool is_param(std::size_t var) const { return var >= base_.size() + fiber_.size() && var < num_vars(); }

  const std::string& name(std::size_t var) const;
  std::optional<std::size_t> index_of(const std::string& name) const;
  std::size_t require_index(const std::string& name) const;

  const std::vector<std::string>& base_vars() const { return base_; }
  const std::vector<std::string>& fiber_vars() const { return fiber_; }
  const std::vector<std::string>& params() const { return params_; }

  bool operator==(const Chart& other) const = default;

 private:
  std::vector<std::string> base_;
  std::vector<std::string> fiber_;
  std::vector<std::string> params_;
};

using ChartPtr = std::shared_ptr<const Chart>;

inline ChartPtr make_chart(std::vector<std::string> base, std::vector<std::string> fiber,
                           std::vector<std::string> params = {}) {
  return std::make_shared<const Chart>(std::move(base), std::move(fiber), std::move(params));
}

/// Throws ChartError unless both charts describe the same coordinates.
void require_same_chart(const ChartPtr& a, const ChartPtr& b);

using Exponent = std::vector<std::uint16_t>;

/// Sparse polynomial; terms keyed by exponent vector in lex order, no zero
/// coefficients stored.
class Poly {
 public:
  using Terms = std::map<Exponent, Rational>;

  Poly() = default;
  explicit Poly(std::size_t nvars) : nvars_(nvars) {}
  Poly(std::size_t nvars, const Rational& c);

  static Poly variable(std::size_t nvars, std::size_t var);
  static Poly monomial(std::size_t nvars, Exponent e, const Rational& c);

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant term (coefficient of the zero exponent).
  Rational constant_term() const;
  std::size_t total_degree() const;
  /// Highest total degree in the variables [first, first + count).
  std::size_t degree_in(std::size_t first, std::size_t count) const;
  bool depends_on(std::size_t var) const;

  /// Lex-leading term; requires non-zero.
  const std::pair<const Exponent, Rational>& leading() const { return *terms_.rbegin(); }

  void add_term(const Exponent& e, const Rational& c);

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rational& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
  bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  Poly pow(unsigned k) const;
  Poly derivative(std::size_t var) const;

  /// Exact quotient a / b if b divides a, otherwise nullopt.
  static std::optional<Poly> divide_exact(const Poly& a, const Poly& b);

  /// Replace variable `var` by polynomial `p` in every term.
  Poly substitute(std::size_t var, const Poly& p) const;
  /// Simultaneous substitution; replacements[v] == nullopt leaves v untouched.
  Poly substitute(std::span<const std::optional<Poly>> replacements) const;

  Rational evaluate(std::span<const Rational> point) const;
  double evaluate(std::span<const double> point) const;

  std::string to_string(const Chart& chart) const;

 private:
  std::size_t nvars_ = 0;
  Terms terms_;
};

/// Quotient of polynomials, normalized lazily: cancellation only by exact
/// division and constant scaling; equality by cross-multiplication.
class RationalFunction {
 public:
  RationalFunction() = default;
  explicit RationalFunction(std::size_t nvars) : num_(nvars), den_(nvars, Rational(1)) {}
  RationalFunction(std::size_t nvars, const Rational& c) : num_(nvars, c), den_(nvars, Rational(1)) {}
  RationalFunction(Poly p);  // NOLINT(google-explicit-constructor)
  RationalFunction(Poly num, Poly den);

  static RationalFunction variable(std::size_t nvars, std::size_t var) {
    return RationalFunction(Poly::variable(nvars, var));
  }

  std::size_t nvars() const { return num_.nvars(); }
  const Poly& numerator() const { return num_; }
  const Poly& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  /// Value of a constant function; throws DomainError otherwise.
  Rational constant_value() const;
  bool depends_on(std::size_t var) const { return num_.depends_on(var) || den_.depends_on(var); }

  RationalFunction operator-() const;
  RationalFunction& operator+=(const RationalFunction& o);
  RationalFunction& operator-=(const RationalFunction& o);
  RationalFunction& operator*=(const RationalFunction& o);
  RationalFunction& operator/=(const RationalFunction& o);
  RationalFunction& operator*=(const Rational& c);
  friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
  friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
  friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
  friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }
  friend RationalFunction operator*(RationalFunction a, const Rational& c) { return a *= c; }
  friend RationalFunction operator*(const Rational& c, RationalFunction a) { return a *= c; }

  /// Mathematical equality (cross-multiplication).
  bool operator==(const RationalFunction& o) const;

  RationalFunction pow(unsigned k) const;
  RationalFunction derivative(std::size_t var) const;
  RationalFunction substitute(std::span<const std::optional<Poly>> replacements) const;

  /// Throws ArithmeticError if the denominator vanishes at the point.
  Rational evaluate(std::span<const Rational> point) const;
  double evaluate(std::span<const double> point) const;

  std::string to_string(const Chart& chart) const;

 private:
  void normalize();

  Poly num_;
  Poly den_;
};

enum class ArithOp { add, sub, mul, div };

/// Exact field arithmetic; division by the zero function throws ArithmeticError.
RationalFunction poly_arith(const RationalFunction& a, const RationalFunction& b, ArithOp op);

/// Partial derivative with respect to a named chart variable.
RationalFunction partial(const RationalFunction& f, const Chart& chart, const std::string& var);

/// Replace each fiber variable y^a by s[a], a polynomial in base variables only.
RationalFunction substitute_fiber(const RationalFunction& f, const Chart& chart, std::span<const Poly> s);

}  // namespace leafstab
