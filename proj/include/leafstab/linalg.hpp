#pragma once

// Dense matrices over Q with exact rank, null space and span membership.

#include <optional>
#include <vector>

#include "leafstab/poly.hpp"

namespace leafstab {

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static QMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool is_zero() const;
  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  bool operator==(const QMatrix& o) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Rank via fraction-free (Bareiss) elimination on the integer matrix
/// obtained by clearing row denominators.
std::size_t rank(const QMatrix& m);

/// Basis of {v : m v = 0}, from the reduced row echelon form.
std::vector<std::vector<Rational>> nullspace(const QMatrix& m);

/// True iff v lies in the column span of m.
bool in_column_span(const QMatrix& m, const std::vector<Rational>& v);

}  // namespace leafstab

namespace leafstab {

/// Inverse of a square matrix; nullopt if singular.
std::optional<QMatrix> inverse(const QMatrix& m);

}  // namespace leafstab
