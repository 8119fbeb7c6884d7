#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ainf/scalar.hpp"

namespace ainf::linalg {

/// Dense row-major matrix over Q.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix operator*(const Matrix& other) const;
  /// Columns of `this` followed by the columns of `other`.
  Matrix hconcat(const Matrix& other) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

/// Rank by fraction-free (Bareiss) elimination. Rows are first scaled to
/// integers; the pivot in each column is the entry of smallest absolute value.
std::size_t rank(const Matrix& m);

/// Basis of the right nullspace, one vector per column of the result.
Matrix nullspace(const Matrix& m);

}  // namespace ainf::linalg

namespace ainf::linalg {

/// Some solution x of m x = rhs (free variables set to zero), or nullopt when
/// the system is inconsistent.
std::optional<std::vector<Scalar>> solve(const Matrix& m, const std::vector<Scalar>& rhs);

}  // namespace ainf::linalg
