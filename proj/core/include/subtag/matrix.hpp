#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subtag/field.hpp"
#include "subtag/rng.hpp"

namespace subtag {

/// Dense row-major matrix over one finite field.
class Matrix {
 public:
  Matrix() = default;
  Matrix(const Field& field, std::size_t rows, std::size_t cols);

  static Matrix identity(const Field& field, std::size_t n);
  /// Rows must all have length `cols`.
  static Matrix from_rows(const Field& field, std::size_t cols, const std::vector<std::vector<Elem>>& rows);
  static Matrix from_columns(const Field& field, std::size_t rows, const std::vector<std::vector<Elem>>& cols);

  const Field* field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Elem operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Elem& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::vector<Elem> row(std::size_t r) const;
  std::vector<Elem> col(std::size_t c) const;

  Matrix transpose() const;
  Matrix select_columns(std::span<const std::size_t> cols) const;
  Matrix select_rows(std::span<const std::size_t> rows) const;
  bool is_zero() const;

  /// Nested bracketed lists; extension entries print as [c0,...,c_{l-1}].
  std::string to_string() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b);

 private:
  const Field* field_ = nullptr;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Elem> data_;
};

Matrix hstack(const Matrix& a, const Matrix& b);
Matrix vstack(const Matrix& a, const Matrix& b);

/// Matrix-vector product a * v.
std::vector<Elem> apply(const Matrix& a, std::span<const Elem> v);

/// Inner product of equal-length vectors.
Elem dot(std::span<const Elem> a, std::span<const Elem> b);

struct RrefResult {
  Matrix reduced;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

/// Gauss-Jordan elimination. The pivot in each column is the first nonzero
/// entry at or below the current row, so the output is canonical.
RrefResult rref(const Matrix& m);
std::size_t rank(const Matrix& m);

/// Columns form a basis of {x : a x = 0}; cols() == nullity.
Matrix null_space(const Matrix& a);

/// Full affine solution set of a X = b: X = particular + null_basis * Y for
/// any Y. Each column of X ranges over |F|^nullity values.
struct AffineSolution {
  Matrix particular;
  Matrix null_basis;

  std::size_t nullity() const noexcept { return null_basis.cols(); }
};

/// nullopt when the system is inconsistent.
std::optional<AffineSolution> solve_all(const Matrix& a, const Matrix& b);

/// Coefficients lambda with sum_j lambda_j * generators[j] == v, or nullopt
/// when v is outside the span.
std::optional<std::vector<Elem>> span_contains(const Field& field, std::span<const std::vector<Elem>> generators,
                                               std::span<const Elem> v);

Matrix random_matrix(const Field& field, std::size_t rows, std::size_t cols, Rng& rng);

/// Uniform among full-rank matrices, by rejection (at most 1000 draws).
Matrix random_full_rank(const Field& field, std::size_t rows, std::size_t cols, std::uint64_t seed);

Elem random_element(const Field& field, Rng& rng);

}  // namespace subtag
