#include "subtag/matrix.hpp"

#include <algorithm>
#include <sstream>

#include "subtag/error.hpp"

namespace subtag {

Matrix::Matrix(const Field& field, std::size_t rows, std::size_t cols)
    : field_(&field), rows_(rows), cols_(cols), data_(rows * cols, field.zero()) {}

Matrix Matrix::identity(const Field& field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
  return m;
}

Matrix Matrix::from_rows(const Field& field, std::size_t cols, const std::vector<std::vector<Elem>>& rows) {
  Matrix m(field, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) raise(Errc::DimensionMismatch, "ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!field.owns(rows[r][c])) raise(Errc::FieldMismatch, "matrix entry from another field");
      m(r, c) = rows[r][c];
    }
  }
  return m;
}

Matrix Matrix::from_columns(const Field& field, std::size_t rows, const std::vector<std::vector<Elem>>& cols) {
  Matrix m(field, rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != rows) raise(Errc::DimensionMismatch, "ragged matrix columns");
    for (std::size_t r = 0; r < rows; ++r) {
      if (!field.owns(cols[c][r])) raise(Errc::FieldMismatch, "matrix entry from another field");
      m(r, c) = cols[c][r];
    }
  }
  return m;
}

std::vector<Elem> Matrix::row(std::size_t r) const {
  return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
          data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

std::vector<Elem> Matrix::col(std::size_t c) const {
  std::vector<Elem> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back((*this)(r, c));
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(*field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const {
  Matrix out(*field_, rows_, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j] >= cols_) raise(Errc::IndexOutOfRange, "column index out of range");
    for (std::size_t r = 0; r < rows_; ++r) out(r, j) = (*this)(r, cols[j]);
  }
  return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
  Matrix out(*field_, rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= rows_) raise(Errc::IndexOutOfRange, "row index out of range");
    for (std::size_t c = 0; c < cols_; ++c) out(i, c) = (*this)(rows[i], c);
  }
  return out;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](Elem x) { return x.is_zero(); });
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < rows_; ++r) {
    if (r != 0) os << ',';
    os << '[';
    for (std::size_t c = 0; c < cols_; ++c) {
      if (c != 0) os << ',';
      const Elem x = (*this)(r, c);
      if (field_->is_extension()) {
        os << '[' << field_->format(x) << ']';
      } else {
        os << field_->format(x);
      }
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) raise(Errc::DimensionMismatch, "matrix product shape mismatch");
  if (a.field_ != b.field_) raise(Errc::FieldMismatch, "matrix product across fields");
  Matrix out(*a.field_, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t j = 0; j < b.cols_; ++j) {
      Elem acc = a.field_->zero();
      for (std::size_t k = 0; k < a.cols_; ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) raise(Errc::DimensionMismatch, "matrix sum shape mismatch");
  Matrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
  return out;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) raise(Errc::DimensionMismatch, "hstack row mismatch");
  Matrix out(*a.field(), a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) out(r, a.cols() + c) = b(r, c);
  }
  return out;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) raise(Errc::DimensionMismatch, "vstack column mismatch");
  Matrix out(*a.field(), a.rows() + b.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
  }
  for (std::size_t r = 0; r < b.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(a.rows() + r, c) = b(r, c);
  }
  return out;
}

std::vector<Elem> apply(const Matrix& a, std::span<const Elem> v) {
  if (a.cols() != v.size()) raise(Errc::DimensionMismatch, "matrix-vector shape mismatch");
  std::vector<Elem> out(a.rows(), a.field()->zero());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out[r] += a(r, c) * v[c];
  }
  return out;
}

Elem dot(std::span<const Elem> a, std::span<const Elem> b) {
  if (a.size() != b.size()) raise(Errc::LengthMismatch, "dot product length mismatch");
  if (a.empty()) raise(Errc::LengthMismatch, "dot product of empty vectors");
  Elem acc = a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

RrefResult rref(const Matrix& m) {
  RrefResult out{m, 0, {}};
  Matrix& a = out.reduced;
  if (m.field() == nullptr) return out;
  const Field& f = *m.field();
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < a.rows() && a(pivot, col).is_zero()) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != row) {
      for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(pivot, c), a(row, c));
    }
    const std::uint32_t inv = f.inv_raw(a(row, col).value());
    for (std::size_t c = col; c < a.cols(); ++c) a(row, c) = f.elem(f.mul_raw(a(row, c).value(), inv));
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row) continue;
      const std::uint32_t factor = a(r, col).value();
      if (factor == 0) continue;
      for (std::size_t c = col; c < a.cols(); ++c) {
        const std::uint32_t v = f.sub_raw(a(r, c).value(), f.mul_raw(factor, a(row, c).value()));
        a(r, c) = f.elem(v);
      }
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.rank = out.pivots.size();
  return out;
}

std::size_t rank(const Matrix& m) { return rref(m).rank; }

Matrix null_space(const Matrix& a) {
  const Field& f = *a.field();
  const auto red = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : red.pivots) is_pivot[p] = true;
  std::vector<std::vector<Elem>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Elem> x(a.cols(), f.zero());
    x[free] = f.one();
    for (std::size_t i = 0; i < red.pivots.size(); ++i) x[red.pivots[i]] = -red.reduced(i, free);
    basis.push_back(std::move(x));
  }
  return Matrix::from_columns(f, a.cols(), basis);
}

std::optional<AffineSolution> solve_all(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) raise(Errc::DimensionMismatch, "solve_all: row counts differ");
  if (a.field() != b.field()) raise(Errc::FieldMismatch, "solve_all: operands from different fields");
  const Field& f = *a.field();
  const std::size_t n = a.cols();
  const auto red = rref(hstack(a, b));
  for (auto p : red.pivots) {
    if (p >= n) return std::nullopt;
  }
  Matrix particular(f, n, b.cols());
  for (std::size_t i = 0; i < red.pivots.size(); ++i) {
    for (std::size_t c = 0; c < b.cols(); ++c) particular(red.pivots[i], c) = red.reduced(i, n + c);
  }
  std::vector<bool> is_pivot(n, false);
  for (auto p : red.pivots) is_pivot[p] = true;
  std::vector<std::vector<Elem>> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Elem> x(n, f.zero());
    x[free] = f.one();
    for (std::size_t i = 0; i < red.pivots.size(); ++i) x[red.pivots[i]] = -red.reduced(i, free);
    basis.push_back(std::move(x));
  }
  return AffineSolution{std::move(particular), Matrix::from_columns(f, n, basis)};
}

std::optional<std::vector<Elem>> span_contains(const Field& field, std::span<const std::vector<Elem>> generators,
                                               std::span<const Elem> v) {
  if (generators.empty()) {
    for (auto x : v) {
      if (!field.owns(x)) raise(Errc::FieldMismatch, "span_contains: vector from another field");
      if (!x.is_zero()) return std::nullopt;
    }
    return std::vector<Elem>{};
  }
  for (const auto& g : generators) {
    if (g.size() != v.size()) raise(Errc::LengthMismatch, "span_contains: generator length differs");
  }
  const Matrix a = Matrix::from_columns(field, v.size(), {generators.begin(), generators.end()});
  const Matrix b = Matrix::from_columns(field, v.size(), {std::vector<Elem>(v.begin(), v.end())});
  auto sol = solve_all(a, b);
  if (!sol) return std::nullopt;
  return sol->particular.col(0);
}

Elem random_element(const Field& field, Rng& rng) { return field.elem(rng.uniform(field.order())); }

Matrix random_matrix(const Field& field, std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(field, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = random_element(field, rng);
  }
  return m;
}

Matrix random_full_rank(const Field& field, std::size_t rows, std::size_t cols, std::uint64_t seed) {
  if (rows == 0 || cols == 0) raise(Errc::DimensionMismatch, "random_full_rank needs positive dimensions");
  Rng rng(seed);
  const std::size_t target = std::min(rows, cols);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Matrix m = random_matrix(field, rows, cols, rng);
    if (rank(m) == target) return m;
  }
  raise(Errc::Internal, "random_full_rank exceeded 1000 attempts");
}

}  // namespace subtag
