#ifndef RSL_MATRIX_HPP_
#define RSL_MATRIX_HPP_

// Dense exact linear algebra over any field handle (FieldSpec,
// ExtensionSpec). Pivoting always takes the first nonzero entry scanning
// rows top-to-bottom within the leftmost remaining column, so every result
// is deterministic.

#include <concepts>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rsl/error.hpp"

namespace rsl {

template <class K>
concept FieldLike = requires(const K& k, const typename K::value_type& a) {
  { k.zero() } -> std::convertible_to<typename K::value_type>;
  { k.one() } -> std::convertible_to<typename K::value_type>;
  { k.add(a, a) } -> std::convertible_to<typename K::value_type>;
  { k.sub(a, a) } -> std::convertible_to<typename K::value_type>;
  { k.mul(a, a) } -> std::convertible_to<typename K::value_type>;
  { k.inv(a) } -> std::convertible_to<typename K::value_type>;
  { k.is_zero(a) } -> std::convertible_to<bool>;
  { k == k } -> std::convertible_to<bool>;
};

template <FieldLike K>
class Matrix {
 public:
  using value_type = typename K::value_type;

  Matrix(K field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols),
        data_(rows * cols, field_.zero()) {}

  Matrix(K field, std::size_t rows, std::size_t cols, std::vector<value_type> data)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
      throw Error(ErrorCode::LengthMismatch, "matrix data size");
  }

  static Matrix identity(K field, std::size_t n) {
    Matrix m(std::move(field), n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = m.field_.one();
    return m;
  }

  static Matrix from_rows(K field, std::size_t cols,
                          const std::vector<std::vector<value_type>>& rows) {
    Matrix m(std::move(field), rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw Error(ErrorCode::LengthMismatch, "row length");
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
    }
    return m;
  }

  static Matrix column(K field, std::vector<value_type> values) {
    const std::size_t n = values.size();
    return Matrix(std::move(field), n, 1, std::move(values));
  }

  const K& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  value_type& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const value_type& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<const value_type> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<value_type> col(std::size_t c) const {
    std::vector<value_type> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out.push_back((*this)(r, c));
    return out;
  }
  const std::vector<value_type>& data() const { return data_; }

  void append_row(std::span<const value_type> values) {
    if (values.size() != cols_) throw Error(ErrorCode::LengthMismatch, "row length");
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }

  Matrix operator*(const Matrix& rhs) const {
    check_field(rhs);
    if (cols_ != rhs.rows_) throw Error(ErrorCode::LengthMismatch, "inner dimensions");
    Matrix out(field_, rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const auto& a = (*this)(i, k);
        if (field_.is_zero(a)) continue;
        for (std::size_t j = 0; j < rhs.cols_; ++j)
          out(i, j) = field_.add(out(i, j), field_.mul(a, rhs(k, j)));
      }
    }
    return out;
  }

  // This matrix with `below` appended underneath.
  Matrix stacked(const Matrix& below) const {
    check_field(below);
    if (rows_ > 0 && below.rows_ > 0 && cols_ != below.cols_)
      throw Error(ErrorCode::LengthMismatch, "column counts differ");
    const std::size_t cols = rows_ > 0 ? cols_ : below.cols_;
    std::vector<value_type> data = data_;
    data.insert(data.end(), below.data_.begin(), below.data_.end());
    return Matrix(field_, rows_ + below.rows_, cols, std::move(data));
  }

  Matrix columns(std::size_t first, std::size_t count) const {
    if (first + count > cols_) throw Error(ErrorCode::LengthMismatch, "column range");
    Matrix out(field_, rows_, count);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < count; ++c) out(r, c) = (*this)(r, first + c);
    return out;
  }

  Matrix select_rows(std::span<const std::size_t> which) const {
    Matrix out(field_, 0, cols_);
    for (auto r : which) out.append_row(row(r));
    return out;
  }

  Matrix transposed() const {
    Matrix out(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
  }

  bool operator==(const Matrix& other) const {
    return field_ == other.field_ && rows_ == other.rows_ && cols_ == other.cols_ &&
           data_ == other.data_;
  }

 private:
  void check_field(const Matrix& other) const {
    if (!(field_ == other.field_))
      throw Error(ErrorCode::FieldMismatch, "matrices over different fields");
  }

  K field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<value_type> data_;
};

namespace detail {

// In-place Gauss(-Jordan) elimination restricted to the first `limit`
// columns. Returns pivot columns in order; pivot rows are 0..size-1.
template <FieldLike K>
std::vector<std::size_t> eliminate(Matrix<K>& m, std::size_t limit, bool reduce) {
  const K& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t prow = 0;
  for (std::size_t c = 0; c < limit && prow < m.rows(); ++c) {
    std::size_t r = prow;
    while (r < m.rows() && f.is_zero(m(r, c))) ++r;
    if (r == m.rows()) continue;
    if (r != prow)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(prow, j));
    const auto inv = f.inv(m(prow, c));
    for (std::size_t j = c; j < m.cols(); ++j) m(prow, j) = f.mul(m(prow, j), inv);
    for (std::size_t i = reduce ? 0 : prow + 1; i < m.rows(); ++i) {
      if (i == prow || f.is_zero(m(i, c))) continue;
      const auto factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        m(i, j) = f.sub(m(i, j), f.mul(factor, m(prow, j)));
    }
    pivots.push_back(c);
    ++prow;
  }
  return pivots;
}

}  // namespace detail

template <FieldLike K>
std::size_t rank(Matrix<K> m) {
  return detail::eliminate(m, m.cols(), false).size();
}

template <FieldLike K>
Matrix<K> rref(Matrix<K> m) {
  detail::eliminate(m, m.cols(), true);
  return m;
}

// One solution x of a*x = b (free variables set to zero).
template <FieldLike K>
Matrix<K> solve(const Matrix<K>& a, const Matrix<K>& b) {
  if (a.rows() != b.rows()) throw Error(ErrorCode::LengthMismatch, "solve: row counts");
  const K& f = a.field();
  Matrix<K> aug(f, a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) aug(r, a.cols() + c) = b(r, c);
  }
  const auto pivots = detail::eliminate(aug, a.cols(), true);
  for (std::size_t r = pivots.size(); r < aug.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c)
      if (!f.is_zero(aug(r, a.cols() + c)))
        throw Error(ErrorCode::Inconsistent, "right-hand side outside column space");
  Matrix<K> x(f, a.cols(), b.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i)
    for (std::size_t c = 0; c < b.cols(); ++c) x(pivots[i], c) = aug(i, a.cols() + c);
  return x;
}

template <FieldLike K>
Matrix<K> invert(const Matrix<K>& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::Singular, "matrix is not square");
  const auto id = Matrix<K>::identity(a.field(), a.rows());
  Matrix<K> aug(a.field(), a.rows(), 2 * a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) {
      aug(r, c) = a(r, c);
      aug(r, a.cols() + c) = id(r, c);
    }
  if (detail::eliminate(aug, a.cols(), true).size() != a.rows())
    throw Error(ErrorCode::Singular, "matrix is rank deficient");
  return aug.columns(a.cols(), a.cols());
}

// Row i = (1, x_i, x_i^2, ..., x_i^(cols-1)).
template <FieldLike K>
Matrix<K> vandermonde(const K& field, std::span<const typename K::value_type> points,
                      std::size_t cols) {
  Matrix<K> m(field, points.size(), cols);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto x = field.one();
    for (std::size_t c = 0; c < cols; ++c) {
      m(i, c) = x;
      x = field.mul(x, points[i]);
    }
  }
  return m;
}

// Entry-wise image of `m` in another field.
template <FieldLike To, FieldLike From, class Fn>
Matrix<To> map_matrix(const Matrix<From>& m, const To& to, Fn&& fn) {
  Matrix<To> out(to, m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = fn(m(r, c));
  return out;
}

}  // namespace rsl

#endif  // RSL_MATRIX_HPP_
