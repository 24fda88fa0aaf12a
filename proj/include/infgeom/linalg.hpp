#pragma once

// Small dense linear algebra over exact rationals or doubles. Sizes here are
// tiny (metric matrices, a few dozen monomials), so everything is O(n^3)
// Gauss-Jordan without blocking.

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "infgeom/errors.hpp"
#include "infgeom/scalar.hpp"

namespace infgeom {

template <Scalar S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, S(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  S& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const S& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: shape mismatch");
    Matrix p(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == S(0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) p(i, j) += a(i, k) * b(k, j);
      }
    return p;
  }

  friend Matrix operator*(const S& s, Matrix m) {
    for (auto& x : m.data_) x *= s;
    return m;
  }

  friend Matrix operator-(Matrix a, const Matrix& b) {
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

  bool near(const Matrix& other, double eps = kDefaultEpsilon) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) return false;
    for (std::size_t i = 0; i < data_.size(); ++i)
      if (!infgeom::near<S>(data_[i], other.data_[i], eps)) return false;
    return true;
  }

  bool is_symmetric(double eps = kDefaultEpsilon) const { return near(transpose(), eps); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

/// In-place reduction to reduced row echelon form. Returns the pivot column
/// of each nonzero row, in row order; zero rows are moved to the bottom.
/// Columns are scanned left to right, so callers control pivot preference
/// through column order.
template <Scalar S>
std::vector<std::size_t> reduce_to_rref(Matrix<S>& m, double eps = kDefaultEpsilon) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t best = m.rows();
    if constexpr (is_exact_v<S>) {
      for (std::size_t r = row; r < m.rows(); ++r)
        if (!m(r, col).is_zero()) {
          best = r;
          break;
        }
    } else {
      double best_abs = eps;
      for (std::size_t r = row; r < m.rows(); ++r)
        if (std::abs(m(r, col)) > best_abs) {
          best_abs = std::abs(m(r, col));
          best = r;
        }
    }
    if (best == m.rows()) continue;
    if (best != row)
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(row, c), m(best, c));
    S inv = S(1) / m(row, col);
    for (std::size_t c = 0; c < m.cols(); ++c) m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == S(0)) continue;
      S factor = m(r, col);
      for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) -= factor * m(row, c);
    }
    if constexpr (!is_exact_v<S>) {
      for (std::size_t r = 0; r < m.rows(); ++r)
        if (r != row) m(r, col) = 0.0;
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <Scalar S>
std::size_t rank(Matrix<S> m, double eps = kDefaultEpsilon) {
  return reduce_to_rref(m, eps).size();
}

/// Basis of {x : m x = 0}, one vector per free column.
template <Scalar S>
std::vector<std::vector<S>> nullspace(Matrix<S> m, double eps = kDefaultEpsilon) {
  auto pivots = reduce_to_rref(m, eps);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<S>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<S> v(m.cols(), S(0));
    v[free] = S(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Inverse via Gauss-Jordan; nullopt when singular (exactly, or below eps).
template <Scalar S>
std::optional<Matrix<S>> try_inverse(const Matrix<S>& a, double eps = kDefaultEpsilon) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("inverse of non-square matrix");
  Matrix<S> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = S(1);
  }
  auto pivots = reduce_to_rref(aug, eps);
  if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
  Matrix<S> inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

template <Scalar S>
Matrix<S> inverse(const Matrix<S>& a, double eps = kDefaultEpsilon) {
  auto inv = try_inverse(a, eps);
  if (!inv) throw precondition_error("singular matrix");
  return *std::move(inv);
}

template <Scalar S>
S determinant(Matrix<S> a) {
  const std::size_t n = a.rows();
  S det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = n;
    if constexpr (is_exact_v<S>) {
      for (std::size_t r = col; r < n; ++r)
        if (!a(r, col).is_zero()) {
          piv = r;
          break;
        }
    } else {
      double best = 0.0;
      for (std::size_t r = col; r < n; ++r)
        if (std::abs(a(r, col)) > best) {
          best = std::abs(a(r, col));
          piv = r;
        }
    }
    if (piv == n) return S(0);
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(col, c), a(piv, c));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      S f = a(r, col) / a(col, col);
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
    }
  }
  return det;
}

/// Lower-triangular L with L L^T = a. Throws when a is not positive definite.
inline Matrix<double> cholesky(const Matrix<double>& a, double eps = kDefaultEpsilon) {
  const std::size_t n = a.rows();
  Matrix<double> l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > eps)) throw precondition_error("metric is not positive definite");
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

}  // namespace infgeom
