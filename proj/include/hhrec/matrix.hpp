#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hhrec/error.hpp"
#include "hhrec/scalar.hpp"

namespace hhrec {

/// Small dense row-major matrix over any Scalar.
template <Scalar S>
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, std::vector<S> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_)
      throw Error(ErrorKind::InvalidSpec, "matrix entries length " + std::to_string(entries_.size()) +
                                              " != " + std::to_string(rows_ * cols_));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const S& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  S& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const std::vector<S>& entries() const { return entries_; }

  Matrix minor_without(std::size_t row, std::size_t col) const {
    std::vector<S> e;
    e.reserve((rows_ - 1) * (cols_ - 1));
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        if (r != row && c != col) e.push_back((*this)(r, c));
    return Matrix(rows_ - 1, cols_ - 1, std::move(e));
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<S> entries_;
};

namespace detail {
template <Scalar S>
void require_square(const Matrix<S>& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorKind::NonSquare,
                "determinant of " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + " matrix");
}
}  // namespace detail

/// Laplace expansion along the first row.
template <Scalar S>
S det_cofactor(const Matrix<S>& m) {
  detail::require_square(m);
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  S total = constant_like(m(0, 0), 0);
  for (std::size_t c = 0; c < n; ++c) {
    if (is_zero(m(0, c))) continue;
    S term = m(0, c) * det_cofactor(m.minor_without(0, c));
    total = (c % 2 == 0) ? total + term : total - term;
  }
  return total;
}

/// Fraction-free Gaussian elimination; every division is exact.
template <Scalar S>
S det_bareiss(Matrix<S> m) {
  detail::require_square(m);
  const std::size_t n = m.rows();
  S prev = constant_like(m(0, 0), 1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (is_zero(m(k, k))) {
      std::size_t swap = k + 1;
      while (swap < n && is_zero(m(swap, k))) ++swap;
      if (swap == n) return constant_like(m(0, 0), 0);
      for (std::size_t c = 0; c < n; ++c) std::swap(m(k, c), m(swap, c));
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = quotient(m(i, j) * m(k, k) - m(i, k) * m(k, j), prev);
    }
    prev = m(k, k);
  }
  S det = m(n - 1, n - 1);
  return negate ? -det : det;
}

/// Dodgson condensation: repeatedly replaces the matrix by its connected 2x2
/// minors divided by the interior of the matrix two steps back. Returns
/// nullopt when one of those interior divisors is zero.
template <Scalar S>
std::optional<S> dodgson_condense(const Matrix<S>& m) {
  detail::require_square(m);
  const std::size_t n = m.rows();
  std::vector<S> prev(n * n + 2 * n + 1, constant_like(m(0, 0), 1));  // (n+1)x(n+1) ones
  std::size_t prev_size = n + 1;
  std::vector<S> cur = m.entries();
  std::size_t size = n;
  while (size > 1) {
    std::vector<S> next;
    next.reserve((size - 1) * (size - 1));
    for (std::size_t i = 0; i + 1 < size; ++i)
      for (std::size_t j = 0; j + 1 < size; ++j) {
        const S& divisor = prev[(i + 1) * prev_size + (j + 1)];
        if (is_zero(divisor)) return std::nullopt;
        S minor = cur[i * size + j] * cur[(i + 1) * size + (j + 1)] - cur[i * size + (j + 1)] * cur[(i + 1) * size + j];
        next.push_back(quotient(minor, divisor));
      }
    prev = std::move(cur);
    prev_size = size;
    cur = std::move(next);
    --size;
  }
  return cur.front();
}

/// Dodgson condensation with fallback to Bareiss on a zero interior minor.
template <Scalar S>
S det_dodgson(const Matrix<S>& m) {
  if (auto d = dodgson_condense(m)) return *std::move(d);
  return det_bareiss(m);
}

template <Scalar S>
S matrix_det(const Matrix<S>& m) {
  return det_dodgson(m);
}

template <Scalar S>
Matrix<S> operator*(const Matrix<S>& x, const Matrix<S>& y) {
  if (x.cols() != y.rows()) throw Error(ErrorKind::InvalidSpec, "matrix product shape mismatch");
  std::vector<S> e;
  e.reserve(x.rows() * y.cols());
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < y.cols(); ++c) {
      S acc = x(r, 0) * y(0, c);
      for (std::size_t k = 1; k < x.cols(); ++k) acc = acc + x(r, k) * y(k, c);
      e.push_back(std::move(acc));
    }
  return Matrix<S>(x.rows(), y.cols(), std::move(e));
}

template <Scalar S>
S trace(const Matrix<S>& m) {
  detail::require_square(m);
  S t = m(0, 0);
  for (std::size_t i = 1; i < m.rows(); ++i) t = t + m(i, i);
  return t;
}

}  // namespace hhrec
