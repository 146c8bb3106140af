#pragma once

// Exact integer matrix algebra: Smith normal form with transforms, rank,
// determinant, sublattice index and LLL reduction. No floating point in this header.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sparsedecomp {

using Integer = boost::multiprecision::cpp_int;

inline std::int64_t to_int64(const Integer& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("integer does not fit in 64 bits");
  return static_cast<std::int64_t>(v);
}

class IntMatrix {
 public:
  IntMatrix() = default;

  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("IntMatrix dimensions must be positive");
  }

  // Row-major literal: IntMatrix{{1, 2}, {3, 4}}.
  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("IntMatrix dimensions must be positive");
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("ragged IntMatrix literal");
      for (long long v : r) data_.emplace_back(v);
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  // Builds an rows x columns.size() matrix whose j-th column is columns[j].
  template <typename Vec>
  static IntMatrix from_columns(std::size_t rows, const std::vector<Vec>& columns) {
    IntMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows) throw std::invalid_argument("column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = Integer(columns[j][i]);
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<Integer> column(std::size_t c) const {
    std::vector<Integer> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, c);
    return out;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  // Horizontal concatenation [*this | other].
  IntMatrix hconcat(const IntMatrix& other) const {
    if (other.rows_ != rows_) throw std::invalid_argument("hconcat row mismatch");
    IntMatrix out(rows_, cols_ + other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
      for (std::size_t j = 0; j < other.cols_; ++j) out(i, cols_ + j) = other(i, j);
    }
    return out;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Integer& v) { return v == 0; });
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("IntMatrix product dimension mismatch");
    IntMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Integer& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  std::vector<Integer> operator*(const std::vector<Integer>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("IntMatrix-vector dimension mismatch");
    std::vector<Integer> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << (i ? "; " : "");
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? " " : "") << m(i, j);
    }
    return os << ']';
  }

  // Elementary operations used by the normal form; kept public so callers can
  // build unimodular transforms without going through a full reduction.
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  // row[dst] += factor * row[src]
  void add_row(std::size_t dst, std::size_t src, const Integer& factor) {
    if (factor == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += factor * (*this)(src, j);
  }
  // col[dst] += factor * col[src]
  void add_col(std::size_t dst, std::size_t src, const Integer& factor) {
    if (factor == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += factor * (*this)(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

// D = U * A * V with U, V unimodular and D diagonal, d1 | d2 | ... | dr, the
// remaining diagonal entries zero.
struct SmithDecomposition {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;
  std::size_t source_rows = 0;
  std::size_t source_cols = 0;

  std::size_t rank() const {
    std::size_t r = 0;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
      if (D(i, i) != 0) ++r;
    return r;
  }

  std::vector<Integer> diagonal() const {
    std::vector<Integer> d;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
    return d;
  }
};

namespace detail {

inline Integer abs_int(const Integer& v) { return v < 0 ? Integer(-v) : v; }

// Extended gcd on nonnegative-or-signed inputs: returns (g, s, t) with s*a + t*b = g >= 0.
inline std::tuple<Integer, Integer, Integer> extended_gcd(const Integer& a, const Integer& b) {
  Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_r, old_s, old_t};
}

}  // namespace detail

inline SmithDecomposition smith_normal_form(const IntMatrix& A) {
  if (A.empty()) throw std::invalid_argument("smith_normal_form of an empty matrix");
  const std::size_t m = A.rows(), n = A.cols();
  IntMatrix D = A;
  IntMatrix U = IntMatrix::identity(m);
  IntMatrix V = IntMatrix::identity(n);

  auto row_add = [&](std::size_t dst, std::size_t src, const Integer& f) {
    D.add_row(dst, src, f);
    U.add_row(dst, src, f);
  };
  auto col_add = [&](std::size_t dst, std::size_t src, const Integer& f) {
    D.add_col(dst, src, f);
    V.add_col(dst, src, f);
  };

  const std::size_t steps = std::min(m, n);
  std::size_t t = 0;
  for (; t < steps; ++t) {
    while (true) {
      // Pivot: smallest nonzero |entry| of the trailing block, first in row-major order.
      std::optional<std::pair<std::size_t, std::size_t>> pivot;
      Integer best;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (D(i, j) == 0) continue;
          Integer a = detail::abs_int(D(i, j));
          if (!pivot || a < best) {
            best = a;
            pivot = {i, j};
          }
        }
      if (!pivot) break;
      D.swap_rows(t, pivot->first);
      U.swap_rows(t, pivot->first);
      D.swap_cols(t, pivot->second);
      V.swap_cols(t, pivot->second);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (D(i, t) == 0) continue;
        Integer q = D(i, t) / D(t, t);
        row_add(i, t, -q);
        if (D(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (D(t, j) == 0) continue;
        Integer q = D(t, j) / D(t, t);
        col_add(j, t, -q);
        if (D(t, j) != 0) clean = false;
      }
      if (clean) break;
    }
    if (D(t, t) == 0) break;
    if (D(t, t) < 0) {
      D.negate_row(t);
      U.negate_row(t);
    }
  }
  const std::size_t rank = t;

  // Divisibility fix-up on diagonal pairs (i, j): diag(a, b) -> diag(gcd, lcm).
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = i + 1; j < rank; ++j) {
      const Integer a = D(i, i), b = D(j, j);
      if (b % a == 0) continue;
      col_add(i, j, 1);  // [[a,0],[0,b]] -> [[a,0],[b,b]]
      auto [g, s, c] = detail::extended_gcd(a, b);
      const Integer ra = a / g, rb = b / g;
      // Row transform [[s, c], [-b/g, a/g]] has determinant 1.
      for (IntMatrix* M : {&D, &U}) {
        for (std::size_t col = 0; col < M->cols(); ++col) {
          Integer top = s * (*M)(i, col) + c * (*M)(j, col);
          Integer bottom = -rb * (*M)(i, col) + ra * (*M)(j, col);
          (*M)(i, col) = std::move(top);
          (*M)(j, col) = std::move(bottom);
        }
      }
      col_add(j, i, -(D(i, j) / g));
      if (D(j, j) < 0) {
        D.negate_row(j);
        U.negate_row(j);
      }
    }

  return {std::move(U), std::move(D), std::move(V), m, n};
}

// Fraction-free Gaussian elimination (Bareiss); exact for square matrices.
inline Integer determinant(const IntMatrix& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  const std::size_t n = A.rows();
  IntMatrix M = A;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (M(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && M(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      M.swap_rows(k, swap);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) M(i, j) = (M(i, j) * M(k, k) - M(i, k) * M(k, j)) / prev;
    prev = M(k, k);
  }
  return sign * M(n - 1, n - 1);
}

inline std::size_t lattice_rank(const IntMatrix& generators) {
  if (generators.is_zero()) return 0;
  return smith_normal_form(generators).rank();
}

// Index [Z^n : L] of the lattice spanned by the columns, or nullopt when L is not full rank.
inline std::optional<Integer> lattice_index(const IntMatrix& generators) {
  const auto snf = smith_normal_form(generators);
  if (snf.rank() < generators.rows()) return std::nullopt;
  Integer index = 1;
  for (const auto& d : snf.diagonal())
    if (d != 0) index *= d;
  return index;
}

// Inverse of a unimodular matrix, itself an integer matrix. SNF of M is the
// identity, so I = U M V gives M^-1 = V U.
inline IntMatrix inverse_unimodular(const IntMatrix& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("inverse of a non-square matrix");
  const auto snf = smith_normal_form(M);
  for (const auto& d : snf.diagonal())
    if (d != 1) throw std::invalid_argument("matrix is not unimodular");
  return snf.V * snf.U;
}

// Integer solution of M x = b for square nonsingular M, if one exists.
inline std::optional<std::vector<Integer>> solve_integer(const IntMatrix& M, const std::vector<Integer>& b) {
  if (M.rows() != M.cols()) throw std::invalid_argument("solve_integer needs a square matrix");
  const auto snf = smith_normal_form(M);
  if (snf.rank() < M.rows()) throw std::invalid_argument("solve_integer needs a nonsingular matrix");
  // U M V = D  =>  M x = b  <=>  D (V^-1 x) = U b.
  std::vector<Integer> y = snf.U * b;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] % snf.D(i, i) != 0) return std::nullopt;
    y[i] /= snf.D(i, i);
  }
  return snf.V * y;
}

namespace detail {

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Nearest integer to a rational, ties rounded up.
inline Integer round_rational(const boost::multiprecision::cpp_rational& q) {
  const Integer num = boost::multiprecision::numerator(q), den = boost::multiprecision::denominator(q);
  return floor_div(2 * num + den, 2 * den);
}

}  // namespace detail

// LLL reduction (delta = 3/4) of linearly independent integer vectors with
// exact rational Gram-Schmidt. Only unimodular steps are applied, so the
// spanned lattice is unchanged. Throws std::invalid_argument on dependent input.
inline std::vector<std::vector<Integer>> lll_reduce(std::vector<std::vector<Integer>> b) {
  using Q = boost::multiprecision::cpp_rational;
  const std::size_t m = b.size();
  if (m == 0) return b;
  const std::size_t dim = b[0].size();
  std::vector<std::vector<Q>> star(m, std::vector<Q>(dim));
  std::vector<std::vector<Q>> mu(m, std::vector<Q>(m));
  std::vector<Q> norm(m);
  auto gram_schmidt = [&] {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t c = 0; c < dim; ++c) star[i][c] = Q(b[i][c]);
      for (std::size_t j = 0; j < i; ++j) {
        Q dot = 0;
        for (std::size_t c = 0; c < dim; ++c) dot += Q(b[i][c]) * star[j][c];
        mu[i][j] = dot / norm[j];
        for (std::size_t c = 0; c < dim; ++c) star[i][c] -= mu[i][j] * star[j][c];
      }
      norm[i] = 0;
      for (std::size_t c = 0; c < dim; ++c) norm[i] += star[i][c] * star[i][c];
      if (norm[i] == 0) throw std::invalid_argument("lll_reduce needs linearly independent vectors");
    }
  };
  gram_schmidt();
  std::size_t k = 1;
  while (k < m) {
    for (std::size_t j = k; j-- > 0;) {
      const Integer q = detail::round_rational(mu[k][j]);
      if (q == 0) continue;
      for (std::size_t c = 0; c < dim; ++c) b[k][c] -= q * b[j][c];
      gram_schmidt();
    }
    if (norm[k] >= (Q(3, 4) - mu[k][k - 1] * mu[k][k - 1]) * norm[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      gram_schmidt();
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  return b;
}

}  // namespace sparsedecomp
