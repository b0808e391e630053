#pragma once

// Dense exact linear algebra over Q.
//
// Every space in the library is a coordinate space Q^n and every subspace is
// carried as a matrix whose columns span it. Ranks, kernels and subquotients
// are computed by Gauss-Jordan elimination on canonical GMP rationals.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spectra/error.hpp"

namespace spectra {

using Rational = mpq_class;

inline Rational parse_rational(const std::string& text) {
  Rational value;
  if (text.empty() || value.set_str(text, 10) != 0) fail(ErrorKind::ParseError, "bad rational '" + text + "'");
  if (value.get_den() == 0) fail(ErrorKind::ParseError, "zero denominator in '" + text + "'");
  value.canonicalize();
  return value;
}

inline std::string format_rational(const Rational& value) { return value.get_str(); }

class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  RatMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) fail(ErrorKind::ValidationError, "matrix entry count does not match shape");
  }
  RatMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) fail(ErrorKind::ValidationError, "ragged matrix literal");
      for (long v : row) data_.emplace_back(v);
    }
  }

  static RatMatrix zero(std::size_t rows, std::size_t cols) { return RatMatrix(rows, cols); }
  static RatMatrix identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static RatMatrix scalar(std::size_t n, const Rational& c) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = c;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Rational> entries() const { return data_; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return sgn(x) == 0; });
  }

  RatMatrix transpose() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::vector<Rational> column(std::size_t j) const {
    std::vector<Rational> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  RatMatrix columns(std::span<const std::size_t> which) const {
    RatMatrix out(rows_, which.size());
    for (std::size_t k = 0; k < which.size(); ++k)
      for (std::size_t i = 0; i < rows_; ++i) out(i, k) = (*this)(i, which[k]);
    return out;
  }

  RatMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    RatMatrix out(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
  }

  void set_block(std::size_t r0, std::size_t c0, const RatMatrix& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  void add_block(std::size_t r0, std::size_t c0, const RatMatrix& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (sgn(b(i, j)) != 0) (*this)(r0 + i, c0 + j) += b(i, j);
  }

  friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
    check_same_shape(a, b);
    RatMatrix out = a;
    for (std::size_t k = 0; k < out.data_.size(); ++k) out.data_[k] += b.data_[k];
    return out;
  }

  friend RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) {
    check_same_shape(a, b);
    RatMatrix out = a;
    for (std::size_t k = 0; k < out.data_.size(); ++k) out.data_[k] -= b.data_[k];
    return out;
  }

  friend RatMatrix operator*(const Rational& c, const RatMatrix& a) {
    RatMatrix out = a;
    for (auto& x : out.data_) x *= c;
    return out;
  }

  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols_ != b.rows_) fail(ErrorKind::ValidationError, "matrix product shape mismatch");
    RatMatrix out(a.rows_, b.cols_);
    Rational tmp;
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& aik = a(i, k);
        if (sgn(aik) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const Rational& bkj = b(k, j);
          if (sgn(bkj) == 0) continue;
          tmp = aik * bkj;
          out(i, j) += tmp;
        }
      }
    return out;
  }

  std::vector<Rational> apply(std::span<const Rational> v) const {
    if (v.size() != cols_) fail(ErrorKind::ValidationError, "matrix-vector shape mismatch");
    std::vector<Rational> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (sgn(v[j]) != 0 && sgn((*this)(i, j)) != 0) out[i] += (*this)(i, j) * v[j];
    return out;
  }

 private:
  static void check_same_shape(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(ErrorKind::ValidationError, "matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

inline RatMatrix hstack(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows()) fail(ErrorKind::ValidationError, "hstack row mismatch");
  RatMatrix out(a.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  return out;
}

inline RatMatrix vstack(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols() != b.cols()) fail(ErrorKind::ValidationError, "vstack column mismatch");
  RatMatrix out(a.rows() + b.rows(), a.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), 0, b);
  return out;
}

inline RatMatrix from_columns(std::size_t ambient, const std::vector<std::vector<Rational>>& cols) {
  RatMatrix out(ambient, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < ambient; ++i) out(i, j) = cols[j][i];
  return out;
}

/// Kronecker product; indices of `a` are major, indices of `b` minor.
inline RatMatrix kron(const RatMatrix& a, const RatMatrix& b) {
  RatMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (sgn(a(i, j)) == 0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          if (sgn(b(k, l)) != 0) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    }
  return out;
}

inline RatMatrix block_diagonal(std::span<const RatMatrix> blocks) {
  std::size_t r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  RatMatrix out(r, c);
  r = c = 0;
  for (const auto& b : blocks) {
    out.set_block(r, c, b);
    r += b.rows();
    c += b.cols();
  }
  return out;
}

struct EchelonForm {
  RatMatrix reduced;
  std::vector<std::size_t> pivots;
};

/// Reduced row echelon form. The pivot in each column is the entry with the
/// smallest numerator+denominator size, which keeps intermediate growth low.
inline EchelonForm rref(RatMatrix m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  Rational factor, tmp;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t best = rows;
    std::size_t best_size = 0;
    for (std::size_t i = row; i < rows; ++i) {
      if (sgn(m(i, col)) == 0) continue;
      std::size_t size = mpz_sizeinbase(m(i, col).get_num_mpz_t(), 2) + mpz_sizeinbase(m(i, col).get_den_mpz_t(), 2);
      if (best == rows || size < best_size) {
        best = i;
        best_size = size;
      }
    }
    if (best == rows) continue;
    if (best != row)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(row, j), m(best, j));
    factor = 1 / m(row, col);
    for (std::size_t j = col; j < cols; ++j)
      if (sgn(m(row, j)) != 0) m(row, j) *= factor;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || sgn(m(i, col)) == 0) continue;
      factor = m(i, col);
      for (std::size_t j = col; j < cols; ++j) {
        if (sgn(m(row, j)) == 0) continue;
        tmp = factor * m(row, j);
        m(i, j) -= tmp;
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const RatMatrix& m) {
  if (m.empty()) return 0;
  // Eliminating along the shorter side is cheaper and gives the same rank.
  if (m.rows() > m.cols()) return rref(m.transpose()).pivots.size();
  return rref(m).pivots.size();
}

inline RatMatrix kernel_basis(const RatMatrix& m) {
  const std::size_t n = m.cols();
  if (m.rows() == 0) return RatMatrix::identity(n);
  auto [r, pivots] = rref(m);
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < n; ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  RatMatrix basis(n, free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    std::size_t f = free_cols[k];
    basis(f, k) = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) basis(pivots[i], k) = -r(i, f);
  }
  return basis;
}

inline RatMatrix image_basis(const RatMatrix& m) {
  if (m.empty()) return RatMatrix(m.rows(), 0);
  auto pivots = rref(m).pivots;
  return m.columns(pivots);
}

/// Column span of `a` contained in column span of `b`.
inline bool span_contains(const RatMatrix& b, const RatMatrix& a) {
  if (a.cols() == 0) return true;
  if (a.rows() != b.rows()) fail(ErrorKind::ValidationError, "span_contains ambient mismatch");
  return rank(hstack(b, a)) == rank(b);
}

/// Solves a * X = rhs when the columns of `a` are independent.
/// Returns nullopt if some column of rhs is outside the span of `a`.
inline std::optional<RatMatrix> solve_independent(const RatMatrix& a, const RatMatrix& rhs) {
  if (a.rows() != rhs.rows()) fail(ErrorKind::ValidationError, "solve shape mismatch");
  const std::size_t n = a.cols();
  if (n == 0) {
    if (!rhs.is_zero()) return std::nullopt;
    return RatMatrix(0, rhs.cols());
  }
  auto [r, pivots] = rref(hstack(a, rhs));
  for (auto p : pivots)
    if (p >= n) return std::nullopt;
  if (pivots.size() != n) fail(ErrorKind::ValidationError, "solve_independent: columns are dependent");
  return r.block(0, n, n, rhs.cols());
}

inline std::optional<RatMatrix> inverse(const RatMatrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  if (rank(m) != m.rows()) return std::nullopt;
  return solve_independent(m, RatMatrix::identity(m.rows()));
}

/// Z/B for subspaces B ⊆ Z of a common ambient space.
struct Subquotient {
  std::size_t ambient_dim = 0;
  RatMatrix cycle_basis;
  RatMatrix boundary_basis;
  RatMatrix representative_basis;

  std::size_t dim() const { return representative_basis.cols(); }

  /// Coordinates of the class of `v` on the representative basis.
  /// Throws NotChainCompatible if v is not in the cycle span.
  std::vector<Rational> coordinates(std::span<const Rational> v) const {
    RatMatrix rhs(ambient_dim, 1);
    for (std::size_t i = 0; i < ambient_dim; ++i) rhs(i, 0) = v[i];
    RatMatrix c = coordinates(rhs);
    return c.column(0);
  }

  RatMatrix coordinates(const RatMatrix& vectors) const {
    auto sol = solve_independent(hstack(representative_basis, boundary_basis), vectors);
    if (!sol) fail(ErrorKind::NotChainCompatible, "vector is not in the cycle span of the subquotient");
    return sol->block(0, 0, dim(), vectors.cols());
  }
};

/// Builds Z/B from spanning sets; the columns need not be independent.
inline Subquotient subquotient(const RatMatrix& cycles, const RatMatrix& boundaries) {
  if (cycles.rows() != boundaries.rows()) fail(ErrorKind::ValidationError, "subquotient ambient mismatch");
  const std::size_t ambient = cycles.rows();
  RatMatrix z = image_basis(cycles);
  RatMatrix b = image_basis(boundaries);
  const auto pivots = rref(hstack(b, z)).pivots;
  std::vector<std::size_t> reps;
  for (auto p : pivots)
    if (p >= b.cols()) reps.push_back(p - b.cols());
  if (pivots.size() != z.cols()) fail(ErrorKind::ContainmentViolation, "boundary span is not contained in cycle span");
  RatMatrix representatives = z.columns(reps);
  return {ambient, std::move(z), std::move(b), std::move(representatives)};
}

/// Matrix of the map Z/B -> Z'/B' induced by f on representative bases.
inline RatMatrix induced_map(const RatMatrix& f, const Subquotient& source, const Subquotient& target) {
  if (f.cols() != source.ambient_dim || f.rows() != target.ambient_dim)
    fail(ErrorKind::NotChainCompatible, "induced_map: shape mismatch");
  RatMatrix fz = f * source.cycle_basis;
  if (!span_contains(target.cycle_basis, fz)) fail(ErrorKind::NotChainCompatible, "f does not map cycles into cycles");
  RatMatrix fb = f * source.boundary_basis;
  if (!span_contains(target.boundary_basis, fb))
    fail(ErrorKind::NotChainCompatible, "f does not map boundaries into boundaries");
  return target.coordinates(f * source.representative_basis);
}

}  // namespace spectra
