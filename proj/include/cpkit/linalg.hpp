// Dense complex matrix kernels: Hilbert-Schmidt inner product, partial trace,
// Hermitian eigendecomposition (cyclic Jacobi), matrix exponential.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "cpkit/errors.hpp"

namespace cpkit {

using cx = std::complex<double>;

inline constexpr double kDefaultTol = 1e-9;

/// Dense complex matrix with row-major storage. Values are immutable in
/// practice: every operation returns a fresh matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cx(0.0, 0.0)) {}

  /// Builds from nested rows; ragged input is rejected.
  explicit CMatrix(const std::vector<std::vector<cx>>& rows);

  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cx& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  CMatrix operator+(const CMatrix& o) const;
  CMatrix operator-(const CMatrix& o) const;
  CMatrix operator*(const CMatrix& o) const;
  CMatrix operator*(cx s) const;
  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix conj() const;
  cx trace() const;

  /// Max entrywise modulus.
  double max_abs() const;

  CMatrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr,
                    std::size_t nc) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cx> data_;
};

CMatrix operator*(cx s, const CMatrix& m);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Tr(x^* y), conjugate-linear in the first argument.
cx hs_inner(const CMatrix& x, const CMatrix& y);

/// Frobenius norm, sqrt(hs_inner(x, x)).
double hs_norm(const CMatrix& x);

/// True iff the matrices agree entrywise within tol (sup norm).
bool approx_eq(const CMatrix& x, const CMatrix& y, double tol);

enum class TraceSide { first, second };

/// Partial trace of a square matrix on a tensor product with dimensions
/// (dim_first, dim_second); the first factor owns the block index.
CMatrix partial_trace(const CMatrix& x, std::size_t dim_first,
                      std::size_t dim_second, TraceSide which);

struct HermEig {
  std::vector<double> eigenvalues;  // sorted descending
  CMatrix vectors;                  // unitary; columns are eigenvectors
};

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Deterministic: identical input produces identical output, and each
/// eigenvector's first nonzero component is made real positive.
HermEig herm_eig(const CMatrix& h, double herm_tol = kDefaultTol);

/// exp(a) by scaling-and-squaring with a truncated Taylor series.
CMatrix mat_exp(const CMatrix& a);

/// Inverse by Gauss-Jordan elimination with partial pivoting.
CMatrix inverse(const CMatrix& a);

double smallest_singular_value(const CMatrix& a);

}  // namespace cpkit
