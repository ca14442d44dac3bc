// Orthonormal operator bases, basis-change unitaries, and structure constants
// of the operator algebra.

#pragma once

#include <cstddef>
#include <vector>

#include "cpkit/linalg.hpp"

namespace cpkit {

enum class BasisKind { standard, gellmann, custom };

/// Ordered family of N^2 operators, orthonormal in the Hilbert-Schmidt sense.
struct OperatorBasis {
  std::size_t dim = 0;  // N; elements are N x N, there are N^2 of them
  BasisKind kind = BasisKind::custom;
  std::vector<CMatrix> elements;
};

/// Matrix units |j><i| with the double index (i, j) flattened as i*N + j.
OperatorBasis standard_basis(std::size_t n);

/// Hermitian basis: I/sqrt(N) first, then the symmetric pair operators
/// (|i><j| + |j><i|)/sqrt(2) for i<j in lexicographic order, then the
/// antisymmetric ones (-i|i><j| + i|j><i|)/sqrt(2), then the diagonal
/// traceless ladder operators.
OperatorBasis gellmann_basis(std::size_t n);

/// Wraps user-supplied elements; orthonormality is validated, never repaired.
OperatorBasis custom_basis(std::size_t n, std::vector<CMatrix> elements);

bool is_orthonormal(const OperatorBasis& f, double tol = 1e-10);
void require_orthonormal(const OperatorBasis& f, double tol = 1e-10);

/// Unique unitary U with F_alpha = sum_a U(alpha, a) G_a.
CMatrix basis_change_unitary(const OperatorBasis& f, const OperatorBasis& g);

/// Coefficients pi(lambda, gamma, alpha) of F_gamma F_alpha expanded in the
/// basis itself.
struct StructureConstants {
  std::size_t dim = 0;  // N
  std::vector<cx> pi;   // (N^2)^3 entries

  cx at(std::size_t lambda, std::size_t gamma, std::size_t alpha) const {
    const std::size_t n2 = dim * dim;
    return pi[(lambda * n2 + gamma) * n2 + alpha];
  }
  cx& at(std::size_t lambda, std::size_t gamma, std::size_t alpha) {
    const std::size_t n2 = dim * dim;
    return pi[(lambda * n2 + gamma) * n2 + alpha];
  }
};

StructureConstants structure_constants(const OperatorBasis& f);

}  // namespace cpkit
