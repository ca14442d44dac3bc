// Superoperators and the Choi / GKS / dePillis-Jamiolkowski / PSKH /
// Frembs-Cavalcanti isomorphisms, with CP/TP verdicts and Kraus extraction.

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "cpkit/bases.hpp"
#include "cpkit/linalg.hpp"

namespace cpkit {

/// Linear map on N x N operators, stored as an N^2 x N^2 matrix: the column
/// i*N + j holds vec of the image of |i><j|, with vec(A)[k*N + l] = A(k, l).
struct SuperOp {
  std::size_t dim = 0;
  CMatrix m;
};

SuperOp superop_from_map(const std::function<CMatrix(const CMatrix&)>& action,
                         std::size_t n);
SuperOp superop_identity(std::size_t n);

CMatrix apply(const SuperOp& s, const CMatrix& a);

/// Composition outer . inner (inner acts first).
SuperOp compose(const SuperOp& outer, const SuperOp& inner);

/// Hilbert-Schmidt adjoint: hs_inner(x, s(y)) == hs_inner(adjoint(s)(x), y).
SuperOp adjoint(const SuperOp& s);

/// Coefficient matrix g of a superoperator in an operator basis:
/// E(A) = sum g(alpha, beta) F_alpha A F_beta^*. In the standard basis this
/// is the Choi matrix.
struct GksMatrix {
  std::size_t dim = 0;
  OperatorBasis basis;
  CMatrix g;
};

/// Choi matrix, indexed row i*N + k, column j*N + l.
GksMatrix choi(const SuperOp& s);
SuperOp choi_inverse(const GksMatrix& c);

GksMatrix gks(const SuperOp& s, const OperatorBasis& f);
SuperOp gks_inverse(const GksMatrix& g);
GksMatrix gks_change_basis(const GksMatrix& g, const OperatorBasis& target);

/// dePillis-Jamiolkowski matrix sum_a F_a^* (x) E(F_a); basis-independent.
CMatrix dpj(const SuperOp& s, const OperatorBasis& f);

/// Paulsen-Shultz-Kye-Han matrix sum_a F_a (x) E(F_a); basis-dependent.
CMatrix pskh(const SuperOp& s, const OperatorBasis& f);

/// Frembs-Cavalcanti matrix sum_a conj(F_a) (x) E(F_a); basis-independent.
CMatrix fc(const SuperOp& s, const OperatorBasis& f);

struct Verdict {
  bool hermiticity_preserving = false;
  bool trace_preserving = false;
  bool completely_positive = false;
  double min_eigenvalue = 0.0;
};

Verdict check(const SuperOp& s, const OperatorBasis& f,
              double tol = kDefaultTol);

/// Kraus operators with weights absorbed; operators of negligible norm are
/// dropped at construction.
struct KrausSet {
  std::size_t dim = 0;
  std::vector<CMatrix> operators;
};

KrausSet make_kraus_set(std::size_t dim, std::vector<CMatrix> operators);

/// Spectral Kraus extraction: eigenvalues of g below tol are clamped away,
/// remaining negative ones are rejected. Output operators are pairwise
/// HS-orthogonal, at most N^2 of them, each phased so its largest-modulus
/// entry is real positive.
KrausSet kraus_from_gks(const GksMatrix& g, double tol = kDefaultTol);

SuperOp superop_from_kraus(const KrausSet& k);

}  // namespace cpkit
