#include "cpkit/channels.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace cpkit {

namespace {

CMatrix matrix_unit(std::size_t n, std::size_t i, std::size_t j) {
  CMatrix e(n, n);
  e(i, j) = cx(1.0, 0.0);
  return e;
}

CMatrix unvec(const CMatrix& column_holder, std::size_t col, std::size_t n) {
  CMatrix a(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      a(k, l) = column_holder(k * n + l, col);
  return a;
}

void require_superop_dim(const SuperOp& s) {
  const std::size_t n2 = s.dim * s.dim;
  if (!s.m.square() || s.m.rows() != n2) {
    throw DimensionMismatch("superop matrix must be N^2 x N^2");
  }
}

}  // namespace

SuperOp superop_from_map(const std::function<CMatrix(const CMatrix&)>& action,
                         std::size_t n) {
  SuperOp s;
  s.dim = n;
  s.m = CMatrix(n * n, n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const CMatrix img = action(matrix_unit(n, i, j));
      if (img.rows() != n || img.cols() != n) {
        throw DimensionMismatch("superop_from_map: action changed shape");
      }
      const std::size_t col = i * n + j;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) s.m(k * n + l, col) = img(k, l);
    }
  }
  return s;
}

SuperOp superop_identity(std::size_t n) {
  SuperOp s;
  s.dim = n;
  s.m = CMatrix::identity(n * n);
  return s;
}

CMatrix apply(const SuperOp& s, const CMatrix& a) {
  require_superop_dim(s);
  const std::size_t n = s.dim;
  if (a.rows() != n || a.cols() != n) {
    throw DimensionMismatch("apply: operator dimension mismatch");
  }
  CMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      cx acc(0.0, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          acc += s.m(k * n + l, i * n + j) * a(i, j);
      out(k, l) = acc;
    }
  return out;
}

SuperOp compose(const SuperOp& outer, const SuperOp& inner) {
  if (outer.dim != inner.dim) {
    throw DimensionMismatch("compose: dimensions differ");
  }
  SuperOp s;
  s.dim = outer.dim;
  s.m = outer.m * inner.m;
  return s;
}

SuperOp adjoint(const SuperOp& s) {
  require_superop_dim(s);
  SuperOp out;
  out.dim = s.dim;
  out.m = s.m.adjoint();
  return out;
}

GksMatrix choi(const SuperOp& s) {
  require_superop_dim(s);
  const std::size_t n = s.dim;
  GksMatrix c;
  c.dim = n;
  c.basis = standard_basis(n);
  c.g = CMatrix(n * n, n * n);
  // c[(i,k),(j,l)] = superop[(k,l),(i,j)]
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l)
          c.g(i * n + k, j * n + l) = s.m(k * n + l, i * n + j);
  return c;
}

SuperOp choi_inverse(const GksMatrix& c) {
  if (c.basis.kind != BasisKind::standard) {
    throw WrongBasis("choi_inverse: matrix is not in the standard basis");
  }
  const std::size_t n = c.dim;
  if (!c.g.square() || c.g.rows() != n * n) {
    throw DimensionMismatch("choi_inverse: matrix must be N^2 x N^2");
  }
  SuperOp s;
  s.dim = n;
  s.m = CMatrix(n * n, n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l)
          s.m(k * n + l, i * n + j) = c.g(i * n + k, j * n + l);
  return s;
}

GksMatrix gks(const SuperOp& s, const OperatorBasis& f) {
  require_superop_dim(s);
  if (f.dim != s.dim) throw DimensionMismatch("gks: basis dimension mismatch");
  require_orthonormal(f);
  const std::size_t n = s.dim;
  const std::size_t n2 = n * n;

  // Images of the matrix units, straight from the superoperator columns.
  std::vector<CMatrix> img;
  img.reserve(n2);
  for (std::size_t col = 0; col < n2; ++col) img.push_back(unvec(s.m, col, n));

  std::vector<CMatrix> adj;
  adj.reserve(n2);
  for (const CMatrix& e : f.elements) adj.push_back(e.adjoint());

  GksMatrix out;
  out.dim = n;
  out.basis = f;
  out.g = CMatrix(n2, n2);
  for (std::size_t alpha = 0; alpha < n2; ++alpha) {
    for (std::size_t beta = 0; beta < n2; ++beta) {
      cx acc(0.0, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const CMatrix t = f.elements[alpha] * matrix_unit(n, i, j) * adj[beta];
          acc += hs_inner(t, img[i * n + j]);
        }
      }
      out.g(alpha, beta) = acc;
    }
  }
  return out;
}

SuperOp gks_inverse(const GksMatrix& g) {
  const std::size_t n = g.dim;
  const std::size_t n2 = n * n;
  if (!g.g.square() || g.g.rows() != n2 || g.basis.elements.size() != n2) {
    throw DimensionMismatch("gks_inverse: shape mismatch");
  }
  std::vector<CMatrix> adj;
  adj.reserve(n2);
  for (const CMatrix& e : g.basis.elements) adj.push_back(e.adjoint());
  return superop_from_map(
      [&](const CMatrix& a) {
        CMatrix acc(n, n);
        for (std::size_t alpha = 0; alpha < n2; ++alpha) {
          const CMatrix left = g.basis.elements[alpha] * a;
          for (std::size_t beta = 0; beta < n2; ++beta) {
            const cx w = g.g(alpha, beta);
            if (w == cx(0.0, 0.0)) continue;
            acc += w * (left * adj[beta]);
          }
        }
        return acc;
      },
      n);
}

GksMatrix gks_change_basis(const GksMatrix& g, const OperatorBasis& target) {
  if (g.dim != target.dim) {
    throw DimensionMismatch("gks_change_basis: dimensions differ");
  }
  const CMatrix u = basis_change_unitary(g.basis, target);
  const CMatrix v = u.transpose();
  GksMatrix out;
  out.dim = g.dim;
  out.basis = target;
  out.g = v * g.g * v.adjoint();
  return out;
}

CMatrix dpj(const SuperOp& s, const OperatorBasis& f) {
  require_superop_dim(s);
  if (f.dim != s.dim) throw DimensionMismatch("dpj: basis dimension mismatch");
  require_orthonormal(f);
  const std::size_t n = s.dim;
  CMatrix acc(n * n, n * n);
  for (const CMatrix& e : f.elements) acc += kron(e.adjoint(), apply(s, e));
  return acc;
}

CMatrix pskh(const SuperOp& s, const OperatorBasis& f) {
  require_superop_dim(s);
  if (f.dim != s.dim) throw DimensionMismatch("pskh: basis dimension mismatch");
  require_orthonormal(f);
  const std::size_t n = s.dim;
  CMatrix acc(n * n, n * n);
  for (const CMatrix& e : f.elements) acc += kron(e, apply(s, e));
  return acc;
}

CMatrix fc(const SuperOp& s, const OperatorBasis& f) {
  require_superop_dim(s);
  if (f.dim != s.dim) throw DimensionMismatch("fc: basis dimension mismatch");
  require_orthonormal(f);
  const std::size_t n = s.dim;
  CMatrix acc(n * n, n * n);
  for (const CMatrix& e : f.elements) acc += kron(e.conj(), apply(s, e));
  return acc;
}

Verdict check(const SuperOp& s, const OperatorBasis& f, double tol) {
  const GksMatrix gm = gks(s, f);
  const std::size_t n = s.dim;
  const std::size_t n2 = n * n;

  Verdict v;
  v.hermiticity_preserving = (gm.g - gm.g.adjoint()).max_abs() <= tol;

  CMatrix tp_acc(n, n);
  for (std::size_t alpha = 0; alpha < n2; ++alpha) {
    const CMatrix left = f.elements[alpha].adjoint();
    for (std::size_t beta = 0; beta < n2; ++beta) {
      const cx w = std::conj(gm.g(alpha, beta));
      if (w == cx(0.0, 0.0)) continue;
      tp_acc += w * (left * f.elements[beta]);
    }
  }
  v.trace_preserving = (tp_acc - CMatrix::identity(n)).max_abs() <= tol;

  const CMatrix herm_part = (gm.g + gm.g.adjoint()) * cx(0.5, 0.0);
  const HermEig eig = herm_eig(herm_part, 1.0);  // already Hermitian
  v.min_eigenvalue = eig.eigenvalues.back();
  v.completely_positive = v.hermiticity_preserving && v.min_eigenvalue >= -tol;
  return v;
}

KrausSet make_kraus_set(std::size_t dim, std::vector<CMatrix> operators) {
  KrausSet k;
  k.dim = dim;
  for (CMatrix& op : operators) {
    if (op.rows() != dim || op.cols() != dim) {
      throw DimensionMismatch("kraus set: operator shape mismatch");
    }
    if (hs_norm(op) < 1e-12) continue;
    k.operators.push_back(std::move(op));
  }
  return k;
}

KrausSet kraus_from_gks(const GksMatrix& g, double tol) {
  const std::size_t n = g.dim;
  const std::size_t n2 = n * n;
  const double herm_dev = (g.g - g.g.adjoint()).max_abs();
  if (!(herm_dev <= tol)) {
    throw NotHermitian("kraus_from_gks: g deviates from Hermitian by " +
                       std::to_string(herm_dev));
  }
  const HermEig eig = herm_eig((g.g + g.g.adjoint()) * cx(0.5, 0.0), 1.0);
  for (double ev : eig.eigenvalues) {
    if (ev < -tol) {
      throw NotCompletelyPositive("kraus_from_gks: eigenvalue " +
                                  std::to_string(ev));
    }
  }

  std::vector<CMatrix> ops;
  for (std::size_t gamma = 0; gamma < n2; ++gamma) {
    const double ev = eig.eigenvalues[gamma];
    if (std::abs(ev) <= tol) continue;
    const double w = std::sqrt(ev);
    CMatrix op(n, n);
    for (std::size_t alpha = 0; alpha < n2; ++alpha) {
      const cx coeff = eig.vectors(alpha, gamma) * w;
      if (coeff == cx(0.0, 0.0)) continue;
      op += coeff * g.basis.elements[alpha];
    }
    // Global phase: largest-modulus entry (first in row-major order on ties)
    // made real positive.
    cx anchor(0.0, 0.0);
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (std::abs(op(i, j)) > best) {
          best = std::abs(op(i, j));
          anchor = op(i, j);
        }
    if (best > 0.0) op = op * (std::conj(anchor) / std::abs(anchor));
    ops.push_back(std::move(op));
  }
  return make_kraus_set(n, std::move(ops));
}

SuperOp superop_from_kraus(const KrausSet& k) {
  const std::size_t n = k.dim;
  for (const CMatrix& op : k.operators) {
    if (op.rows() != n || op.cols() != n) {
      throw DimensionMismatch("superop_from_kraus: operator shape mismatch");
    }
  }
  return superop_from_map(
      [&](const CMatrix& x) {
        CMatrix acc(n, n);
        for (const CMatrix& op : k.operators) acc += op * x * op.adjoint();
        return acc;
      },
      n);
}

}  // namespace cpkit
