#include "cpkit/bases.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace cpkit {

OperatorBasis standard_basis(std::size_t n) {
  OperatorBasis f;
  f.dim = n;
  f.kind = BasisKind::standard;
  f.elements.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      CMatrix e(n, n);
      e(j, i) = cx(1.0, 0.0);  // |j><i| at flattened index i*n + j
      f.elements.push_back(std::move(e));
    }
  }
  return f;
}

OperatorBasis gellmann_basis(std::size_t n) {
  OperatorBasis f;
  f.dim = n;
  f.kind = BasisKind::gellmann;
  f.elements.reserve(n * n);

  f.elements.push_back(CMatrix::identity(n) * cx(1.0 / std::sqrt(double(n)), 0.0));

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      CMatrix e(n, n);
      e(i, j) = cx(inv_sqrt2, 0.0);
      e(j, i) = cx(inv_sqrt2, 0.0);
      f.elements.push_back(std::move(e));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      CMatrix e(n, n);
      e(i, j) = cx(0.0, -inv_sqrt2);
      e(j, i) = cx(0.0, inv_sqrt2);
      f.elements.push_back(std::move(e));
    }
  }
  for (std::size_t l = 1; l < n; ++l) {
    const double factor = 1.0 / std::sqrt(double(l) * double(l + 1));
    CMatrix e(n, n);
    for (std::size_t k = 0; k < l; ++k) e(k, k) = cx(factor, 0.0);
    e(l, l) = cx(-double(l) * factor, 0.0);
    f.elements.push_back(std::move(e));
  }
  return f;
}

OperatorBasis custom_basis(std::size_t n, std::vector<CMatrix> elements) {
  if (elements.size() != n * n) {
    throw DimensionMismatch("custom_basis: expected " + std::to_string(n * n) +
                            " elements, got " + std::to_string(elements.size()));
  }
  for (const CMatrix& e : elements) {
    if (e.rows() != n || e.cols() != n) {
      throw DimensionMismatch("custom_basis: element shape mismatch");
    }
  }
  OperatorBasis f;
  f.dim = n;
  f.kind = BasisKind::custom;
  f.elements = std::move(elements);
  require_orthonormal(f);
  return f;
}

bool is_orthonormal(const OperatorBasis& f, double tol) {
  const std::size_t n2 = f.dim * f.dim;
  if (f.elements.size() != n2) return false;
  for (std::size_t a = 0; a < n2; ++a) {
    for (std::size_t b = a; b < n2; ++b) {
      const cx ip = hs_inner(f.elements[a], f.elements[b]);
      const cx expect = a == b ? cx(1.0, 0.0) : cx(0.0, 0.0);
      if (std::abs(ip - expect) > tol) return false;
    }
  }
  return true;
}

void require_orthonormal(const OperatorBasis& f, double tol) {
  if (!is_orthonormal(f, tol)) {
    throw NonOrthonormalBasis("operator basis fails orthonormality at tol " +
                              std::to_string(tol));
  }
}

CMatrix basis_change_unitary(const OperatorBasis& f, const OperatorBasis& g) {
  if (f.dim != g.dim) {
    throw DimensionMismatch("basis_change_unitary: dimensions differ");
  }
  require_orthonormal(f);
  require_orthonormal(g);
  const std::size_t n2 = f.dim * f.dim;
  CMatrix u(n2, n2);
  for (std::size_t a = 0; a < n2; ++a)
    for (std::size_t b = 0; b < n2; ++b)
      u(a, b) = hs_inner(g.elements[b], f.elements[a]);
  return u;
}

StructureConstants structure_constants(const OperatorBasis& f) {
  require_orthonormal(f);
  const std::size_t n2 = f.dim * f.dim;
  StructureConstants sc;
  sc.dim = f.dim;
  sc.pi.assign(n2 * n2 * n2, cx(0.0, 0.0));
  for (std::size_t gamma = 0; gamma < n2; ++gamma) {
    for (std::size_t alpha = 0; alpha < n2; ++alpha) {
      const CMatrix prod = f.elements[gamma] * f.elements[alpha];
      for (std::size_t lambda = 0; lambda < n2; ++lambda) {
        sc.at(lambda, gamma, alpha) = hs_inner(f.elements[lambda], prod);
      }
    }
  }
  return sc;
}

}  // namespace cpkit
