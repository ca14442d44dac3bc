// GKS generator matrices k(t): conversion to and from time-dependent Lindblad
// form, and the ODE for the accumulated evolution's GKS matrix g(t).

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "cpkit/bases.hpp"
#include "cpkit/channels.hpp"
#include "cpkit/linalg.hpp"

namespace cpkit {

/// Hermitian, trace-annihilating coefficient matrix of a generator
/// d rho / dt = sum k(alpha, beta) F_alpha rho F_beta^*.
struct GeneratorMatrix {
  std::size_t dim = 0;
  OperatorBasis basis;
  CMatrix k;
};

/// Validates hermiticity, Tr k = 0 and the operator-level trace-annihilation
/// condition sum k(alpha, beta) F_beta^* F_alpha = 0 before accepting k.
GeneratorMatrix make_generator(OperatorBasis basis, CMatrix k,
                               double tol = kDefaultTol);

CMatrix generator_apply(const GeneratorMatrix& k, const CMatrix& rho);

/// -i[H, rho] + sum_a rate_a (A_a rho A_a^* - {A_a^* A_a, rho}/2) with
/// traceless, HS-orthonormal Lindblad operators A_a.
struct LindbladForm {
  std::size_t dim = 0;
  CMatrix hamiltonian;
  std::vector<double> rates;        // N^2 - 1 of them
  std::vector<CMatrix> lindblad_ops;
};

CMatrix lindblad_apply(const LindbladForm& l, const CMatrix& rho);

/// Requires the basis to start with I/sqrt(N). Rates are the eigenvalues of
/// the traceless-sector block of k, descending; the Lindblad operators follow
/// the eigenvector columns.
LindbladForm generator_to_lindblad(const GeneratorMatrix& k);

GeneratorMatrix lindblad_to_generator(const LindbladForm& l,
                                      const OperatorBasis& f);

/// Contraction A(lambda, mu, alpha, beta) driving dg/dt = A g for a fixed
/// generator matrix k and the basis structure constants.
struct GksOdeTensor {
  std::size_t n2 = 0;
  std::vector<cx> a;

  cx at(std::size_t l, std::size_t m, std::size_t al, std::size_t be) const {
    return a[((l * n2 + m) * n2 + al) * n2 + be];
  }
  cx& at(std::size_t l, std::size_t m, std::size_t al, std::size_t be) {
    return a[((l * n2 + m) * n2 + al) * n2 + be];
  }
};

GksOdeTensor gks_ode_tensor(const GeneratorMatrix& k,
                            const StructureConstants& pi);

CMatrix ode_tensor_apply(const GksOdeTensor& a, const CMatrix& g);

struct GksSample {
  double t = 0.0;
  CMatrix g;
};

/// Fixed-step RK4 for dg/dt = A(t) g starting from the identity channel's
/// GKS matrix in basis f; returns all steps + 1 samples.
std::vector<GksSample> integrate_gks(
    const std::function<GeneratorMatrix(double)>& k_of_t,
    const OperatorBasis& f, double t_end, std::size_t steps);

}  // namespace cpkit
