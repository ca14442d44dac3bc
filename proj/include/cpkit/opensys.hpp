// System-plus-environment simulation, coupling-coefficient extraction, the
// second-order expansion g0 + g1 t + g2 t^2 of the reduced evolution's GKS
// matrix, and its verification.

#pragma once

#include <cstddef>
#include <vector>

#include "cpkit/bases.hpp"
#include "cpkit/channels.hpp"
#include "cpkit/lindblad.hpp"
#include "cpkit/linalg.hpp"

namespace cpkit {

/// Time-independent total Hamiltonian h_s (x) I + I (x) h_e + h_se on the
/// product of an N-dimensional system and an M-dimensional environment; the
/// environment starts in the pure state |env_state_index>.
struct OpenSystemModel {
  std::size_t n = 0;
  std::size_t m = 0;
  CMatrix h_s;
  CMatrix h_e;
  CMatrix h_se;
  std::size_t env_state_index = 0;
};

/// Validates shapes and hermiticity of all Hamiltonian parts.
OpenSystemModel make_model(std::size_t n, std::size_t m, CMatrix h_s,
                           CMatrix h_e, CMatrix h_se,
                           std::size_t env_state_index = 0);

CMatrix total_hamiltonian(const OpenSystemModel& model);

/// Coupling data in a Hermitian basis with F_0 = I/sqrt(N): h holds the
/// system-Hamiltonian components along F_alpha (alpha >= 1), v0 the real
/// coupling components along F_alpha (x) |e><e|, and vplus[g-1][alpha-1] the
/// components along F_alpha (x) |g><e| for the other environment levels.
struct Coefficients {
  std::vector<double> h;
  std::vector<double> v0;
  std::vector<std::vector<cx>> vplus;
};

Coefficients extract_coefficients(const OpenSystemModel& model,
                                  const OperatorBasis& f);

/// Tr_E(U(t) (rho0 (x) rho_E) U(t)^*) with U(t) = exp(-i K t).
CMatrix evolve_reduced(const OpenSystemModel& model, const CMatrix& rho0,
                       double t);

SuperOp reduced_superop(const OpenSystemModel& model, double t);

/// Same map with an explicit (possibly mixed) environment state.
SuperOp reduced_superop(const OpenSystemModel& model, double t,
                        const CMatrix& rho_env);

enum class Provenance { analytic, fitted };

/// Expansion g(t) = g0 + g1 t + g2 t^2 + O(t^3). The g2 block with both
/// indices >= 1 is analytic; its row 0 and column 0 are fitted from the
/// simulator by Richardson-extrapolated central differences.
struct Expansion {
  CMatrix g0;
  CMatrix g1;
  CMatrix g2;
  std::vector<std::vector<Provenance>> g2_provenance;
};

Expansion expansion(const OpenSystemModel& model, const OperatorBasis& f);

struct ExpansionSample {
  double t = 0.0;
  double submatrix_deviation = 0.0;   // |g(t) - (g0+g1 t+g2 t^2)| on indices >= 1
  double rowcol_deviation = 0.0;      // |g(t) - (g0+g1 t)| on row/column 0
  double min_eig_expansion = 0.0;     // of g0 + g1 t + g2 t^2
  double min_eig_simulated = 0.0;     // of the simulated GKS matrix
};

struct ExpansionReport {
  std::vector<ExpansionSample> samples;
  double fit_exponent = 0.0;          // log-log slope of submatrix deviation
  double fit_constant = 0.0;
  double rowcol_fit_exponent = 0.0;
  double g2_submatrix_min_eig = 0.0;
  double eps1_max_abs = 0.0;          // first-order eigenvalue corrections
  double eps2_min = 0.0;              // second-order, over zero eigenvectors
  bool g2_submatrix_psd = false;
  bool expansion_psd = false;
  bool simulated_psd = false;
};

ExpansionReport verify_expansion(const OpenSystemModel& model,
                                 const OperatorBasis& f,
                                 const std::vector<double>& t_samples);

struct GeneratorStats {
  double trace_residual = 0.0;         // |Tr k| before re-centering
  double annihilation_residual = 0.0;  // operator-level residual
};

/// Generator k(t) of the reduced evolution from a central finite difference
/// of the propagator composed with its inverse.
GeneratorMatrix extract_generator(const OpenSystemModel& model,
                                  const OperatorBasis& f, double t, double dt,
                                  GeneratorStats* stats = nullptr);

}  // namespace cpkit
