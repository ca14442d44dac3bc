#include "cpkit/opensys.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace cpkit {

namespace {

constexpr double kHermTol = 1e-10;

void require_hermitian_part(const CMatrix& h, const char* name) {
  if ((h - h.adjoint()).max_abs() > kHermTol) {
    throw NotHermitian(std::string(name) + " is not Hermitian");
  }
}

void require_hermitian_unit_basis(const OperatorBasis& f) {
  require_orthonormal(f);
  const double scale = 1.0 / std::sqrt(double(f.dim));
  if ((f.elements[0] - CMatrix::identity(f.dim) * cx(scale, 0.0)).max_abs() >
      1e-9) {
    throw BasisNotUnitFirst("basis element 0 must be I/sqrt(N)");
  }
  for (const CMatrix& e : f.elements) {
    if ((e - e.adjoint()).max_abs() > kHermTol) {
      throw NotHermitian("basis must consist of Hermitian operators");
    }
  }
}

CMatrix propagator(const OpenSystemModel& model, double t) {
  const CMatrix k = total_hamiltonian(model);
  return mat_exp(k * cx(0.0, -t));
}

CMatrix env_pure_state(const OpenSystemModel& model) {
  CMatrix rho(model.m, model.m);
  rho(model.env_state_index, model.env_state_index) = cx(1.0, 0.0);
  return rho;
}

CMatrix reduce(const OpenSystemModel& model, const CMatrix& u,
               const CMatrix& x, const CMatrix& rho_env) {
  const CMatrix total = u * kron(x, rho_env) * u.adjoint();
  return partial_trace(total, model.n, model.m, TraceSide::second);
}

// Least-squares slope/intercept of log(y) against log(x); y floored away
// from zero so degenerate inputs stay finite.
void loglog_fit(const std::vector<double>& x, const std::vector<double>& y,
                double* slope, double* constant) {
  const std::size_t n = x.size();
  if (n == 0) {
    *slope = 0.0;
    *constant = 0.0;
    return;
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(std::max(y[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = double(n) * sxx - sx * sx;
  *slope = denom != 0.0 ? (double(n) * sxy - sx * sy) / denom : 0.0;
  *constant = std::exp((sy - *slope * sx) / double(n));
}

}  // namespace

OpenSystemModel make_model(std::size_t n, std::size_t m, CMatrix h_s,
                           CMatrix h_e, CMatrix h_se,
                           std::size_t env_state_index) {
  if (n == 0 || m == 0) throw DimensionMismatch("model: dimensions must be >= 1");
  if (h_s.rows() != n || h_s.cols() != n) {
    throw DimensionMismatch("model: h_s must be N x N");
  }
  if (h_e.rows() != m || h_e.cols() != m) {
    throw DimensionMismatch("model: h_e must be M x M");
  }
  if (h_se.rows() != n * m || h_se.cols() != n * m) {
    throw DimensionMismatch("model: h_se must be (N*M) x (N*M)");
  }
  if (env_state_index >= m) {
    throw DimensionMismatch("model: env_state_index out of range");
  }
  require_hermitian_part(h_s, "h_s");
  require_hermitian_part(h_e, "h_e");
  require_hermitian_part(h_se, "h_se");

  OpenSystemModel model;
  model.n = n;
  model.m = m;
  model.h_s = std::move(h_s);
  model.h_e = std::move(h_e);
  model.h_se = std::move(h_se);
  model.env_state_index = env_state_index;
  require_hermitian_part(total_hamiltonian(model), "total Hamiltonian");
  return model;
}

CMatrix total_hamiltonian(const OpenSystemModel& model) {
  return kron(model.h_s, CMatrix::identity(model.m)) +
         kron(CMatrix::identity(model.n), model.h_e) + model.h_se;
}

Coefficients extract_coefficients(const OpenSystemModel& model,
                                  const OperatorBasis& f) {
  if (f.dim != model.n) {
    throw DimensionMismatch("extract_coefficients: basis dimension mismatch");
  }
  require_hermitian_unit_basis(f);
  require_hermitian_part(model.h_s, "h_s");
  require_hermitian_part(model.h_se, "h_se");

  const std::size_t n2 = model.n * model.n;
  const std::size_t e = model.env_state_index;

  // Environment levels reordered so the initial state plays the role of 0.
  std::vector<std::size_t> levels;
  levels.push_back(e);
  for (std::size_t g = 0; g < model.m; ++g)
    if (g != e) levels.push_back(g);

  Coefficients c;
  c.h.resize(n2 - 1);
  c.v0.resize(n2 - 1);
  c.vplus.assign(model.m - 1, std::vector<cx>(n2 - 1, cx(0.0, 0.0)));

  for (std::size_t alpha = 1; alpha < n2; ++alpha) {
    c.h[alpha - 1] = hs_inner(f.elements[alpha], model.h_s).real();
    for (std::size_t g = 0; g < model.m; ++g) {
      CMatrix env_op(model.m, model.m);
      env_op(levels[g], e) = cx(1.0, 0.0);  // |level_g><e|
      const cx v = hs_inner(kron(f.elements[alpha], env_op), model.h_se);
      if (g == 0) {
        c.v0[alpha - 1] = v.real();
      } else {
        c.vplus[g - 1][alpha - 1] = v;
      }
    }
  }
  return c;
}

CMatrix evolve_reduced(const OpenSystemModel& model, const CMatrix& rho0,
                       double t) {
  if (rho0.rows() != model.n || rho0.cols() != model.n) {
    throw DimensionMismatch("evolve_reduced: state dimension mismatch");
  }
  if ((rho0 - rho0.adjoint()).max_abs() > 1e-9) {
    throw InvalidState("evolve_reduced: state not Hermitian");
  }
  if (std::abs(rho0.trace() - cx(1.0, 0.0)) > 1e-9) {
    throw InvalidState("evolve_reduced: state trace != 1");
  }
  const HermEig eig = herm_eig((rho0 + rho0.adjoint()) * cx(0.5, 0.0), 1.0);
  if (eig.eigenvalues.back() < -1e-9) {
    throw InvalidState("evolve_reduced: state eigenvalue " +
                       std::to_string(eig.eigenvalues.back()));
  }
  const CMatrix u = propagator(model, t);
  return reduce(model, u, rho0, env_pure_state(model));
}

SuperOp reduced_superop(const OpenSystemModel& model, double t) {
  return reduced_superop(model, t, env_pure_state(model));
}

SuperOp reduced_superop(const OpenSystemModel& model, double t,
                        const CMatrix& rho_env) {
  if (rho_env.rows() != model.m || rho_env.cols() != model.m) {
    throw DimensionMismatch("reduced_superop: environment state dimension");
  }
  if ((rho_env - rho_env.adjoint()).max_abs() > 1e-9 ||
      std::abs(rho_env.trace() - cx(1.0, 0.0)) > 1e-9) {
    throw InvalidState("reduced_superop: invalid environment state");
  }
  const HermEig env_eig =
      herm_eig((rho_env + rho_env.adjoint()) * cx(0.5, 0.0), 1.0);
  if (env_eig.eigenvalues.back() < -1e-9) {
    throw InvalidState("reduced_superop: environment state eigenvalue " +
                       std::to_string(env_eig.eigenvalues.back()));
  }
  const CMatrix u = propagator(model, t);
  return superop_from_map(
      [&](const CMatrix& unit) { return reduce(model, u, unit, rho_env); },
      model.n);
}

Expansion expansion(const OpenSystemModel& model, const OperatorBasis& f) {
  require_hermitian_unit_basis(f);
  const Coefficients c = extract_coefficients(model, f);
  const std::size_t n2 = model.n * model.n;
  const double sqrt_n = std::sqrt(double(model.n));

  Expansion e;
  e.g0 = CMatrix(n2, n2);
  e.g0(0, 0) = cx(double(model.n), 0.0);

  e.g1 = CMatrix(n2, n2);
  for (std::size_t alpha = 1; alpha < n2; ++alpha) {
    const double w = sqrt_n * (c.h[alpha - 1] + c.v0[alpha - 1]);
    e.g1(0, alpha) = cx(0.0, w);
    e.g1(alpha, 0) = cx(0.0, -w);
  }

  e.g2 = CMatrix(n2, n2);
  for (std::size_t alpha = 1; alpha < n2; ++alpha) {
    const double wa = c.h[alpha - 1] + c.v0[alpha - 1];
    for (std::size_t beta = 1; beta < n2; ++beta) {
      const double wb = c.h[beta - 1] + c.v0[beta - 1];
      cx acc(wa * wb, 0.0);
      for (std::size_t g = 0; g + 1 < model.m; ++g) {
        acc += c.vplus[g][alpha - 1] * std::conj(c.vplus[g][beta - 1]);
      }
      e.g2(alpha, beta) = acc;
    }
  }

  // Row and column 0 of g2 from the simulator: Richardson-extrapolated
  // central second differences.
  const double h = 0.01;
  const CMatrix g_zero = gks(reduced_superop(model, 0.0), f).g;
  const auto second_diff = [&](double step) {
    const CMatrix plus = gks(reduced_superop(model, step), f).g;
    const CMatrix minus = gks(reduced_superop(model, -step), f).g;
    return (plus + minus - g_zero * cx(2.0, 0.0)) *
           cx(0.5 / (step * step), 0.0);
  };
  const CMatrix d1 = second_diff(h);
  const CMatrix d2 = second_diff(0.5 * h);
  const CMatrix fitted = (d2 * cx(4.0, 0.0) - d1) * cx(1.0 / 3.0, 0.0);
  e.g2(0, 0) = cx(fitted(0, 0).real(), 0.0);
  for (std::size_t beta = 1; beta < n2; ++beta) {
    const cx v = (fitted(0, beta) + std::conj(fitted(beta, 0))) * cx(0.5, 0.0);
    e.g2(0, beta) = v;
    e.g2(beta, 0) = std::conj(v);
  }

  e.g2_provenance.assign(n2, std::vector<Provenance>(n2, Provenance::analytic));
  for (std::size_t i = 0; i < n2; ++i) {
    e.g2_provenance[0][i] = Provenance::fitted;
    e.g2_provenance[i][0] = Provenance::fitted;
  }
  return e;
}

ExpansionReport verify_expansion(const OpenSystemModel& model,
                                 const OperatorBasis& f,
                                 const std::vector<double>& t_samples) {
  const Expansion e = expansion(model, f);
  const std::size_t n2 = model.n * model.n;

  ExpansionReport report;
  std::vector<double> ts, sub_devs, rowcol_devs;
  double min_expansion = 0.0;
  double min_simulated = 0.0;

  for (double t : t_samples) {
    const CMatrix sim = gks(reduced_superop(model, t), f).g;
    const CMatrix pred =
        e.g0 + e.g1 * cx(t, 0.0) + e.g2 * cx(t * t, 0.0);

    ExpansionSample sample;
    sample.t = t;
    const CMatrix diff = sim - pred;
    for (std::size_t a = 1; a < n2; ++a)
      for (std::size_t b = 1; b < n2; ++b)
        sample.submatrix_deviation =
            std::max(sample.submatrix_deviation, std::abs(diff(a, b)));
    const CMatrix first_order = sim - e.g0 - e.g1 * cx(t, 0.0);
    for (std::size_t i = 0; i < n2; ++i) {
      sample.rowcol_deviation =
          std::max(sample.rowcol_deviation, std::abs(first_order(0, i)));
      sample.rowcol_deviation =
          std::max(sample.rowcol_deviation, std::abs(first_order(i, 0)));
    }
    sample.min_eig_expansion =
        herm_eig((pred + pred.adjoint()) * cx(0.5, 0.0), 1.0).eigenvalues.back();
    sample.min_eig_simulated =
        herm_eig((sim + sim.adjoint()) * cx(0.5, 0.0), 1.0).eigenvalues.back();

    min_expansion = std::min(min_expansion, sample.min_eig_expansion);
    min_simulated = std::min(min_simulated, sample.min_eig_simulated);
    ts.push_back(t);
    sub_devs.push_back(sample.submatrix_deviation);
    rowcol_devs.push_back(sample.rowcol_deviation);
    report.samples.push_back(sample);
  }

  loglog_fit(ts, sub_devs, &report.fit_exponent, &report.fit_constant);
  double rc_const = 0.0;
  loglog_fit(ts, rowcol_devs, &report.rowcol_fit_exponent, &rc_const);

  if (n2 > 1) {
    const CMatrix sub = e.g2.submatrix(1, 1, n2 - 1, n2 - 1);
    report.g2_submatrix_min_eig =
        herm_eig((sub + sub.adjoint()) * cx(0.5, 0.0), 1.0).eigenvalues.back();
  }

  // Eigenvalue perturbation: first- and second-order corrections on the
  // degenerate zero eigenspace of g0 (and the dominant vector for eps1).
  const HermEig g0_eig = herm_eig(e.g0, 1.0);
  double eps2_min = 0.0;
  bool have_eps2 = false;
  for (std::size_t k = 0; k < n2; ++k) {
    CMatrix phi(n2, 1);
    for (std::size_t r = 0; r < n2; ++r) phi(r, 0) = g0_eig.vectors(r, k);
    const CMatrix e1 = phi.adjoint() * (e.g1 * phi);
    report.eps1_max_abs = std::max(report.eps1_max_abs, std::abs(e1(0, 0)));
    if (std::abs(g0_eig.eigenvalues[k]) <= 1e-9) {
      const CMatrix e2 = phi.adjoint() * (e.g2 * phi);
      const double val = e2(0, 0).real();
      eps2_min = have_eps2 ? std::min(eps2_min, val) : val;
      have_eps2 = true;
    }
  }
  report.eps2_min = have_eps2 ? eps2_min : 0.0;

  report.g2_submatrix_psd = report.g2_submatrix_min_eig >= -1e-10;
  report.expansion_psd = min_expansion >= -1e-7;
  report.simulated_psd = min_simulated >= -1e-8;
  return report;
}

GeneratorMatrix extract_generator(const OpenSystemModel& model,
                                  const OperatorBasis& f, double t, double dt,
                                  GeneratorStats* stats) {
  if (dt <= 0.0) throw Error("extract_generator: dt must be positive");
  const SuperOp v_now = reduced_superop(model, t);
  if (smallest_singular_value(v_now.m) < 1e-12) {
    throw SingularPropagator("propagator singular at t = " + std::to_string(t));
  }
  const SuperOp v_plus = reduced_superop(model, t + dt);
  const SuperOp v_minus = reduced_superop(model, t - dt);
  const CMatrix v_dot = (v_plus.m - v_minus.m) * cx(0.5 / dt, 0.0);

  SuperOp k_super;
  k_super.dim = model.n;
  k_super.m = v_dot * inverse(v_now.m);

  const std::size_t n2 = model.n * model.n;
  CMatrix k_raw = gks(k_super, f).g;
  k_raw = (k_raw + k_raw.adjoint()) * cx(0.5, 0.0);

  const double trace_residual = std::abs(k_raw.trace());
  k_raw -= CMatrix::identity(n2) * (k_raw.trace() * cx(1.0 / double(n2), 0.0));

  CMatrix annihi(model.n, model.n);
  for (std::size_t beta = 0; beta < n2; ++beta) {
    const CMatrix left = f.elements[beta].adjoint();
    for (std::size_t alpha = 0; alpha < n2; ++alpha) {
      if (k_raw(alpha, beta) == cx(0.0, 0.0)) continue;
      annihi += k_raw(alpha, beta) * (left * f.elements[alpha]);
    }
  }
  if (stats != nullptr) {
    stats->trace_residual = trace_residual;
    stats->annihilation_residual = annihi.max_abs();
  }

  // Invariants hold only to the finite-difference error, so validate at a
  // tolerance scaled with dt^2.
  const double tol = std::max(kDefaultTol, 1e3 * dt * dt);
  return make_generator(f, std::move(k_raw), tol);
}

}  // namespace cpkit
