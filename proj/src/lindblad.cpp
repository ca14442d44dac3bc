#include "cpkit/lindblad.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace cpkit {

namespace {

// sum_{alpha,beta} k(alpha, beta) F_beta^* F_alpha over the given index range.
CMatrix annihilation_operator(const CMatrix& k, const OperatorBasis& f,
                              std::size_t lo) {
  const std::size_t n2 = f.dim * f.dim;
  CMatrix acc(f.dim, f.dim);
  for (std::size_t beta = lo; beta < n2; ++beta) {
    const CMatrix left = f.elements[beta].adjoint();
    for (std::size_t alpha = lo; alpha < n2; ++alpha) {
      const cx w = k(alpha, beta);
      if (w == cx(0.0, 0.0)) continue;
      acc += w * (left * f.elements[alpha]);
    }
  }
  return acc;
}

void require_unit_first(const OperatorBasis& f) {
  const double scale = 1.0 / std::sqrt(double(f.dim));
  const CMatrix expected = CMatrix::identity(f.dim) * cx(scale, 0.0);
  if ((f.elements[0] - expected).max_abs() > 1e-9) {
    throw BasisNotUnitFirst("basis element 0 must be I/sqrt(N)");
  }
}

}  // namespace

GeneratorMatrix make_generator(OperatorBasis basis, CMatrix k, double tol) {
  const std::size_t n2 = basis.dim * basis.dim;
  if (!k.square() || k.rows() != n2 || basis.elements.size() != n2) {
    throw DimensionMismatch("generator: k must be N^2 x N^2 over the basis");
  }
  require_orthonormal(basis);
  const double herm_dev = (k - k.adjoint()).max_abs();
  if (!(herm_dev <= tol)) {
    throw NotHermitian("generator: k deviates from Hermitian by " +
                       std::to_string(herm_dev));
  }
  const double tr_dev = std::abs(k.trace());
  if (!(tr_dev <= tol)) {
    throw InvariantViolation("generator: Tr k = " + std::to_string(tr_dev));
  }
  const double op_dev = annihilation_operator(k, basis, 0).max_abs();
  if (!(op_dev <= tol)) {
    throw InvariantViolation(
        "generator: trace-annihilation residual " + std::to_string(op_dev));
  }
  GeneratorMatrix g;
  g.dim = basis.dim;
  g.basis = std::move(basis);
  g.k = std::move(k);
  return g;
}

CMatrix generator_apply(const GeneratorMatrix& k, const CMatrix& rho) {
  const std::size_t n = k.dim;
  if (rho.rows() != n || rho.cols() != n) {
    throw DimensionMismatch("generator_apply: state dimension mismatch");
  }
  const std::size_t n2 = n * n;
  CMatrix acc(n, n);
  for (std::size_t alpha = 0; alpha < n2; ++alpha) {
    const CMatrix left = k.basis.elements[alpha] * rho;
    for (std::size_t beta = 0; beta < n2; ++beta) {
      const cx w = k.k(alpha, beta);
      if (w == cx(0.0, 0.0)) continue;
      acc += w * (left * k.basis.elements[beta].adjoint());
    }
  }
  return acc;
}

CMatrix lindblad_apply(const LindbladForm& l, const CMatrix& rho) {
  const std::size_t n = l.dim;
  if (rho.rows() != n || rho.cols() != n) {
    throw DimensionMismatch("lindblad_apply: state dimension mismatch");
  }
  const cx minus_i(0.0, -1.0);
  CMatrix acc = minus_i * (l.hamiltonian * rho - rho * l.hamiltonian);
  for (std::size_t a = 0; a < l.lindblad_ops.size(); ++a) {
    const double rate = l.rates[a];
    if (rate == 0.0) continue;
    const CMatrix& op = l.lindblad_ops[a];
    const CMatrix op_adj = op.adjoint();
    const CMatrix gram = op_adj * op;
    acc += cx(rate, 0.0) *
           (op * rho * op_adj - cx(0.5, 0.0) * (gram * rho + rho * gram));
  }
  return acc;
}

LindbladForm generator_to_lindblad(const GeneratorMatrix& k) {
  require_unit_first(k.basis);
  const std::size_t n = k.dim;
  const std::size_t n2 = n * n;
  const double sqrt_n = std::sqrt(double(n));

  LindbladForm l;
  l.dim = n;

  // Traceless-sector block -> rates and Lindblad operators.
  const std::size_t nb = n2 - 1;
  if (nb > 0) {
    const CMatrix block = k.k.submatrix(1, 1, nb, nb);
    const HermEig eig = herm_eig(block, 10 * kDefaultTol);
    l.rates = eig.eigenvalues;
    l.lindblad_ops.reserve(nb);
    for (std::size_t a = 0; a < nb; ++a) {
      CMatrix op(n, n);
      for (std::size_t beta = 0; beta < nb; ++beta) {
        op += eig.vectors(beta, a) * k.basis.elements[beta + 1];
      }
      l.lindblad_ops.push_back(std::move(op));
    }
  }

  // First-column entries encode F = G~ - iH, in units of 1/sqrt(N).
  CMatrix f_op(n, n);
  for (std::size_t alpha = 1; alpha < n2; ++alpha) {
    f_op += (k.k(alpha, 0) * cx(1.0 / sqrt_n, 0.0)) * k.basis.elements[alpha];
  }
  l.hamiltonian = (f_op - f_op.adjoint()) * cx(0.0, 0.5);

  // Consistency of the anticommutator part with the trace-annihilation
  // condition; can only fire if the generator was built with a loose tol.
  const cx k00 = k.k(0, 0);
  const CMatrix g_tilde = (f_op + f_op.adjoint()) * cx(0.5, 0.0);
  const CMatrix g_full =
      g_tilde + CMatrix::identity(n) * (k00 * cx(0.5 / double(n), 0.0));
  const CMatrix g_expected =
      annihilation_operator(k.k, k.basis, 1) * cx(-0.5, 0.0);
  const double g_dev = (g_full - g_expected).max_abs();
  if (!(g_dev <= 1e-9 * std::max(1.0, k.k.max_abs()))) {
    throw InvariantViolation("generator_to_lindblad: anticommutator residual " +
                             std::to_string(g_dev));
  }
  return l;
}

GeneratorMatrix lindblad_to_generator(const LindbladForm& l,
                                      const OperatorBasis& f) {
  require_orthonormal(f);
  require_unit_first(f);
  const std::size_t n = f.dim;
  if (l.dim != n) throw DimensionMismatch("lindblad_to_generator: dimension");
  const std::size_t n2 = n * n;
  const std::size_t nb = n2 - 1;
  if (l.rates.size() != nb || l.lindblad_ops.size() != nb) {
    throw DimensionMismatch("lindblad form: need N^2 - 1 rates and operators");
  }
  if ((l.hamiltonian - l.hamiltonian.adjoint()).max_abs() > kDefaultTol) {
    throw InvariantViolation("lindblad form: Hamiltonian not Hermitian");
  }
  for (std::size_t a = 0; a < nb; ++a) {
    if (std::abs(l.lindblad_ops[a].trace()) > kDefaultTol) {
      throw InvariantViolation("lindblad form: operator " + std::to_string(a) +
                               " has nonzero trace");
    }
    for (std::size_t b = a; b < nb; ++b) {
      const cx ip = hs_inner(l.lindblad_ops[a], l.lindblad_ops[b]);
      const cx expect = a == b ? cx(1.0, 0.0) : cx(0.0, 0.0);
      if (std::abs(ip - expect) > kDefaultTol) {
        throw InvariantViolation("lindblad form: operators not orthonormal");
      }
    }
  }

  CMatrix k(n2, n2);

  // Traceless-sector block W Delta W^*.
  if (nb > 0) {
    CMatrix w(nb, nb);
    for (std::size_t beta = 0; beta < nb; ++beta)
      for (std::size_t a = 0; a < nb; ++a)
        w(beta, a) = hs_inner(f.elements[beta + 1], l.lindblad_ops[a]);
    CMatrix block(nb, nb);
    for (std::size_t i = 0; i < nb; ++i)
      for (std::size_t j = 0; j < nb; ++j) {
        cx acc(0.0, 0.0);
        for (std::size_t a = 0; a < nb; ++a)
          acc += w(i, a) * cx(l.rates[a], 0.0) * std::conj(w(j, a));
        block(i, j) = acc;
      }
    for (std::size_t i = 0; i < nb; ++i)
      for (std::size_t j = 0; j < nb; ++j) k(i + 1, j + 1) = block(i, j);
  }

  // k00 from Tr k = 0.
  cx block_trace(0.0, 0.0);
  for (std::size_t i = 1; i < n2; ++i) block_trace += k(i, i);
  k(0, 0) = -block_trace;

  // First column from F = G~ - iH.
  const CMatrix g_full = annihilation_operator(k, f, 1) * cx(-0.5, 0.0);
  const CMatrix g_tilde =
      g_full - CMatrix::identity(n) * (k(0, 0) * cx(0.5 / double(n), 0.0));
  const CMatrix f_op = g_tilde - cx(0.0, 1.0) * l.hamiltonian;
  const double sqrt_n = std::sqrt(double(n));
  for (std::size_t alpha = 1; alpha < n2; ++alpha) {
    const cx coeff = hs_inner(f.elements[alpha], f_op) * cx(sqrt_n, 0.0);
    k(alpha, 0) = coeff;
    k(0, alpha) = std::conj(coeff);
  }

  return make_generator(f, std::move(k));
}

GksOdeTensor gks_ode_tensor(const GeneratorMatrix& k,
                            const StructureConstants& pi) {
  if (pi.dim != k.dim) {
    throw DimensionMismatch("gks_ode_tensor: structure constants dimension");
  }
  const std::size_t n2 = k.dim * k.dim;
  GksOdeTensor out;
  out.n2 = n2;
  out.a.assign(n2 * n2 * n2 * n2, cx(0.0, 0.0));

  // t(gamma, mu, beta) = sum_delta k(gamma, delta) conj(pi(mu, delta, beta))
  std::vector<cx> t(n2 * n2 * n2, cx(0.0, 0.0));
  for (std::size_t gamma = 0; gamma < n2; ++gamma)
    for (std::size_t mu = 0; mu < n2; ++mu)
      for (std::size_t beta = 0; beta < n2; ++beta) {
        cx acc(0.0, 0.0);
        for (std::size_t delta = 0; delta < n2; ++delta)
          acc += k.k(gamma, delta) * std::conj(pi.at(mu, delta, beta));
        t[(gamma * n2 + mu) * n2 + beta] = acc;
      }

  for (std::size_t lambda = 0; lambda < n2; ++lambda)
    for (std::size_t mu = 0; mu < n2; ++mu)
      for (std::size_t alpha = 0; alpha < n2; ++alpha)
        for (std::size_t beta = 0; beta < n2; ++beta) {
          cx acc(0.0, 0.0);
          for (std::size_t gamma = 0; gamma < n2; ++gamma)
            acc += pi.at(lambda, gamma, alpha) * t[(gamma * n2 + mu) * n2 + beta];
          out.at(lambda, mu, alpha, beta) = acc;
        }
  return out;
}

CMatrix ode_tensor_apply(const GksOdeTensor& a, const CMatrix& g) {
  const std::size_t n2 = a.n2;
  if (!g.square() || g.rows() != n2) {
    throw DimensionMismatch("ode_tensor_apply: g shape mismatch");
  }
  CMatrix out(n2, n2);
  for (std::size_t lambda = 0; lambda < n2; ++lambda)
    for (std::size_t mu = 0; mu < n2; ++mu) {
      cx acc(0.0, 0.0);
      for (std::size_t alpha = 0; alpha < n2; ++alpha)
        for (std::size_t beta = 0; beta < n2; ++beta)
          acc += a.at(lambda, mu, alpha, beta) * g(alpha, beta);
      out(lambda, mu) = acc;
    }
  return out;
}

std::vector<GksSample> integrate_gks(
    const std::function<GeneratorMatrix(double)>& k_of_t,
    const OperatorBasis& f, double t_end, std::size_t steps) {
  if (steps == 0) throw Error("integrate_gks: steps must be >= 1");
  const StructureConstants pi = structure_constants(f);
  const double h = t_end / double(steps);

  const auto tensor_at = [&](double t) {
    const GeneratorMatrix k = k_of_t(t);
    if (k.dim != f.dim) {
      throw DimensionMismatch("integrate_gks: generator dimension mismatch");
    }
    return gks_ode_tensor(k, pi);
  };

  std::vector<GksSample> traj;
  traj.reserve(steps + 1);
  CMatrix g = gks(superop_identity(f.dim), f).g;
  traj.push_back({0.0, g});

  for (std::size_t step = 0; step < steps; ++step) {
    const double t = h * double(step);
    const GksOdeTensor a1 = tensor_at(t);
    const GksOdeTensor a2 = tensor_at(t + 0.5 * h);
    const GksOdeTensor a3 = tensor_at(t + h);

    const CMatrix k1 = ode_tensor_apply(a1, g);
    const CMatrix k2 = ode_tensor_apply(a2, g + k1 * cx(0.5 * h, 0.0));
    const CMatrix k3 = ode_tensor_apply(a2, g + k2 * cx(0.5 * h, 0.0));
    const CMatrix k4 = ode_tensor_apply(a3, g + k3 * cx(h, 0.0));
    g += (k1 + k2 * cx(2.0, 0.0) + k3 * cx(2.0, 0.0) + k4) * cx(h / 6.0, 0.0);
    traj.push_back({h * double(step + 1), g});
  }
  return traj;
}

}  // namespace cpkit
