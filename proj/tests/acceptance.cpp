// Acceptance suite: every release criterion as one pass/fail line.
//
// Usage: acceptance [criterion-number]. With no argument all criteria run.
// Environment: CPKIT_BIN, CPKIT_FIXTURES, CPKIT_GOLDEN locate the CLI binary
// and its data (needed by criterion 9 only).

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cpkit/json_io.hpp"
#include "cpkit/opensys.hpp"

using namespace cpkit;

namespace {

struct Checker {
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void require_le(double value, double bound, const std::string& what) {
    if (!(value <= bound)) {
      failures.push_back(what + ": " + std::to_string(value) + " > " +
                         std::to_string(bound));
    }
  }
  void require_ge(double value, double bound, const std::string& what) {
    if (!(value >= bound)) {
      failures.push_back(what + ": " + std::to_string(value) + " < " +
                         std::to_string(bound));
    }
  }
};

bool exists(const std::string& path) {
  std::ifstream probe(path);
  return probe.good();
}

// Environment wins; otherwise probe the usual run directories.
std::string locate_dir(const char* env_name, const char* probe_file,
                       std::initializer_list<const char*> candidates) {
  if (const char* v = std::getenv(env_name)) return v;
  for (const char* c : candidates) {
    if (exists(std::string(c) + "/" + probe_file)) return c;
  }
  return *candidates.begin();
}

std::string fixtures_dir() {
  return locate_dir("CPKIT_FIXTURES", "demo_model.json",
                    {"fixtures", "../fixtures", "../../fixtures"});
}

std::string golden_dir() {
  return locate_dir("CPKIT_GOLDEN", "compare_transposition.json",
                    {"tests/golden", "../tests/golden", "../../tests/golden"});
}

std::string cli_path() {
  if (const char* v = std::getenv("CPKIT_BIN")) return v;
  for (const char* c :
       {"build/tools/cpkit", "tools/cpkit", "../tools/cpkit"}) {
    if (exists(c)) return c;
  }
  return "cpkit";
}

CMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> dist(0.0, 1.0);
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = cx(dist(rng), dist(rng));
  return m;
}

CMatrix random_hermitian(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  const CMatrix a = random_matrix(rng, n, n);
  return (a + a.adjoint()) * cx(0.5 * scale, 0.0);
}

SuperOp random_superop(std::mt19937_64& rng, std::size_t n) {
  SuperOp s;
  s.dim = n;
  s.m = random_matrix(rng, n * n, n * n);
  return s;
}

KrausSet random_tp_kraus(std::mt19937_64& rng, std::size_t n, std::size_t count) {
  std::vector<CMatrix> ops;
  for (std::size_t i = 0; i < count; ++i) ops.push_back(random_matrix(rng, n, n));
  CMatrix gram(n, n);
  for (const CMatrix& a : ops) gram += a.adjoint() * a;
  const HermEig eig = herm_eig(gram);
  CMatrix inv_sqrt(n, n);
  for (std::size_t i = 0; i < n; ++i)
    inv_sqrt(i, i) = cx(1.0 / std::sqrt(eig.eigenvalues[i]), 0.0);
  const CMatrix w = eig.vectors * inv_sqrt * eig.vectors.adjoint();
  for (CMatrix& a : ops) a = a * w;
  return make_kraus_set(n, std::move(ops));
}

OperatorBasis rotated_basis(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n2 = n * n;
  const CMatrix u = herm_eig(random_hermitian(rng, n2)).vectors;
  const OperatorBasis gm = gellmann_basis(n);
  std::vector<CMatrix> elements;
  for (std::size_t a = 0; a < n2; ++a) {
    CMatrix e(n, n);
    for (std::size_t b = 0; b < n2; ++b) e += u(a, b) * gm.elements[b];
    elements.push_back(std::move(e));
  }
  return custom_basis(n, std::move(elements));
}

SuperOp transposition(std::size_t n) {
  return superop_from_map([](const CMatrix& a) { return a.transpose(); }, n);
}

std::vector<double> herm_part_eigs(const CMatrix& m) {
  return herm_eig((m + m.adjoint()) * cx(0.5, 0.0), 1.0).eigenvalues;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string run_cli(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) throw Error("popen failed");
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    out.append(buf.data(), got);
  pclose(pipe);
  return out;
}

// --------------------------------------------------------------------------
// Criteria.

void criterion_1(Checker& c) {
  const SuperOp phi = transposition(2);

  CMatrix phi_matrix(4, 4);
  phi_matrix(0, 0) = phi_matrix(1, 2) = phi_matrix(2, 1) = phi_matrix(3, 3) =
      cx(1, 0);

  const GksMatrix choi_phi = choi(phi);
  c.require((choi_phi.g - phi_matrix).max_abs() == 0.0,
            "Choi matrix of transposition exactly equals its superop matrix");

  const std::vector<double> choi_eigs = herm_part_eigs(choi_phi.g);
  const std::vector<double> expect_eigs{1.0, 1.0, 1.0, -1.0};
  for (int i = 0; i < 4; ++i)
    c.require_le(std::abs(choi_eigs[i] - expect_eigs[i]), 1e-12,
                 "Choi eigenvalue " + std::to_string(i));

  const OperatorBasis pauli = gellmann_basis(2);
  CMatrix gks_expect(4, 4);
  gks_expect(0, 0) = gks_expect(1, 1) = gks_expect(3, 3) = cx(1, 0);
  gks_expect(2, 2) = cx(-1, 0);
  c.require_le((gks(phi, pauli).g - gks_expect).max_abs(), 1e-12,
               "GKS matrix in the Pauli basis is diag(1,1,-1,1)");

  CMatrix dpj_expect(4, 4);
  dpj_expect(0, 0) = dpj_expect(0, 3) = dpj_expect(3, 0) = dpj_expect(3, 3) =
      cx(1, 0);
  const CMatrix dpj_phi = dpj(phi, pauli);
  c.require_le((dpj_phi - dpj_expect).max_abs(), 1e-12, "dPJ matrix entries");
  const std::vector<double> dpj_eigs = herm_part_eigs(dpj_phi);
  c.require_le(std::abs(dpj_eigs[0] - 2.0), 1e-12, "dPJ top eigenvalue 2");
  for (int i = 1; i < 4; ++i)
    c.require_le(std::abs(dpj_eigs[i]), 1e-12, "dPJ zero eigenvalues");

  c.require_le((fc(phi, standard_basis(2)) - phi_matrix).max_abs(), 1e-12,
               "FC matrix (standard basis)");
  c.require_le((fc(phi, pauli) - phi_matrix).max_abs(), 1e-12,
               "FC matrix (Pauli basis)");
  c.require_le((pskh(phi, pauli) - dpj_phi).max_abs(), 1e-12,
               "PSKH in the Pauli basis equals the dPJ matrix");
}

void criterion_2(Checker& c) {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = rep % 2 == 0 ? 2 : 3;
    const SuperOp s = random_superop(rng, n);
    worst = std::max(worst,
                     (gks(s, standard_basis(n)).g - choi(s).g).max_abs());
  }
  c.require_le(worst, 1e-10, "gks(s, standard) vs choi(s) over 100 cases");
}

void criterion_3(Checker& c) {
  std::mt19937_64 rng(2025);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = rep % 2 == 0 ? 2 : 3;
    const SuperOp s = rep % 3 == 0
                          ? superop_from_kraus(random_tp_kraus(rng, n, 2))
                          : random_superop(rng, n);
    const OperatorBasis bases[3] = {standard_basis(n), gellmann_basis(n),
                                    rotated_basis(n, 3000 + rep)};
    const Verdict ref = check(s, bases[0]);
    const std::vector<double> ref_eigs = herm_part_eigs(gks(s, bases[0]).g);
    for (int b = 1; b < 3; ++b) {
      const Verdict v = check(s, bases[b]);
      c.require(v.hermiticity_preserving == ref.hermiticity_preserving &&
                    v.trace_preserving == ref.trace_preserving &&
                    v.completely_positive == ref.completely_positive,
                "verdicts case " + std::to_string(rep));
      const std::vector<double> eigs = herm_part_eigs(gks(s, bases[b]).g);
      for (std::size_t i = 0; i < eigs.size(); ++i)
        c.require_le(std::abs(eigs[i] - ref_eigs[i]), 1e-9,
                     "sorted eigenvalues case " + std::to_string(rep));
    }
  }
}

void criterion_4(Checker& c) {
  std::mt19937_64 rng(2026);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = rep % 2 == 0 ? 2 : 3;
    const std::size_t count = 1 + rep % 4;
    const KrausSet original = random_tp_kraus(rng, n, count);
    const SuperOp s = superop_from_kraus(original);
    const KrausSet extracted = kraus_from_gks(gks(s, gellmann_basis(n)));
    c.require(extracted.operators.size() <= n * n,
              "at most N^2 operators, case " + std::to_string(rep));
    for (std::size_t a = 0; a < extracted.operators.size(); ++a)
      for (std::size_t b = a + 1; b < extracted.operators.size(); ++b)
        c.require_le(std::abs(hs_inner(extracted.operators[a],
                                       extracted.operators[b])),
                     1e-9, "pairwise orthogonality, case " + std::to_string(rep));
    c.require_le((superop_from_kraus(extracted).m - s.m).max_abs(), 1e-9,
                 "reassembled superoperator, case " + std::to_string(rep));
  }
}

void criterion_5(Checker& c) {
  std::mt19937_64 rng(2027);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t n = rep % 2 == 0 ? 2 : 3;
    const std::size_t nb = n * n - 1;
    const OperatorBasis f = gellmann_basis(n);

    // Random trace-annihilating Hermitian generator via its Lindblad data.
    LindbladForm seed_form;
    seed_form.dim = n;
    seed_form.hamiltonian = random_hermitian(rng, n);
    for (std::size_t a = 0; a < nb; ++a) seed_form.rates.push_back(dist(rng));
    const CMatrix u = herm_eig(random_hermitian(rng, nb)).vectors;
    for (std::size_t a = 0; a < nb; ++a) {
      CMatrix op(n, n);
      for (std::size_t b = 0; b < nb; ++b) op += u(b, a) * f.elements[b + 1];
      seed_form.lindblad_ops.push_back(std::move(op));
    }
    const GeneratorMatrix k = lindblad_to_generator(seed_form, f);

    const LindbladForm converted = generator_to_lindblad(k);
    const GeneratorMatrix reconstructed = lindblad_to_generator(converted, f);
    for (const CMatrix& e : f.elements) {
      const CMatrix direct = generator_apply(k, e);
      c.require_le((lindblad_apply(converted, e) - direct).max_abs(), 1e-9,
                   "Lindblad form action, case " + std::to_string(rep));
      c.require_le((generator_apply(reconstructed, e) - direct).max_abs(), 1e-9,
                   "reconstructed action, case " + std::to_string(rep));
    }
  }
}

void criterion_6(Checker& c) {
  const OperatorBasis f = gellmann_basis(2);
  LindbladForm dephasing;
  dephasing.dim = 2;
  dephasing.hamiltonian = CMatrix(2, 2);
  dephasing.rates = {0.0, 0.0, 0.7};
  dephasing.lindblad_ops = {f.elements[1], f.elements[2], f.elements[3]};
  const GeneratorMatrix k = lindblad_to_generator(dephasing, f);
  const auto k_of_t = [&](double) { return k; };
  const double t_end = 0.5;

  GksMatrix kg;
  kg.dim = 2;
  kg.basis = f;
  kg.g = k.k;
  SuperOp propagated;
  propagated.dim = 2;
  propagated.m = mat_exp(gks_inverse(kg).m * cx(t_end, 0.0));
  const CMatrix expect = gks(propagated, f).g;

  const auto final_error = [&](std::size_t steps) {
    return (integrate_gks(k_of_t, f, t_end, steps).back().g - expect).max_abs();
  };

  c.require_le(final_error(1000), 1e-8, "1000-step error vs mat_exp oracle");

  // Fourth-order check at a resolution where truncation still dominates
  // roundoff (at 1000 steps the error sits at the double-precision floor).
  const double coarse = final_error(16);
  const double fine = final_error(32);
  c.require(fine > 0.0, "fine error nonzero");
  c.require_ge(coarse / fine, 12.0, "halving the step reduces the error");
}

void criterion_7(Checker& c) {
  const std::string fixtures = fixtures_dir();
  std::vector<std::pair<std::string, OpenSystemModel>> models;
  models.emplace_back("bundled demo",
                      parse_model_spec(slurp(fixtures + "/demo_model.json"))
                          .to_model());

  std::mt19937_64 rng(2028);
  const std::size_t dims[5][2] = {{2, 2}, {2, 3}, {3, 2}, {3, 3}, {2, 2}};
  for (int i = 0; i < 5; ++i) {
    const std::size_t n = dims[i][0];
    const std::size_t m = dims[i][1];
    models.emplace_back(
        "random " + std::to_string(i),
        make_model(n, m, random_hermitian(rng, n, 0.6),
                   random_hermitian(rng, m, 0.6),
                   random_hermitian(rng, n * m, 0.6)));
  }

  for (const auto& [name, model] : models) {
    const OperatorBasis f = gellmann_basis(model.n);
    const ExpansionReport r = verify_expansion(model, f, {0.02, 0.01, 0.005});
    c.require_ge(r.fit_exponent, 2.9, name + ": cubic fit exponent");
    c.require_ge(r.g2_submatrix_min_eig, -1e-10, name + ": g2 submatrix PSD");
    c.require_le(r.eps1_max_abs, 1e-10, name + ": eps1 vanishes");
    c.require_ge(r.eps2_min, -1e-9, name + ": eps2 nonnegative");
    for (double t : {0.02, 0.05, 0.1}) {
      const double lo = herm_part_eigs(gks(reduced_superop(model, t), f).g).back();
      c.require_ge(lo, -1e-8, name + ": simulated GKS matrix PSD at t = " +
                                  std::to_string(t));
    }
  }
}

void criterion_8(Checker& c) {
  std::mt19937_64 rng(2029);
  const OpenSystemModel model =
      make_model(2, 2, random_hermitian(rng, 2, 0.8),
                 random_hermitian(rng, 2, 0.8), random_hermitian(rng, 4, 0.8));
  const OperatorBasis f = gellmann_basis(2);
  const double t = 0.3;

  CMatrix rho_env(2, 2);
  rho_env(0, 0) = cx(0.6, 0);
  rho_env(1, 1) = cx(0.4, 0);
  const CMatrix mixed = gks(reduced_superop(model, t, rho_env), f).g;

  OpenSystemModel excited = model;
  excited.env_state_index = 1;
  const CMatrix combo = gks(reduced_superop(model, t), f).g * cx(0.6, 0) +
                        gks(reduced_superop(excited, t), f).g * cx(0.4, 0);
  c.require_le((mixed - combo).max_abs(), 1e-9,
               "mixed-environment GKS matrix vs convex combination");
}

void criterion_9(Checker& c) {
  const std::string fixtures = fixtures_dir();
  const std::string golden = golden_dir();
  const std::string compare_out =
      run_cli("compare " + fixtures + "/transposition.json");
  c.require(compare_out == slurp(golden + "/compare_transposition.json"),
            "compare golden file is byte-identical");
  const std::string expand_out =
      run_cli("expand " + fixtures + "/demo_model.json");
  c.require(expand_out == slurp(golden + "/expand_demo_model.json"),
            "expand golden file is byte-identical");
}

struct Criterion {
  int id;
  const char* title;
  std::function<void(Checker&)> fn;
  double time_limit_s;  // 0 = no limit stated
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "transposition counterexample across all isomorphisms", criterion_1, 1.0},
      {2, "GKS matrix in the standard basis is the Choi matrix", criterion_2, 5.0},
      {3, "verdicts and spectra are basis invariant", criterion_3, 0.0},
      {4, "Kraus extraction round trip", criterion_4, 0.0},
      {5, "generator and Lindblad forms are equivalent", criterion_5, 0.0},
      {6, "GKS matrix ODE matches the exponential oracle", criterion_6, 0.0},
      {7, "second-order open-system expansion", criterion_7, 60.0},
      {8, "environment-state linearity", criterion_8, 0.0},
      {9, "CLI golden files", criterion_9, 0.0},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  int failures = 0;
  for (const Criterion& crit : criteria()) {
    if (only != 0 && crit.id != only) continue;

    Checker checker;
    const auto start = std::chrono::steady_clock::now();
    try {
      crit.fn(checker);
    } catch (const std::exception& e) {
      checker.failures.push_back(std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (crit.time_limit_s > 0.0 && elapsed > crit.time_limit_s) {
      checker.failures.push_back("runtime " + std::to_string(elapsed) +
                                 " s exceeds " +
                                 std::to_string(crit.time_limit_s) + " s");
    }

    if (checker.failures.empty()) {
      std::printf("[PASS] criterion %d: %s (%.2f s)\n", crit.id, crit.title,
                  elapsed);
    } else {
      ++failures;
      std::printf("[FAIL] criterion %d: %s (%.2f s)\n", crit.id, crit.title,
                  elapsed);
      for (const std::string& f : checker.failures)
        std::printf("       - %s\n", f.c_str());
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
