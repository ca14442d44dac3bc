// cpkit command line: verdicts, representation conversion, isomorphism
// comparison tables and open-system expansion reports, all as JSON.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cpkit/json_io.hpp"
#include "cpkit/opensys.hpp"

namespace {

using namespace cpkit;

constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;  // valid input, negative verdict or domain error
constexpr int kExitInput = 2;

double default_tolerance() {
  if (const char* env = std::getenv("CPKIT_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0.0) return v;
  }
  return kDefaultTol;
}

BasisSpec basis_from_option(const std::string& opt) {
  BasisSpec spec;
  if (opt == "standard") {
    spec.kind = BasisSpec::Kind::standard;
  } else if (opt == "gellmann") {
    spec.kind = BasisSpec::Kind::gellmann;
  } else {
    spec = parse_basis_spec_file(read_file(opt));
  }
  return spec;
}

void emit(const JsonValue& doc, bool pretty) {
  std::cout << doc.dump(pretty) << "\n";
}

int run_check(const std::string& file, const std::string& basis_opt, double tol,
              bool pretty) {
  const ChannelSpec spec = parse_channel_spec(read_file(file));
  const SuperOp s = spec.to_superop();
  const OperatorBasis f = basis_from_option(basis_opt).realize(spec.dim);
  const Verdict v = check(s, f, tol);

  JsonValue doc = JsonValue::object();
  doc.add("hermiticity_preserving", JsonValue::boolean(v.hermiticity_preserving));
  doc.add("trace_preserving", JsonValue::boolean(v.trace_preserving));
  doc.add("completely_positive", JsonValue::boolean(v.completely_positive));
  doc.add("min_eigenvalue", JsonValue::real(v.min_eigenvalue));
  if (v.completely_positive) {
    const KrausSet kraus = kraus_from_gks(gks(s, f), tol);
    doc.add("kraus_rank",
            JsonValue::integer(std::int64_t(kraus.operators.size())));
  }
  emit(doc, pretty);
  return (v.completely_positive && v.trace_preserving) ? kExitOk : kExitVerdict;
}

JsonValue channel_json(const std::string& kind, std::size_t dim,
                       const BasisSpec* basis, JsonValue payload) {
  JsonValue doc = JsonValue::object();
  doc.add("kind", JsonValue::str(kind));
  doc.add("dim", JsonValue::integer(std::int64_t(dim)));
  if (basis != nullptr) {
    if (basis->kind == BasisSpec::Kind::custom) {
      // Embed the elements so the output reparses as a channel file.
      JsonValue elements = JsonValue::array();
      for (const CMatrix& e : basis->custom_elements)
        elements.push(matrix_to_json(e));
      JsonValue custom = JsonValue::object();
      custom.add("custom", std::move(elements));
      doc.add("basis", std::move(custom));
    } else {
      doc.add("basis", JsonValue::str(basis->name()));
    }
  }
  doc.add("payload", std::move(payload));
  return doc;
}

int run_convert(const std::string& file, const std::string& to,
                const std::string& basis_opt, double tol, bool pretty) {
  const ChannelSpec spec = parse_channel_spec(read_file(file));
  const SuperOp s = spec.to_superop();

  if (to == "superop") {
    emit(channel_json("superop", spec.dim, nullptr, matrix_to_json(s.m)),
         pretty);
  } else if (to == "choi") {
    BasisSpec standard;
    standard.kind = BasisSpec::Kind::standard;
    emit(channel_json("choi", spec.dim, &standard, matrix_to_json(choi(s).g)),
         pretty);
  } else if (to == "gks") {
    const BasisSpec basis = basis_from_option(basis_opt);
    const GksMatrix g = gks(s, basis.realize(spec.dim));
    emit(channel_json("gks", spec.dim, &basis, matrix_to_json(g.g)), pretty);
  } else if (to == "kraus") {
    const KrausSet kraus = kraus_from_gks(gks(s, gellmann_basis(spec.dim)), tol);
    JsonValue ops = JsonValue::array();
    for (const CMatrix& op : kraus.operators) ops.push(matrix_to_json(op));
    emit(channel_json("kraus", spec.dim, nullptr, std::move(ops)), pretty);
  } else {
    throw Error("unknown conversion target: " + to);
  }
  return kExitOk;
}

int run_compare(const std::string& file, double tol, bool pretty) {
  const ChannelSpec spec = parse_channel_spec(read_file(file));
  if (spec.dim < 2 || spec.dim > 4) {
    throw ParseError("$.dim: compare supports dimensions 2..4");
  }
  const SuperOp s = spec.to_superop();
  const OperatorBasis std_basis = standard_basis(spec.dim);
  const OperatorBasis gm_basis = gellmann_basis(spec.dim);

  JsonValue rows = JsonValue::array();
  const auto add_row = [&](const std::string& name, const CMatrix& m) {
    JsonValue row = JsonValue::object();
    row.add("isomorphism", JsonValue::str(name));
    row.add("hash", JsonValue::str(matrix_hash(m)));
    const bool hermitian = (m - m.adjoint()).max_abs() <= tol;
    row.add("hermitian", JsonValue::boolean(hermitian));
    const HermEig eig = herm_eig((m + m.adjoint()) * cx(0.5, 0.0), 1.0);
    JsonValue evs = JsonValue::array();
    for (double ev : eig.eigenvalues) evs.push(JsonValue::real(ev));
    row.add("eigenvalues", std::move(evs));
    row.add("psd",
            JsonValue::boolean(hermitian && eig.eigenvalues.back() >= -tol));
    rows.push(std::move(row));
  };

  add_row("choi", choi(s).g);
  add_row("gks/pauli", gks(s, gm_basis).g);
  add_row("dpj", dpj(s, gm_basis));
  add_row("pskh/standard", pskh(s, std_basis));
  add_row("pskh/pauli", pskh(s, gm_basis));
  add_row("fc", fc(s, std_basis));

  JsonValue doc = JsonValue::object();
  doc.add("dim", JsonValue::integer(std::int64_t(spec.dim)));
  doc.add("rows", std::move(rows));
  emit(doc, pretty);
  return kExitOk;
}

const char* provenance_name(Provenance p) {
  return p == Provenance::analytic ? "analytic" : "fitted";
}

int run_expand(const std::string& file, double t_max, int samples,
               bool pretty) {
  if (t_max <= 0.0 || t_max > 1.0) {
    throw ParseError("--t-max must lie in (0, 1]");
  }
  if (samples < 1) throw ParseError("--samples must be >= 1");

  const ModelSpec spec = parse_model_spec(read_file(file));
  const OpenSystemModel model = spec.to_model();
  const OperatorBasis f = gellmann_basis(model.n);
  const Expansion e = expansion(model, f);

  std::vector<double> ts;
  for (int i = 1; i <= samples; ++i) ts.push_back(t_max * double(i) / samples);
  const ExpansionReport report = verify_expansion(model, f, ts);

  JsonValue doc = JsonValue::object();
  JsonValue dims = JsonValue::object();
  dims.add("n", JsonValue::integer(std::int64_t(model.n)));
  dims.add("m", JsonValue::integer(std::int64_t(model.m)));
  doc.add("model", std::move(dims));
  doc.add("g0", matrix_to_json(e.g0));
  doc.add("g1", matrix_to_json(e.g1));
  doc.add("g2", matrix_to_json(e.g2));

  JsonValue prov = JsonValue::array();
  for (const auto& row : e.g2_provenance) {
    JsonValue r = JsonValue::array();
    for (Provenance p : row) r.push(JsonValue::str(provenance_name(p)));
    prov.push(std::move(r));
  }
  doc.add("g2_provenance", std::move(prov));

  JsonValue verify = JsonValue::object();
  JsonValue sample_rows = JsonValue::array();
  for (const ExpansionSample& s : report.samples) {
    JsonValue row = JsonValue::object();
    row.add("t", JsonValue::real(s.t));
    row.add("submatrix_deviation", JsonValue::real(s.submatrix_deviation));
    row.add("rowcol0_deviation", JsonValue::real(s.rowcol_deviation));
    row.add("min_eigenvalue_expansion", JsonValue::real(s.min_eig_expansion));
    row.add("min_eigenvalue_simulated", JsonValue::real(s.min_eig_simulated));
    sample_rows.push(std::move(row));
  }
  verify.add("samples", std::move(sample_rows));
  verify.add("cubic_fit_exponent", JsonValue::real(report.fit_exponent));
  verify.add("cubic_fit_constant", JsonValue::real(report.fit_constant));
  verify.add("rowcol0_fit_exponent", JsonValue::real(report.rowcol_fit_exponent));
  verify.add("g2_submatrix_min_eigenvalue",
             JsonValue::real(report.g2_submatrix_min_eig));
  verify.add("eps1_max_abs", JsonValue::real(report.eps1_max_abs));
  verify.add("eps2_min", JsonValue::real(report.eps2_min));
  verify.add("g2_submatrix_psd", JsonValue::boolean(report.g2_submatrix_psd));
  verify.add("expansion_psd", JsonValue::boolean(report.expansion_psd));
  verify.add("simulated_psd", JsonValue::boolean(report.simulated_psd));
  doc.add("verify", std::move(verify));

  emit(doc, pretty);
  const bool ok =
      report.g2_submatrix_psd && report.expansion_psd && report.simulated_psd;
  return ok ? kExitOk : kExitVerdict;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum channel toolkit: CP/TP verdicts, channel "
               "representation conversion and open-system expansion"};
  app.require_subcommand(1);

  std::string file;
  std::string basis_opt = "standard";
  std::string to;
  double tol = default_tolerance();
  double t_max = 0.1;
  int samples = 5;
  bool pretty = false;

  app.add_flag("--pretty", pretty, "indent JSON output");
  app.fallthrough();

  CLI::App* cmd_check = app.add_subcommand("check", "CP/TP verdicts for a channel");
  cmd_check->add_option("file", file, "channel JSON file")->required();
  cmd_check->add_option("--basis", basis_opt,
                        "standard | gellmann | path to a basis JSON file");
  cmd_check->add_option("--tol", tol, "verdict tolerance");

  CLI::App* cmd_convert =
      app.add_subcommand("convert", "convert between channel representations");
  cmd_convert->add_option("file", file, "channel JSON file")->required();
  cmd_convert->add_option("--to", to, "choi | gks | kraus | superop")->required();
  std::string convert_basis = "gellmann";
  cmd_convert->add_option("--basis", convert_basis, "target basis for gks");
  cmd_convert->add_option("--tol", tol, "Kraus extraction tolerance");

  CLI::App* cmd_compare =
      app.add_subcommand("compare", "evaluate all isomorphisms side by side");
  cmd_compare->add_option("file", file, "channel JSON file")->required();

  CLI::App* cmd_expand =
      app.add_subcommand("expand", "second-order expansion of a model");
  cmd_expand->add_option("file", file, "model JSON file")->required();
  cmd_expand->add_option("--t-max", t_max, "largest sample time (<= 1)");
  cmd_expand->add_option("--samples", samples, "number of sample times");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_check->parsed()) return run_check(file, basis_opt, tol, pretty);
    if (cmd_convert->parsed())
      return run_convert(file, to, convert_basis, tol, pretty);
    if (cmd_compare->parsed()) return run_compare(file, tol, pretty);
    if (cmd_expand->parsed()) return run_expand(file, t_max, samples, pretty);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NotCompletelyPositive& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerdict;
  } catch (const Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
