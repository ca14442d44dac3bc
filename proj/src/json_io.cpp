#include "cpkit/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cpkit {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Writer.

JsonValue JsonValue::null() { return JsonValue(); }

JsonValue JsonValue::boolean(bool b) {
  JsonValue v;
  v.v_ = b;
  return v;
}

JsonValue JsonValue::integer(std::int64_t i) {
  JsonValue v;
  v.v_ = i;
  return v;
}

JsonValue JsonValue::real(double d) {
  if (!std::isfinite(d)) throw Error("json writer: non-finite number");
  JsonValue v;
  v.v_ = d;
  return v;
}

JsonValue JsonValue::str(std::string s) {
  JsonValue v;
  v.v_ = std::move(s);
  return v;
}

JsonValue JsonValue::array() {
  JsonValue v;
  v.v_ = std::vector<JsonValue>{};
  return v;
}

JsonValue JsonValue::object() {
  JsonValue v;
  v.v_ = std::vector<std::pair<std::string, JsonValue>>{};
  return v;
}

void JsonValue::push(JsonValue v) {
  std::get<std::vector<JsonValue>>(v_).push_back(std::move(v));
}

void JsonValue::add(std::string key, JsonValue v) {
  std::get<std::vector<std::pair<std::string, JsonValue>>>(v_).emplace_back(
      std::move(key), std::move(v));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void write_indent(std::string& out, int indent) {
  out += '\n';
  out.append(std::size_t(indent) * 2, ' ');
}

}  // namespace

void JsonValue::write(std::string& out, bool pretty, int indent) const {
  if (std::holds_alternative<std::monostate>(v_)) {
    out += "null";
  } else if (const bool* b = std::get_if<bool>(&v_)) {
    out += *b ? "true" : "false";
  } else if (const std::int64_t* i = std::get_if<std::int64_t>(&v_)) {
    out += std::to_string(*i);
  } else if (const double* d = std::get_if<double>(&v_)) {
    out += format_double(*d);
  } else if (const std::string* s = std::get_if<std::string>(&v_)) {
    write_escaped(out, *s);
  } else if (const auto* arr = std::get_if<std::vector<JsonValue>>(&v_)) {
    out += '[';
    bool first = true;
    for (const JsonValue& v : *arr) {
      if (!first) out += ',';
      first = false;
      if (pretty) write_indent(out, indent + 1);
      v.write(out, pretty, indent + 1);
    }
    if (pretty && !arr->empty()) write_indent(out, indent);
    out += ']';
  } else {
    const auto& obj =
        std::get<std::vector<std::pair<std::string, JsonValue>>>(v_);
    out += '{';
    bool first = true;
    for (const auto& [key, v] : obj) {
      if (!first) out += ',';
      first = false;
      if (pretty) write_indent(out, indent + 1);
      write_escaped(out, key);
      out += ':';
      if (pretty) out += ' ';
      v.write(out, pretty, indent + 1);
    }
    if (pretty && !obj.empty()) write_indent(out, indent);
    out += '}';
  }
}

std::string JsonValue::dump(bool pretty) const {
  std::string out;
  write(out, pretty, 0);
  return out;
}

JsonValue complex_to_json(cx v) {
  JsonValue pair = JsonValue::array();
  pair.push(JsonValue::real(v.real()));
  pair.push(JsonValue::real(v.imag()));
  return pair;
}

JsonValue matrix_to_json(const CMatrix& m) {
  JsonValue rows = JsonValue::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    JsonValue row = JsonValue::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push(complex_to_json(m(i, j)));
    rows.push(std::move(row));
  }
  return rows;
}

std::string matrix_hash(const CMatrix& m) {
  std::uint64_t h = 1469598103934665603ULL;
  const auto mix = [&h](const std::string& s) {
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ULL;
    }
  };
  mix(std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ";");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      mix(format_double(m(i, j).real()));
      mix(",");
      mix(format_double(m(i, j).imag()));
      mix(";");
    }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Parsing helpers with field-path diagnostics.

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing field");
  return *it;
}

std::size_t need_positive_int(const json& j, const std::string& path,
                              std::int64_t limit) {
  if (!j.is_number_integer() || j.get<std::int64_t>() <= 0) {
    fail(path, "expected a positive integer");
  }
  const std::int64_t v = j.get<std::int64_t>();
  if (v > limit) {
    fail(path, "dimension too large (limit " + std::to_string(limit) + ")");
  }
  return std::size_t(v);
}

cx parse_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(path, "expected a [re, im] pair");
  }
  const double re = j[0].get<double>();
  const double im = j[1].get<double>();
  if (!std::isfinite(re) || !std::isfinite(im)) {
    fail(path, "entry is not finite");
  }
  return cx(re, im);
}

CMatrix parse_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  std::vector<std::vector<cx>> data;
  data.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = j[i];
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.empty()) fail(row_path, "expected a row array");
    if (i == 0) {
      cols = row.size();
    } else if (row.size() != cols) {
      fail(row_path, "row length " + std::to_string(row.size()) +
                         " != " + std::to_string(cols) + " (ragged matrix)");
    }
    std::vector<cx> entries;
    entries.reserve(cols);
    for (std::size_t k = 0; k < row.size(); ++k) {
      entries.push_back(
          parse_complex(row[k], row_path + "[" + std::to_string(k) + "]"));
    }
    data.push_back(std::move(entries));
  }
  return CMatrix(data);
}

void require_shape(const CMatrix& m, std::size_t rows, std::size_t cols,
                   const std::string& path) {
  if (m.rows() != rows || m.cols() != cols) {
    fail(path, "expected a " + std::to_string(rows) + "x" +
                   std::to_string(cols) + " matrix, got " +
                   std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

BasisSpec parse_basis_spec(const json& j, const std::string& path) {
  BasisSpec spec;
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "standard") {
      spec.kind = BasisSpec::Kind::standard;
    } else if (name == "gellmann") {
      spec.kind = BasisSpec::Kind::gellmann;
    } else {
      fail(path, "unknown basis name '" + name + "'");
    }
    return spec;
  }
  if (j.is_object() && j.contains("custom")) {
    const json& elems = j["custom"];
    if (!elems.is_array() || elems.empty()) {
      fail(path + ".custom", "expected an array of matrices");
    }
    spec.kind = BasisSpec::Kind::custom;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      spec.custom_elements.push_back(
          parse_matrix(elems[i], path + ".custom[" + std::to_string(i) + "]"));
    }
    return spec;
  }
  fail(path, "expected \"standard\", \"gellmann\" or {\"custom\": [...]}");
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

OperatorBasis BasisSpec::realize(std::size_t n) const {
  switch (kind) {
    case Kind::standard:
      return standard_basis(n);
    case Kind::gellmann:
      return gellmann_basis(n);
    case Kind::custom:
      return custom_basis(n, custom_elements);
  }
  throw Error("unreachable basis kind");
}

std::string BasisSpec::name() const {
  switch (kind) {
    case Kind::standard:
      return "standard";
    case Kind::gellmann:
      return "gellmann";
    case Kind::custom:
      return "custom";
  }
  return "?";
}

SuperOp ChannelSpec::to_superop() const {
  switch (kind) {
    case ChannelKind::superop: {
      SuperOp s;
      s.dim = dim;
      s.m = payload[0];
      return s;
    }
    case ChannelKind::kraus:
      return superop_from_kraus(make_kraus_set(dim, payload));
    case ChannelKind::choi: {
      GksMatrix c;
      c.dim = dim;
      c.basis = standard_basis(dim);
      c.g = payload[0];
      return choi_inverse(c);
    }
    case ChannelKind::gks: {
      GksMatrix g;
      g.dim = dim;
      g.basis = basis->realize(dim);
      g.g = payload[0];
      return gks_inverse(g);
    }
  }
  throw Error("unreachable channel kind");
}

OpenSystemModel ModelSpec::to_model() const {
  return make_model(n, m, h_s, h_e, h_se, env_state_index);
}

ChannelSpec parse_channel_spec(const std::string& text) {
  const json j = parse_document(text);
  ChannelSpec spec;

  const json& kind = need(j, "kind", "$");
  if (!kind.is_string()) fail("$.kind", "expected a string");
  const std::string kind_name = kind.get<std::string>();
  if (kind_name == "kraus") {
    spec.kind = ChannelKind::kraus;
  } else if (kind_name == "superop") {
    spec.kind = ChannelKind::superop;
  } else if (kind_name == "choi") {
    spec.kind = ChannelKind::choi;
  } else if (kind_name == "gks") {
    spec.kind = ChannelKind::gks;
  } else {
    fail("$.kind", "unknown kind '" + kind_name + "'");
  }

  spec.dim = need_positive_int(need(j, "dim", "$"), "$.dim", 8);
  const std::size_t n2 = spec.dim * spec.dim;

  const json& payload = need(j, "payload", "$");
  if (spec.kind == ChannelKind::kraus) {
    if (!payload.is_array() || payload.empty()) {
      fail("$.payload", "expected an array of Kraus matrices");
    }
    for (std::size_t i = 0; i < payload.size(); ++i) {
      const std::string p = "$.payload[" + std::to_string(i) + "]";
      CMatrix m = parse_matrix(payload[i], p);
      require_shape(m, spec.dim, spec.dim, p);
      spec.payload.push_back(std::move(m));
    }
  } else {
    CMatrix m = parse_matrix(payload, "$.payload");
    require_shape(m, n2, n2, "$.payload");
    spec.payload.push_back(std::move(m));
  }

  if (j.contains("basis")) {
    spec.basis = parse_basis_spec(j["basis"], "$.basis");
    if (spec.basis->kind == BasisSpec::Kind::custom) {
      for (std::size_t i = 0; i < spec.basis->custom_elements.size(); ++i) {
        require_shape(spec.basis->custom_elements[i], spec.dim, spec.dim,
                      "$.basis.custom[" + std::to_string(i) + "]");
      }
      if (spec.basis->custom_elements.size() != n2) {
        fail("$.basis.custom", "expected " + std::to_string(n2) + " elements");
      }
    }
  }
  if (spec.kind == ChannelKind::gks && !spec.basis.has_value()) {
    fail("$.basis", "required for kind \"gks\"");
  }
  return spec;
}

ModelSpec parse_model_spec(const std::string& text) {
  const json j = parse_document(text);
  ModelSpec spec;
  spec.n = need_positive_int(need(j, "n", "$"), "$.n", 8);
  spec.m = need_positive_int(need(j, "m", "$"), "$.m", 32);
  if (spec.n * spec.m > 64) fail("$.m", "total dimension n*m exceeds 64");
  spec.h_s = parse_matrix(need(j, "h_s", "$"), "$.h_s");
  require_shape(spec.h_s, spec.n, spec.n, "$.h_s");
  spec.h_e = parse_matrix(need(j, "h_e", "$"), "$.h_e");
  require_shape(spec.h_e, spec.m, spec.m, "$.h_e");
  spec.h_se = parse_matrix(need(j, "h_se", "$"), "$.h_se");
  require_shape(spec.h_se, spec.n * spec.m, spec.n * spec.m, "$.h_se");
  if (j.contains("env_state_index")) {
    const json& idx = j["env_state_index"];
    if (!idx.is_number_integer() || idx.get<std::int64_t>() < 0 ||
        std::size_t(idx.get<std::int64_t>()) >= spec.m) {
      fail("$.env_state_index", "expected an integer in [0, m)");
    }
    spec.env_state_index = std::size_t(idx.get<std::int64_t>());
  }
  return spec;
}

BasisSpec parse_basis_spec_file(const std::string& text) {
  const json j = parse_document(text);
  BasisSpec spec;
  spec.kind = BasisSpec::Kind::custom;
  const json& elems = need(j, "elements", "$");
  if (!elems.is_array() || elems.empty()) {
    fail("$.elements", "expected an array of matrices");
  }
  for (std::size_t i = 0; i < elems.size(); ++i) {
    spec.custom_elements.push_back(
        parse_matrix(elems[i], "$.elements[" + std::to_string(i) + "]"));
  }
  return spec;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cpkit
