// Channel and model file formats plus a deterministic JSON writer.
//
// Complex numbers are encoded as [re, im] pairs and every number is rendered
// with 17 significant digits so doubles round-trip losslessly.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cpkit/bases.hpp"
#include "cpkit/channels.hpp"
#include "cpkit/opensys.hpp"

namespace cpkit {

// ---------------------------------------------------------------------------
// Deterministic JSON document builder.

class JsonValue {
 public:
  static JsonValue null();
  static JsonValue boolean(bool b);
  static JsonValue integer(std::int64_t v);
  static JsonValue real(double v);
  static JsonValue str(std::string s);
  static JsonValue array();
  static JsonValue object();

  void push(JsonValue v);                      // arrays
  void add(std::string key, JsonValue v);      // objects; insertion order kept

  std::string dump(bool pretty = false) const;

 private:
  struct Arr;
  struct Obj;
  using Storage = std::variant<std::monostate, bool, std::int64_t, double,
                               std::string, std::vector<JsonValue>,
                               std::vector<std::pair<std::string, JsonValue>>>;
  Storage v_;

  void write(std::string& out, bool pretty, int indent) const;
};

std::string format_double(double v);

JsonValue complex_to_json(cx v);
JsonValue matrix_to_json(const CMatrix& m);

/// FNV-1a hash over the rendered entries, as a 16-digit hex string.
std::string matrix_hash(const CMatrix& m);

// ---------------------------------------------------------------------------
// Input schemas. Parse errors carry the offending field path.

enum class ChannelKind { kraus, superop, choi, gks };

struct BasisSpec {
  enum class Kind { standard, gellmann, custom } kind = Kind::standard;
  std::vector<CMatrix> custom_elements;

  OperatorBasis realize(std::size_t n) const;
  std::string name() const;
};

struct ChannelSpec {
  ChannelKind kind = ChannelKind::superop;
  std::size_t dim = 0;
  std::vector<CMatrix> payload;            // one matrix unless kind == kraus
  std::optional<BasisSpec> basis;          // required for kind == gks

  SuperOp to_superop() const;
};

struct ModelSpec {
  std::size_t n = 0;
  std::size_t m = 0;
  CMatrix h_s, h_e, h_se;
  std::size_t env_state_index = 0;

  OpenSystemModel to_model() const;
};

ChannelSpec parse_channel_spec(const std::string& text);
ModelSpec parse_model_spec(const std::string& text);
BasisSpec parse_basis_spec_file(const std::string& text);

std::string read_file(const std::string& path);

}  // namespace cpkit
