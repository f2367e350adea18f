#include "tailscale/model_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tailscale/errors.hpp"

namespace tailscale {

namespace {

using nlohmann::json;

double number(const json& obj, const char* key) {
  if (!obj.contains(key)) throw ParamError(std::string("missing field '") + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ParamError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

CharExponent exponent_from(const json& obj, const char* role) {
  if (!obj.is_object()) throw ParamError(std::string(role) + " must be an object");
  if (!obj.contains("kind") || !obj.at("kind").is_string())
    throw ParamError(std::string(role) + " needs a string 'kind'");
  const auto kind = obj.at("kind").get<std::string>();
  if (kind == "poisson")
    return CharExponent::poisson(number(obj, "lambda"), obj.contains("d") ? number(obj, "d") : 1.0);
  if (kind == "gamma") return CharExponent::gamma(number(obj, "r"), number(obj, "mu"));
  throw ParamError("unknown exponent kind '" + kind + "'");
}

json exponent_to(const CharExponent& e) {
  if (const auto* p = std::get_if<PoissonKind>(&e.kind()))
    return {{"kind", "poisson"}, {"lambda", p->rate}, {"d", e.lattice_span()}};
  if (const auto* g = std::get_if<GammaKind>(&e.kind()))
    return {{"kind", "gamma"}, {"r", g->shape}, {"mu", g->rate}};
  throw ParamError("custom exponents have no JSON form");
}

}  // namespace

ModelSpec parse_model_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParamError(std::string("malformed model JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParamError("model JSON must be an object");
  if (!doc.contains("A") || !doc.contains("B")) throw ParamError("model JSON needs 'A' and 'B'");
  ModelSpec spec{ModelPair(exponent_from(doc.at("A"), "A"), exponent_from(doc.at("B"), "B")),
                 std::nullopt};
  if (doc.contains("f")) spec.f = number(doc, "f");
  return spec;
}

ModelSpec load_model_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParamError("cannot read model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model_json(ss.str());
}

std::string to_model_json(const ModelPair& model, std::optional<double> f) {
  json doc{{"A", exponent_to(model.A())}, {"B", exponent_to(model.B())}};
  if (f) doc["f"] = *f;
  return doc.dump();
}

}  // namespace tailscale
