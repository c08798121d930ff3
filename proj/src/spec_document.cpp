#include "contact/spec_document.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "contact/errors.hpp"

namespace contact {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw SpecError("field '" + field + "': " + what);
}

const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) field_error(where.empty() ? key : where + "." + key, "missing");
  return obj.at(key);
}

std::string as_string(const Json& j, const std::string& field) {
  if (!j.is_string()) field_error(field, "expected a string");
  return j.get<std::string>();
}

double as_number(const Json& j, const std::string& field) {
  if (!j.is_number()) field_error(field, "expected a number");
  return j.get<double>();
}

std::vector<double> as_numbers(const Json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::map<std::string, std::string> as_components(const Json& j, const std::string& field) {
  if (!j.is_object()) field_error(field, "expected an object of direction -> expression");
  std::map<std::string, std::string> out;
  for (const auto& [key, value] : j.items()) out[key] = as_string(value, field + "." + key);
  return out;
}

SymmetryClass parse_symmetry_expect(const std::string& text, const std::string& field) {
  if (text == "contact") return SymmetryClass::Contact;
  if (text == "dynamical") return SymmetryClass::Dynamical;
  if (text == "neither") return SymmetryClass::Neither;
  field_error(field, "expected one of contact, dynamical, neither");
}

QuantityClass parse_quantity_expect(const std::string& text, const std::string& field) {
  if (text == "conserved") return QuantityClass::Conserved;
  if (text == "dissipated") return QuantityClass::Dissipated;
  if (text == "neither") return QuantityClass::Neither;
  field_error(field, "expected one of conserved, dissipated, neither");
}

const Json& array_field(const Json& doc, const char* key) {
  static const Json empty = Json::array();
  if (!doc.contains(key)) return empty;
  const Json& arr = doc.at(key);
  if (!arr.is_array()) field_error(key, "expected an array");
  return arr;
}

Json components_json(const std::map<std::string, std::string>& comps) {
  Json out = Json::object();
  for (const auto& [k, v] : comps) out[k] = v;
  return out;
}

}  // namespace

SystemSpec SpecDocument::system() const {
  try {
    return SystemSpec(coordinates, parameters, hamiltonian);
  } catch (const SyntaxError& e) {
    field_error("hamiltonian", e.what());
  } catch (const UnknownIdentifier& e) {
    field_error("hamiltonian", e.what());
  }
}

State SpecDocument::initial_or_zero() const {
  if (initial_state) return *initial_state;
  return {std::vector<double>(n(), 0.0), std::vector<double>(n(), 0.0), 0.0};
}

SpecDocument parse_spec_document(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(std::string("malformed document: ") + e.what());
  }
  if (!doc.is_object()) throw SpecError("malformed document: top level must be an object");

  SpecDocument out;
  const Json& coords = require(doc, "coordinates", "");
  if (!coords.is_array() || coords.empty()) field_error("coordinates", "expected a non-empty array of names");
  for (std::size_t i = 0; i < coords.size(); ++i) {
    out.coordinates.push_back(as_string(coords[i], "coordinates[" + std::to_string(i) + "]"));
  }
  const Json& n = require(doc, "n", "");
  if (!n.is_number_integer() || n.get<long long>() != static_cast<long long>(out.coordinates.size())) {
    field_error("n", "must equal the number of coordinates (" + std::to_string(out.coordinates.size()) + ")");
  }

  if (doc.contains("parameters")) {
    const Json& params = doc.at("parameters");
    if (!params.is_object()) field_error("parameters", "expected an object of name -> number");
    for (const auto& [key, value] : params.items()) {
      out.parameters.emplace_back(key, as_number(value, "parameters." + key));
    }
  }
  out.hamiltonian = as_string(require(doc, "hamiltonian", ""), "hamiltonian");

  if (doc.contains("initial_state")) {
    const Json& init = doc.at("initial_state");
    if (!init.is_object()) field_error("initial_state", "expected an object with q, p, s");
    State x;
    x.q = as_numbers(require(init, "q", "initial_state"), "initial_state.q");
    x.p = as_numbers(require(init, "p", "initial_state"), "initial_state.p");
    x.s = as_number(require(init, "s", "initial_state"), "initial_state.s");
    if (x.q.size() != out.n() || x.p.size() != out.n()) field_error("initial_state", "dimension must match n");
    out.initial_state = std::move(x);
  }

  const Json& syms = array_field(doc, "symmetries");
  for (std::size_t i = 0; i < syms.size(); ++i) {
    const std::string where = "symmetries[" + std::to_string(i) + "]";
    SymmetryCandidate c;
    c.name = as_string(require(syms[i], "name", where), where + ".name");
    c.components = as_components(require(syms[i], "components", where), where + ".components");
    if (syms[i].contains("expect")) {
      c.expect = parse_symmetry_expect(as_string(syms[i].at("expect"), where + ".expect"), where + ".expect");
    }
    out.symmetries.push_back(std::move(c));
  }

  const Json& quants = array_field(doc, "quantities");
  for (std::size_t i = 0; i < quants.size(); ++i) {
    const std::string where = "quantities[" + std::to_string(i) + "]";
    QuantityCandidate c;
    c.name = as_string(require(quants[i], "name", where), where + ".name");
    c.expression = as_string(require(quants[i], "expression", where), where + ".expression");
    if (quants[i].contains("expect")) {
      c.expect = parse_quantity_expect(as_string(quants[i].at("expect"), where + ".expect"), where + ".expect");
    }
    out.quantities.push_back(std::move(c));
  }

  const Json& maps = array_field(doc, "maps");
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const std::string where = "maps[" + std::to_string(i) + "]";
    MapCandidate c;
    c.name = as_string(require(maps[i], "name", where), where + ".name");
    c.components = as_components(require(maps[i], "components", where), where + ".components");
    if (maps[i].contains("expect")) {
      const std::string e = as_string(maps[i].at("expect"), where + ".expect");
      if (e != "contact" && e != "neither") field_error(where + ".expect", "expected contact or neither");
      c.expect_contact = e == "contact";
    }
    out.maps.push_back(std::move(c));
  }
  return out;
}

SpecDocument load_spec_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec_document(buf.str());
}

SpecDocument model_document(std::string_view model, const ParameterOverrides& overrides) {
  const auto& entry = find_model(model);
  const SystemSpec sys = builtin(model, overrides);
  SpecDocument doc;
  doc.coordinates = entry.coordinates;
  for (std::size_t j = 0; j < entry.parameters.size(); ++j) {
    doc.parameters.emplace_back(entry.parameters[j].name, sys.parameter_values()[j]);
  }
  doc.hamiltonian = entry.hamiltonian;
  doc.quantities.push_back({"energy", entry.hamiltonian, QuantityClass::Dissipated});

  if (entry.name == "gravity_friction") {
    doc.initial_state = State{{0.0, 0.0}, {1.0, 1.0}, 0.0};
    doc.symmetries.push_back({"translation_x", {{"x", "1"}}, SymmetryClass::Contact});
    doc.quantities.push_back({"p_x", "p_x", QuantityClass::Dissipated});
    doc.quantities.push_back({"energy_over_p_x", "(" + entry.hamiltonian + ")/p_x", QuantityClass::Conserved});
    doc.maps.push_back({"translate_x", {{"x", "x + 1.5"}}, true});
    doc.maps.push_back({"stretch_x", {{"x", "2*x"}}, false});
    if (sys.parameter("gamma") != 0.0) {
      doc.symmetries.push_back({"shift_s", {{"s", "1"}}, SymmetryClass::Neither});
      doc.quantities.push_back({"position_x", "x", QuantityClass::Neither});
    }
  } else if (entry.name == "damped_free_particle") {
    doc.initial_state = State{{0.0}, {1.0}, 0.0};
    doc.symmetries.push_back({"translation_x", {{"x", "1"}}, SymmetryClass::Contact});
    doc.quantities.push_back({"p_x", "p_x", QuantityClass::Dissipated});
  } else {
    doc.initial_state = State{{1.0}, {0.0}, 0.0};
  }
  return doc;
}

std::string to_json_text(const SpecDocument& doc) {
  Json out = Json::object();
  out["n"] = doc.n();
  out["coordinates"] = doc.coordinates;
  Json params = Json::object();
  for (const auto& [name, value] : doc.parameters) params[name] = value;
  out["parameters"] = params;
  out["hamiltonian"] = doc.hamiltonian;
  if (doc.initial_state) {
    out["initial_state"] = {{"q", doc.initial_state->q}, {"p", doc.initial_state->p}, {"s", doc.initial_state->s}};
  }
  Json syms = Json::array();
  for (const auto& c : doc.symmetries) {
    Json j = {{"name", c.name}, {"components", components_json(c.components)}};
    if (c.expect) j["expect"] = to_string(*c.expect);
    syms.push_back(j);
  }
  out["symmetries"] = syms;
  Json quants = Json::array();
  for (const auto& c : doc.quantities) {
    Json j = {{"name", c.name}, {"expression", c.expression}};
    if (c.expect) j["expect"] = to_string(*c.expect);
    quants.push_back(j);
  }
  out["quantities"] = quants;
  Json maps = Json::array();
  for (const auto& c : doc.maps) {
    Json j = {{"name", c.name}, {"components", components_json(c.components)}};
    if (c.expect_contact) j["expect"] = *c.expect_contact ? "contact" : "neither";
    maps.push_back(j);
  }
  out["maps"] = maps;
  return out.dump(2) + "\n";
}

}  // namespace contact
