#pragma once

// JSON system-spec documents.
//
//   {
//     "n": 2,
//     "coordinates": ["x", "y"],
//     "parameters": {"m": 1, "g": 9.8, "gamma": 0.5},
//     "hamiltonian": "(p_x^2 + p_y^2)/(2*m) + m*g*y + gamma*s",
//     "initial_state": {"q": [0, 0], "p": [1, 1], "s": 0},
//     "symmetries": [{"name": "shift_x", "components": {"x": "1"}, "expect": "contact"}],
//     "quantities": [{"name": "p_x", "expression": "p_x", "expect": "dissipated"}],
//     "maps": [{"name": "translate_x", "components": {"x": "x + 1.5"}, "expect": "contact"}]
//   }
//
// Vector-field and map components are keyed by direction: a coordinate name,
// its momentum `p_<name>`, or `s`. Unlisted field components are zero;
// unlisted map components are the identity.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "contact/analysis.hpp"
#include "contact/core.hpp"
#include "contact/models.hpp"

namespace contact {

struct SymmetryCandidate {
  std::string name;
  std::map<std::string, std::string> components;
  std::optional<SymmetryClass> expect;
};

struct QuantityCandidate {
  std::string name;
  std::string expression;
  std::optional<QuantityClass> expect;  // Conserved, Dissipated or Neither
};

struct MapCandidate {
  std::string name;
  std::map<std::string, std::string> components;
  std::optional<bool> expect_contact;
};

struct SpecDocument {
  std::vector<std::string> coordinates;
  std::vector<std::pair<std::string, double>> parameters;
  std::string hamiltonian;
  std::optional<State> initial_state;
  std::vector<SymmetryCandidate> symmetries;
  std::vector<QuantityCandidate> quantities;
  std::vector<MapCandidate> maps;

  std::size_t n() const noexcept { return coordinates.size(); }
  bool has_candidates() const noexcept { return !symmetries.empty() || !quantities.empty() || !maps.empty(); }

  /// Throws SpecError naming the offending field.
  SystemSpec system() const;
  State initial_or_zero() const;
};

/// Throws SpecError with the field name or the JSON line/column.
SpecDocument parse_spec_document(const std::string& text);
SpecDocument load_spec_document(const std::filesystem::path& path);

/// Built-in model as a document, with its known symmetries and quantities.
SpecDocument model_document(std::string_view model, const ParameterOverrides& overrides = {});
std::string to_json_text(const SpecDocument& doc);

}  // namespace contact
