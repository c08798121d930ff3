#pragma once

// Built-in contact Hamiltonian systems with closed-form reference solutions.
//
//   gravity_friction      n=2  H = (p_x^2 + p_y^2)/(2m) + m g y + gamma s
//   damped_free_particle  n=1  H = p_x^2/(2m) + gamma s
//   damped_oscillator     n=1  H = p_q^2/(2m) + k q^2/2 + gamma s

#include <map>
#include <string>
#include <vector>

#include "contact/core.hpp"

namespace contact {

struct ParameterInfo {
  std::string name;
  double default_value = 0.0;
  std::string description;
};

struct ModelCatalogEntry {
  std::string name;
  std::string description;
  std::vector<std::string> coordinates;
  std::vector<ParameterInfo> parameters;
  std::string hamiltonian;
  bool has_analytic_reference = true;
};

using ParameterOverrides = std::map<std::string, double>;

const std::vector<ModelCatalogEntry>& model_catalog();
const ModelCatalogEntry& find_model(std::string_view name);

/// Throws ModelError for unknown models, unknown parameters or non-finite values.
SystemSpec builtin(std::string_view name, const ParameterOverrides& overrides = {});

/// Closed-form state at time t (measured from the initial state x0).
State analytic_reference(std::string_view name, const ParameterOverrides& overrides, const State& x0, double t);

}  // namespace contact
