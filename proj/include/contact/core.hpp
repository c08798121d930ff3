#pragma once

// Darboux-chart states and contact Hamiltonian systems.
//
// The contact form is fixed to η = ds − p_i dq^i, so the Reeb field is ∂/∂s
// and the Hamiltonian vector field has components
//   dq^i = ∂H/∂p_i,  dp_i = −(∂H/∂q^i + p_i ∂H/∂s),  ds = p_i ∂H/∂p_i − H.
//
// Slot layout shared by every expression on a chart:
//   [q^1..q^n, p_1..p_n, s, parameters...]

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "contact/expr.hpp"

namespace contact {

struct State {
  std::vector<double> q;
  std::vector<double> p;
  double s = 0.0;

  std::size_t dim() const noexcept { return q.size(); }
  bool operator==(const State&) const = default;
};

struct Tangent {
  std::vector<double> dq;
  std::vector<double> dp;
  double ds = 0.0;

  std::size_t dim() const noexcept { return dq.size(); }
  bool operator==(const Tangent&) const = default;
};

/// Components in the basis (dq^i, dp_i, ds).
struct Covector {
  std::vector<double> cq;
  std::vector<double> cp;
  double cs = 0.0;

  std::size_t dim() const noexcept { return cq.size(); }
  bool operator==(const Covector&) const = default;
};

// Flat (q, p, s) layouts, length 2n+1.
std::vector<double> flatten(const State& x);
std::vector<double> flatten(const Tangent& v);
std::vector<double> flatten(const Covector& c);
State state_from_flat(std::span<const double> flat);
Tangent tangent_from_flat(std::span<const double> flat);
Covector covector_from_flat(std::span<const double> flat);
double max_abs(const Tangent& v);
double max_abs(const Covector& c);

/// Coordinate and parameter names of a Darboux chart.
class Chart {
 public:
  Chart(std::vector<std::string> coordinates, std::vector<std::string> parameters);

  std::size_t n() const noexcept { return coordinates_.size(); }
  /// 2n + 1
  std::size_t phase_dim() const noexcept { return 2 * n() + 1; }

  const std::vector<std::string>& coordinates() const noexcept { return coordinates_; }
  const std::vector<std::string>& parameters() const noexcept { return parameters_; }
  std::string momentum_name(std::size_t i) const { return "p_" + coordinates_.at(i); }

  std::size_t q_slot(std::size_t i) const { return i; }
  std::size_t p_slot(std::size_t i) const { return n() + i; }
  std::size_t s_slot() const { return 2 * n(); }
  std::size_t param_slot(std::size_t j) const { return 2 * n() + 1 + j; }

  /// Name of phase-space direction k in the flat layout.
  const std::string& direction_name(std::size_t k) const { return scope_->name(k); }

  const ScopePtr& scope() const noexcept { return scope_; }

 private:
  std::vector<std::string> coordinates_;
  std::vector<std::string> parameters_;
  ScopePtr scope_;
};

using ChartPtr = std::shared_ptr<const Chart>;

/// A contact Hamiltonian system (M, η, H) on a Darboux chart.
class SystemSpec {
 public:
  SystemSpec(std::vector<std::string> coordinates,
             std::vector<std::pair<std::string, double>> parameters,
             std::string_view hamiltonian);

  const ChartPtr& chart() const noexcept { return chart_; }
  std::size_t n() const noexcept { return chart_->n(); }
  const Expression& hamiltonian() const noexcept { return hamiltonian_; }
  const std::vector<double>& parameter_values() const noexcept { return parameter_values_; }
  double parameter(std::string_view name) const;

  /// Bindings for every slot: parameters plus the state's coordinates.
  Bindings bind(const State& x) const;
  /// Flat slot vector for direct evaluation.
  std::vector<double> slot_values(const State& x) const;
  void check_dim(const State& x) const;

  Expression parse(std::string_view source) const { return contact::parse(source, chart_->scope()); }

 private:
  ChartPtr chart_;
  std::vector<double> parameter_values_;
  Expression hamiltonian_;
};

double hamiltonian_value(const SystemSpec& sys, const State& x);

/// η(v) = v.ds − Σ p_i v.dq^i at `x`.
double contact_form_apply(const State& x, const Tangent& v);
/// η at x as a covector: (−p, 0, 1).
Covector contact_form(const State& x);
/// R = ∂/∂s.
Tangent reeb_field(const State& x);
/// i(v)dη with dη = dq^i ∧ dp_i.
Covector contract_deta(const Tangent& v);

/// Value and all 2n+1 phase-space partials of H at x.
struct HamiltonianJet {
  double value = 0.0;
  std::vector<double> gradient;  // flat (q, p, s) order
};
HamiltonianJet hamiltonian_jet(const SystemSpec& sys, const State& x);

Tangent hamiltonian_vector_field(const SystemSpec& sys, const State& x);

struct HamiltonResiduals {
  double r_eta = 0.0;  // i(X)η + H
  Covector r_deta;     // i(X)dη − dH + (∂H/∂s)η
};

/// Residuals of both defining equations of X_H for the given field value.
HamiltonResiduals hamilton_equation_residuals(const SystemSpec& sys, const State& x, const Tangent& field);
HamiltonResiduals hamilton_equation_residuals(const SystemSpec& sys, const State& x);

}  // namespace contact
