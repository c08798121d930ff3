#pragma once

// Vector fields, scalar fields and Lie calculus on a Darboux chart.
//
// All derivatives are exact: components are expressions, evaluated with dual
// numbers. Fields built from H (such as X_H) carry derivative nodes, so their
// Jacobians come from nested duals.

#include <map>
#include <string>
#include <vector>

#include "contact/core.hpp"

namespace contact {

struct ScalarFieldSpec {
  std::string name;
  Expression expression;

  double value(const SystemSpec& sys, const State& x) const;
};

class VectorFieldSpec {
 public:
  /// `components` in flat (q, p, s) order; all must share the chart's scope.
  VectorFieldSpec(std::string name, ChartPtr chart, std::vector<Expression> components);

  /// Components keyed by direction name: coordinate `x` for ∂/∂x, `p_x` for
  /// ∂/∂p_x, `s` for ∂/∂s. Unlisted directions are zero.
  static VectorFieldSpec parse(std::string name, const SystemSpec& sys,
                               const std::map<std::string, std::string>& components);
  /// ∂/∂(direction).
  static VectorFieldSpec coordinate_field(const SystemSpec& sys, std::string_view direction);
  static VectorFieldSpec zero(std::string name, const SystemSpec& sys);

  const std::string& name() const noexcept { return name_; }
  const ChartPtr& chart() const noexcept { return chart_; }
  const std::vector<Expression>& components() const noexcept { return components_; }
  const Expression& component(std::size_t k) const { return components_.at(k); }

  Tangent value(const SystemSpec& sys, const State& x) const;

 private:
  std::string name_;
  ChartPtr chart_;
  std::vector<Expression> components_;
};

/// X_H assembled from H's expression with derivative nodes.
VectorFieldSpec hamiltonian_field(const SystemSpec& sys);
ScalarFieldSpec hamiltonian_scalar(const SystemSpec& sys);

/// Row-major (2n+1)x(2n+1); entry (k, j) = ∂Y^k/∂x^j.
struct Jacobian {
  std::size_t dim = 0;
  std::vector<double> entries;
  double operator()(std::size_t k, std::size_t j) const { return entries[k * dim + j]; }
};

/// Exact phase-space gradient (length 2n+1) of an expression at x.
std::vector<double> phase_gradient(const SystemSpec& sys, const Expression& e, const State& x);

Jacobian vf_jacobian(const SystemSpec& sys, const VectorFieldSpec& y, const State& x);

/// [Y, X]^k = Σ_j (Y^j ∂_j X^k − X^j ∂_j Y^k).
Tangent lie_bracket(const SystemSpec& sys, const VectorFieldSpec& y, const VectorFieldSpec& x_field,
                    const State& x);

/// Y(F) = Σ_k Y^k ∂F/∂x^k.
double lie_derivative_scalar(const SystemSpec& sys, const VectorFieldSpec& y, const ScalarFieldSpec& f,
                             const State& x);

/// L_Y η via Cartan: i(Y)dη + d(i(Y)η).
Covector lie_derivative_contact_form(const SystemSpec& sys, const VectorFieldSpec& y, const State& x);

/// i(Y)η = Y^s − Σ p_i Y^{q_i} as an expression.
Expression contract_contact_form(const VectorFieldSpec& y);

}  // namespace contact
