#include "contact/calculus.hpp"

#include "contact/errors.hpp"

namespace contact {

namespace {

void check_chart(const SystemSpec& sys, const ChartPtr& chart) {
  if (chart != sys.chart() && !(*chart->scope() == *sys.chart()->scope())) {
    throw DimensionMismatch("field is defined on a different chart");
  }
}

}  // namespace

double ScalarFieldSpec::value(const SystemSpec& sys, const State& x) const {
  auto slots = sys.slot_values(x);
  return expression.evaluate_slots<double>(slots);
}

VectorFieldSpec::VectorFieldSpec(std::string name, ChartPtr chart, std::vector<Expression> components)
    : name_(std::move(name)), chart_(std::move(chart)), components_(std::move(components)) {
  if (components_.size() != chart_->phase_dim()) {
    throw DimensionMismatch("vector field '" + name_ + "' needs " + std::to_string(chart_->phase_dim()) +
                            " components, got " + std::to_string(components_.size()));
  }
  for (const auto& c : components_) {
    if (c.scope() != chart_->scope() && !(*c.scope() == *chart_->scope())) {
      throw DimensionMismatch("vector field '" + name_ + "' mixes scopes");
    }
  }
}

VectorFieldSpec VectorFieldSpec::parse(std::string name, const SystemSpec& sys,
                                       const std::map<std::string, std::string>& components) {
  const auto& chart = *sys.chart();
  std::vector<Expression> comps(chart.phase_dim(), Expression::constant(0.0, chart.scope()));
  for (const auto& [direction, source] : components) {
    auto slot = chart.scope()->find(direction);
    if (!slot || *slot >= chart.phase_dim()) {
      throw SpecError("vector field '" + name + "': unknown direction '" + direction + "'");
    }
    comps[*slot] = sys.parse(source);
  }
  return VectorFieldSpec(std::move(name), sys.chart(), std::move(comps));
}

VectorFieldSpec VectorFieldSpec::coordinate_field(const SystemSpec& sys, std::string_view direction) {
  return parse("d/d" + std::string(direction), sys, {{std::string(direction), "1"}});
}

VectorFieldSpec VectorFieldSpec::zero(std::string name, const SystemSpec& sys) { return parse(std::move(name), sys, {}); }

Tangent VectorFieldSpec::value(const SystemSpec& sys, const State& x) const {
  check_chart(sys, chart_);
  auto slots = sys.slot_values(x);
  std::vector<double> flat(components_.size());
  for (std::size_t k = 0; k < components_.size(); ++k) flat[k] = components_[k].evaluate_slots<double>(slots);
  return tangent_from_flat(flat);
}

VectorFieldSpec hamiltonian_field(const SystemSpec& sys) {
  const auto& chart = *sys.chart();
  const Expression& h = sys.hamiltonian();
  const std::size_t n = chart.n();
  std::vector<Expression> comps(chart.phase_dim(), Expression::constant(0.0, chart.scope()));
  const Expression h_s = h.partial(chart.s_slot());
  Expression p_dot_hp = Expression::constant(0.0, chart.scope());
  for (std::size_t i = 0; i < n; ++i) {
    const Expression p_i = Expression::symbol(chart.p_slot(i), chart.scope());
    const Expression h_p = h.partial(chart.p_slot(i));
    comps[chart.q_slot(i)] = h_p;
    comps[chart.p_slot(i)] = -(h.partial(chart.q_slot(i)) + p_i * h_s);
    p_dot_hp = p_dot_hp + p_i * h_p;
  }
  comps[chart.s_slot()] = p_dot_hp - h;
  return VectorFieldSpec("X_H", sys.chart(), std::move(comps));
}

ScalarFieldSpec hamiltonian_scalar(const SystemSpec& sys) { return {"H", sys.hamiltonian()}; }

std::vector<double> phase_gradient(const SystemSpec& sys, const Expression& e, const State& x) {
  auto slots = sys.slot_values(x);
  const std::size_t dim = sys.chart()->phase_dim();
  std::vector<double> grad(dim, 0.0);
  // Evaluate once at double precision so domain errors surface even when
  // the expression is constant in every phase direction.
  e.evaluate_slots<double>(slots);
  std::vector<Dual<double>> seeded(slots.begin(), slots.end());
  for (std::size_t j = 0; j < dim; ++j) {
    if (!e.depends_on(j)) continue;
    seeded[j].d = 1.0;
    grad[j] = e.evaluate_slots<Dual<double>>(seeded).d;
    seeded[j].d = 0.0;
  }
  return grad;
}

Jacobian vf_jacobian(const SystemSpec& sys, const VectorFieldSpec& y, const State& x) {
  check_chart(sys, y.chart());
  Jacobian jac;
  jac.dim = sys.chart()->phase_dim();
  jac.entries.reserve(jac.dim * jac.dim);
  for (const auto& comp : y.components()) {
    auto row = phase_gradient(sys, comp, x);
    jac.entries.insert(jac.entries.end(), row.begin(), row.end());
  }
  return jac;
}

Tangent lie_bracket(const SystemSpec& sys, const VectorFieldSpec& y, const VectorFieldSpec& x_field,
                    const State& x) {
  const auto yv = flatten(y.value(sys, x));
  const auto xv = flatten(x_field.value(sys, x));
  const Jacobian jy = vf_jacobian(sys, y, x);
  const Jacobian jx = vf_jacobian(sys, x_field, x);
  std::vector<double> out(jy.dim, 0.0);
  for (std::size_t k = 0; k < jy.dim; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < jy.dim; ++j) acc += yv[j] * jx(k, j) - xv[j] * jy(k, j);
    out[k] = acc;
  }
  return tangent_from_flat(out);
}

double lie_derivative_scalar(const SystemSpec& sys, const VectorFieldSpec& y, const ScalarFieldSpec& f,
                             const State& x) {
  const auto yv = flatten(y.value(sys, x));
  const auto grad = phase_gradient(sys, f.expression, x);
  double acc = 0.0;
  for (std::size_t k = 0; k < yv.size(); ++k) acc += yv[k] * grad[k];
  return acc;
}

Expression contract_contact_form(const VectorFieldSpec& y) {
  const auto& chart = *y.chart();
  Expression g = y.component(chart.s_slot());
  for (std::size_t i = 0; i < chart.n(); ++i) {
    g = g - Expression::symbol(chart.p_slot(i), chart.scope()) * y.component(chart.q_slot(i));
  }
  return g;
}

Covector lie_derivative_contact_form(const SystemSpec& sys, const VectorFieldSpec& y, const State& x) {
  check_chart(sys, y.chart());
  const auto& chart = *sys.chart();
  const Tangent yv = y.value(sys, x);
  const auto dg = phase_gradient(sys, contract_contact_form(y), x);
  Covector c = contract_deta(yv);
  for (std::size_t i = 0; i < chart.n(); ++i) {
    c.cq[i] += dg[chart.q_slot(i)];
    c.cp[i] += dg[chart.p_slot(i)];
  }
  c.cs += dg[chart.s_slot()];
  return c;
}

}  // namespace contact
