#include "contact/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "contact/errors.hpp"

namespace contact {

namespace {

bool is_identifier(const std::string& name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
  return std::all_of(name.begin(), name.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

bool is_reserved(const std::string& name) {
  static const char* const kReserved[] = {"sin", "cos", "exp", "log", "sqrt", "abs", "diff", "s"};
  return std::find(std::begin(kReserved), std::end(kReserved), name) != std::end(kReserved);
}

void validate_name(const std::string& name, const char* what) {
  if (!is_identifier(name)) throw SpecError(std::string(what) + " name '" + name + "' is not an identifier");
  if (is_reserved(name)) throw SpecError(std::string(what) + " name '" + name + "' is reserved");
}

ScopePtr make_scope(const std::vector<std::string>& coords, const std::vector<std::string>& params) {
  std::vector<std::string> names;
  names.reserve(2 * coords.size() + 1 + params.size());
  names.insert(names.end(), coords.begin(), coords.end());
  for (const auto& c : coords) names.push_back("p_" + c);
  names.emplace_back("s");
  names.insert(names.end(), params.begin(), params.end());
  return std::make_shared<const Scope>(std::move(names));
}

std::vector<std::string> names_of(const std::vector<std::pair<std::string, double>>& params) {
  std::vector<std::string> out;
  for (const auto& [name, value] : params) out.push_back(name);
  return out;
}

}  // namespace

std::vector<double> flatten(const State& x) {
  std::vector<double> out(x.q);
  out.insert(out.end(), x.p.begin(), x.p.end());
  out.push_back(x.s);
  return out;
}

std::vector<double> flatten(const Tangent& v) {
  std::vector<double> out(v.dq);
  out.insert(out.end(), v.dp.begin(), v.dp.end());
  out.push_back(v.ds);
  return out;
}

std::vector<double> flatten(const Covector& c) {
  std::vector<double> out(c.cq);
  out.insert(out.end(), c.cp.begin(), c.cp.end());
  out.push_back(c.cs);
  return out;
}

namespace {
std::size_t half_dim(std::span<const double> flat) {
  if (flat.size() < 3 || flat.size() % 2 == 0) {
    throw DimensionMismatch("flat phase vector must have odd length 2n+1 with n >= 1");
  }
  return (flat.size() - 1) / 2;
}
}  // namespace

State state_from_flat(std::span<const double> flat) {
  std::size_t n = half_dim(flat);
  return {{flat.begin(), flat.begin() + n}, {flat.begin() + n, flat.begin() + 2 * n}, flat[2 * n]};
}

Tangent tangent_from_flat(std::span<const double> flat) {
  std::size_t n = half_dim(flat);
  return {{flat.begin(), flat.begin() + n}, {flat.begin() + n, flat.begin() + 2 * n}, flat[2 * n]};
}

Covector covector_from_flat(std::span<const double> flat) {
  std::size_t n = half_dim(flat);
  return {{flat.begin(), flat.begin() + n}, {flat.begin() + n, flat.begin() + 2 * n}, flat[2 * n]};
}

double max_abs(const Tangent& v) {
  double m = std::abs(v.ds);
  for (double x : v.dq) m = std::max(m, std::abs(x));
  for (double x : v.dp) m = std::max(m, std::abs(x));
  return m;
}

double max_abs(const Covector& c) {
  double m = std::abs(c.cs);
  for (double x : c.cq) m = std::max(m, std::abs(x));
  for (double x : c.cp) m = std::max(m, std::abs(x));
  return m;
}

Chart::Chart(std::vector<std::string> coordinates, std::vector<std::string> parameters)
    : coordinates_(std::move(coordinates)), parameters_(std::move(parameters)) {
  if (coordinates_.empty()) throw SpecError("a chart needs at least one coordinate");
  for (const auto& c : coordinates_) validate_name(c, "coordinate");
  for (const auto& p : parameters_) validate_name(p, "parameter");
  scope_ = make_scope(coordinates_, parameters_);
}

SystemSpec::SystemSpec(std::vector<std::string> coordinates,
                       std::vector<std::pair<std::string, double>> parameters,
                       std::string_view hamiltonian)
    : chart_(std::make_shared<const Chart>(std::move(coordinates), names_of(parameters))),
      hamiltonian_(contact::parse(hamiltonian, chart_->scope())) {
  for (const auto& [name, value] : parameters) {
    if (!std::isfinite(value)) throw SpecError("parameter '" + name + "' is not finite");
    parameter_values_.push_back(value);
  }
}

double SystemSpec::parameter(std::string_view name) const {
  const auto& names = chart_->parameters();
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw UnknownIdentifier(std::string(name));
  return parameter_values_[static_cast<std::size_t>(it - names.begin())];
}

void SystemSpec::check_dim(const State& x) const {
  if (x.q.size() != n() || x.p.size() != n()) {
    throw DimensionMismatch("state has dimension " + std::to_string(x.q.size()) + "/" +
                            std::to_string(x.p.size()) + ", system expects " + std::to_string(n()));
  }
}

std::vector<double> SystemSpec::slot_values(const State& x) const {
  check_dim(x);
  std::vector<double> slots = flatten(x);
  slots.insert(slots.end(), parameter_values_.begin(), parameter_values_.end());
  return slots;
}

Bindings SystemSpec::bind(const State& x) const {
  Bindings b(chart_->scope());
  auto slots = slot_values(x);
  for (std::size_t i = 0; i < slots.size(); ++i) b.set(i, slots[i]);
  return b;
}

double hamiltonian_value(const SystemSpec& sys, const State& x) {
  auto slots = sys.slot_values(x);
  return sys.hamiltonian().evaluate_slots<double>(slots);
}

double contact_form_apply(const State& x, const Tangent& v) {
  if (v.dq.size() != x.p.size() || v.dp.size() != x.p.size()) {
    throw DimensionMismatch("tangent and state dimensions differ");
  }
  double r = v.ds;
  for (std::size_t i = 0; i < x.p.size(); ++i) r -= x.p[i] * v.dq[i];
  return r;
}

Covector contact_form(const State& x) {
  Covector c;
  c.cq.resize(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) c.cq[i] = -x.p[i];
  c.cp.assign(x.dim(), 0.0);
  c.cs = 1.0;
  return c;
}

Tangent reeb_field(const State& x) { return {std::vector<double>(x.dim(), 0.0), std::vector<double>(x.dim(), 0.0), 1.0}; }

Covector contract_deta(const Tangent& v) {
  // dη = dq^i ∧ dp_i, so i(v)dη = v.dq^i dp_i − v.dp_i dq^i.
  Covector c;
  c.cq.resize(v.dim());
  c.cp.resize(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) {
    c.cq[i] = -v.dp[i];
    c.cp[i] = v.dq[i];
  }
  c.cs = 0.0;
  return c;
}

HamiltonianJet hamiltonian_jet(const SystemSpec& sys, const State& x) {
  auto slots = sys.slot_values(x);
  const Expression& h = sys.hamiltonian();
  HamiltonianJet jet;
  jet.value = h.evaluate_slots<double>(slots);
  const std::size_t dim = sys.chart()->phase_dim();
  jet.gradient.assign(dim, 0.0);
  std::vector<Dual<double>> seeded(slots.begin(), slots.end());
  for (std::size_t k = 0; k < dim; ++k) {
    if (!h.depends_on(k)) continue;
    seeded[k].d = 1.0;
    jet.gradient[k] = h.evaluate_slots<Dual<double>>(seeded).d;
    seeded[k].d = 0.0;
  }
  return jet;
}

Tangent hamiltonian_vector_field(const SystemSpec& sys, const State& x) {
  const auto jet = hamiltonian_jet(sys, x);
  const auto& chart = *sys.chart();
  const std::size_t n = chart.n();
  const double h_s = jet.gradient[chart.s_slot()];
  Tangent v;
  v.dq.resize(n);
  v.dp.resize(n);
  double p_dot_hp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double h_p = jet.gradient[chart.p_slot(i)];
    v.dq[i] = h_p;
    v.dp[i] = -(jet.gradient[chart.q_slot(i)] + x.p[i] * h_s);
    p_dot_hp += x.p[i] * h_p;
  }
  v.ds = p_dot_hp - jet.value;
  return v;
}

HamiltonResiduals hamilton_equation_residuals(const SystemSpec& sys, const State& x, const Tangent& field) {
  sys.check_dim(x);
  if (field.dim() != sys.n() || field.dp.size() != sys.n()) throw DimensionMismatch("field dimension differs from system");
  const auto jet = hamiltonian_jet(sys, x);
  const auto& chart = *sys.chart();
  const double h_s = jet.gradient[chart.s_slot()];

  HamiltonResiduals r;
  r.r_eta = contact_form_apply(x, field) + jet.value;

  // i(X)dη − dH + (∂H/∂s)η, η = (−p, 0, 1).
  const Covector ix = contract_deta(field);
  const Covector eta = contact_form(x);
  r.r_deta.cq.resize(sys.n());
  r.r_deta.cp.resize(sys.n());
  for (std::size_t i = 0; i < sys.n(); ++i) {
    r.r_deta.cq[i] = ix.cq[i] - jet.gradient[chart.q_slot(i)] + h_s * eta.cq[i];
    r.r_deta.cp[i] = ix.cp[i] - jet.gradient[chart.p_slot(i)] + h_s * eta.cp[i];
  }
  r.r_deta.cs = ix.cs - h_s + h_s * eta.cs;
  return r;
}

HamiltonResiduals hamilton_equation_residuals(const SystemSpec& sys, const State& x) {
  return hamilton_equation_residuals(sys, x, hamiltonian_vector_field(sys, x));
}

}  // namespace contact
