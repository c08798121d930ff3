#include "contact/models.hpp"

#include <algorithm>
#include <cmath>

#include "contact/errors.hpp"

namespace contact {

const std::vector<ModelCatalogEntry>& model_catalog() {
  static const std::vector<ModelCatalogEntry> catalog = {
      {"gravity_friction",
       "particle in a vertical plane under constant gravity with linear friction",
       {"x", "y"},
       {{"m", 1.0, "mass"}, {"g", 9.8, "gravitational acceleration"}, {"gamma", 0.5, "friction coefficient"}},
       "(p_x^2 + p_y^2)/(2*m) + m*g*y + gamma*s"},
      {"damped_free_particle",
       "free particle with linear friction",
       {"x"},
       {{"m", 1.0, "mass"}, {"gamma", 0.5, "friction coefficient"}},
       "p_x^2/(2*m) + gamma*s"},
      {"damped_oscillator",
       "harmonic oscillator with linear friction",
       {"q"},
       {{"m", 1.0, "mass"}, {"k", 1.0, "spring constant"}, {"gamma", 0.5, "friction coefficient"}},
       "p_q^2/(2*m) + k*q^2/2 + gamma*s"},
  };
  return catalog;
}

const ModelCatalogEntry& find_model(std::string_view name) {
  const auto& catalog = model_catalog();
  auto it = std::find_if(catalog.begin(), catalog.end(), [&](const auto& e) { return e.name == name; });
  if (it == catalog.end()) throw ModelError("unknown model '" + std::string(name) + "'");
  return *it;
}

namespace {

std::map<std::string, double> resolve(const ModelCatalogEntry& model, const ParameterOverrides& overrides) {
  std::map<std::string, double> values;
  for (const auto& p : model.parameters) values[p.name] = p.default_value;
  for (const auto& [name, value] : overrides) {
    if (!values.count(name)) throw ModelError("model '" + model.name + "' has no parameter '" + name + "'");
    if (!std::isfinite(value)) throw ModelError("parameter '" + name + "' is not finite");
    values[name] = value;
  }
  return values;
}

State gravity_friction(const std::map<std::string, double>& prm, const State& x0, double t) {
  const double m = prm.at("m"), g = prm.at("g"), gamma = prm.at("gamma");
  const double qx = x0.q[0], qy = x0.q[1], px = x0.p[0], py = x0.p[1];
  State out = x0;
  if (gamma == 0.0) {
    out.q[0] = qx + px * t / m;
    out.p[0] = px;
    out.p[1] = py - m * g * t;
    out.q[1] = qy + py * t / m - g * t * t / 2.0;
    // ṡ = kinetic − m g y, integrated in closed form.
    const double kinetic_integral = (px * px * t + py * py * t - py * m * g * t * t + m * m * g * g * t * t * t / 3.0) / (2.0 * m);
    const double potential_integral = m * g * (qy * t + py * t * t / (2.0 * m) - g * t * t * t / 6.0);
    out.s = x0.s + kinetic_integral - potential_integral;
    return out;
  }
  const double decay = std::exp(-gamma * t);
  const double one_minus = -std::expm1(-gamma * t);
  const double h0 = (px * px + py * py) / (2.0 * m) + m * g * qy + gamma * x0.s;
  out.p[0] = px * decay;
  out.q[0] = qx + px / (m * gamma) * one_minus;
  out.p[1] = (py + m * g / gamma) * decay - m * g / gamma;
  out.q[1] = qy + (py / (m * gamma) + g / (gamma * gamma)) * one_minus - g / gamma * t;
  const double kinetic = (out.p[0] * out.p[0] + out.p[1] * out.p[1]) / (2.0 * m);
  out.s = (h0 * decay - kinetic - m * g * out.q[1]) / gamma;
  return out;
}

State damped_free_particle(const std::map<std::string, double>& prm, const State& x0, double t) {
  const double m = prm.at("m"), gamma = prm.at("gamma");
  const double q = x0.q[0], p = x0.p[0];
  State out = x0;
  if (gamma == 0.0) {
    out.q[0] = q + p * t / m;
    out.s = x0.s + p * p * t / (2.0 * m);
    return out;
  }
  const double decay = std::exp(-gamma * t);
  const double h0 = p * p / (2.0 * m) + gamma * x0.s;
  out.p[0] = p * decay;
  out.q[0] = q + p / (m * gamma) * -std::expm1(-gamma * t);
  out.s = (h0 * decay - out.p[0] * out.p[0] / (2.0 * m)) / gamma;
  return out;
}

State damped_oscillator(const std::map<std::string, double>& prm, const State& x0, double t) {
  const double m = prm.at("m"), k = prm.at("k"), gamma = prm.at("gamma");
  const double q0 = x0.q[0], p0 = x0.p[0], v0 = p0 / m;
  State out = x0;

  if (gamma == 0.0) {
    if (k < 0.0) throw ModelError("damped_oscillator: no closed form for gamma = 0 and k < 0");
    if (k == 0.0) {
      out.q[0] = q0 + v0 * t;
      out.s = x0.s + p0 * p0 * t / (2.0 * m);
      return out;
    }
    const double w = std::sqrt(k / m);
    const double a = q0, b = p0 / (m * w);
    const double c = std::cos(w * t), sn = std::sin(w * t);
    out.q[0] = a * c + b * sn;
    out.p[0] = m * w * (-a * sn + b * c);
    // ṡ = kinetic − potential for the undamped oscillator.
    out.s = x0.s + m * w / 4.0 * ((b * b - a * a) * std::sin(2.0 * w * t) - 2.0 * a * b * (1.0 - std::cos(2.0 * w * t)));
    return out;
  }

  const double w0sq = k / m;
  const double disc = gamma * gamma / 4.0 - w0sq;
  double q = 0.0, v = 0.0;
  if (disc < 0.0) {
    const double wd = std::sqrt(-disc);
    const double a = q0, b = (v0 + gamma * q0 / 2.0) / wd;
    const double env = std::exp(-gamma * t / 2.0);
    const double c = std::cos(wd * t), sn = std::sin(wd * t);
    q = env * (a * c + b * sn);
    v = env * (-gamma / 2.0 * (a * c + b * sn) + wd * (-a * sn + b * c));
  } else if (disc > 0.0) {
    const double r = std::sqrt(disc);
    const double r1 = -gamma / 2.0 + r, r2 = -gamma / 2.0 - r;
    const double c1 = (v0 - r2 * q0) / (r1 - r2), c2 = q0 - c1;
    q = c1 * std::exp(r1 * t) + c2 * std::exp(r2 * t);
    v = r1 * c1 * std::exp(r1 * t) + r2 * c2 * std::exp(r2 * t);
  } else {
    const double b = v0 + gamma * q0 / 2.0;
    const double env = std::exp(-gamma * t / 2.0);
    q = (q0 + b * t) * env;
    v = (b - gamma / 2.0 * (q0 + b * t)) * env;
  }
  out.q[0] = q;
  out.p[0] = m * v;
  const double h0 = p0 * p0 / (2.0 * m) + k * q0 * q0 / 2.0 + gamma * x0.s;
  out.s = (h0 * std::exp(-gamma * t) - out.p[0] * out.p[0] / (2.0 * m) - k * q * q / 2.0) / gamma;
  return out;
}

}  // namespace

SystemSpec builtin(std::string_view name, const ParameterOverrides& overrides) {
  const auto& model = find_model(name);
  const auto values = resolve(model, overrides);
  std::vector<std::pair<std::string, double>> params;
  for (const auto& p : model.parameters) params.emplace_back(p.name, values.at(p.name));
  return SystemSpec(model.coordinates, std::move(params), model.hamiltonian);
}

State analytic_reference(std::string_view name, const ParameterOverrides& overrides, const State& x0, double t) {
  const auto& model = find_model(name);
  const auto prm = resolve(model, overrides);
  if (x0.q.size() != model.coordinates.size() || x0.p.size() != model.coordinates.size()) {
    throw DimensionMismatch("initial state dimension does not match model '" + model.name + "'");
  }
  if (!(prm.at("m") > 0.0)) throw ModelError("analytic reference needs m > 0");
  if (t == 0.0) return x0;
  if (model.name == "gravity_friction") return gravity_friction(prm, x0, t);
  if (model.name == "damped_free_particle") return damped_free_particle(prm, x0, t);
  return damped_oscillator(prm, x0, t);
}

}  // namespace contact
