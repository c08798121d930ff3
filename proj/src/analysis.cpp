#include "contact/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <stdexcept>

#include "contact/errors.hpp"

namespace contact {

namespace {

constexpr std::size_t kMaxRecordedErrors = 5;

/// Running max/mean of |residual| over samples, with per-sample failures.
class Accumulator {
 public:
  void add(double residual) {
    const double r = std::abs(residual);
    if (!std::isfinite(r)) {
      fail("non-finite residual");
      return;
    }
    max_ = std::max(max_, r);
    sum_ += r;
    ++ok_;
  }

  void fail(const std::string& message) {
    ++failed_;
    if (errors_.size() < kMaxRecordedErrors) errors_.push_back(message);
  }

  CheckReport finish(std::string subject, CheckKind kind, double tol) const {
    CheckReport r;
    r.subject = std::move(subject);
    r.kind = kind;
    r.samples = ok_ + failed_;
    r.failed_samples = failed_;
    r.max_residual = max_;
    r.mean_residual = ok_ ? sum_ / static_cast<double>(ok_) : 0.0;
    r.tolerance = tol;
    r.pass = r.samples > 0 && failed_ == 0 && max_ <= tol;
    r.errors = errors_;
    return r;
  }

 private:
  double max_ = 0.0;
  double sum_ = 0.0;
  std::size_t ok_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> errors_;
};

void require_samples(std::span<const State> samples) {
  if (samples.empty()) throw Error("at least one sample state is required");
}

QuantityClass classify(const CheckReport& cons, const CheckReport& diss, double tol) {
  if (cons.pass && diss.pass) return QuantityClass::Both;
  if (cons.pass) return QuantityClass::Conserved;
  if (diss.pass) return QuantityClass::Dissipated;
  if (cons.failed_samples == 0 && diss.failed_samples == 0 && cons.max_residual > kNeitherFactor * tol &&
      diss.max_residual > kNeitherFactor * tol) {
    return QuantityClass::Neither;
  }
  return QuantityClass::Inconclusive;
}

std::string parenthesized(const std::string& name) {
  const bool simple = std::all_of(name.begin(), name.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
  return simple ? name : "(" + name + ")";
}

}  // namespace

std::string to_string(CheckKind kind) {
  switch (kind) {
    case CheckKind::ContactSymmetry: return "contact-symmetry";
    case CheckKind::DynamicalSymmetry: return "dynamical-symmetry";
    case CheckKind::Conserved: return "conserved";
    case CheckKind::Dissipated: return "dissipated";
    case CheckKind::BracketCharacterization: return "bracket-characterization";
  }
  return "?";
}

std::string to_string(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::Contact: return "contact";
    case SymmetryClass::Dynamical: return "dynamical";
    case SymmetryClass::Neither: return "neither";
  }
  return "?";
}

std::string to_string(QuantityClass c) {
  switch (c) {
    case QuantityClass::Conserved: return "conserved";
    case QuantityClass::Dissipated: return "dissipated";
    case QuantityClass::Both: return "conserved+dissipated";
    case QuantityClass::Neither: return "neither";
    case QuantityClass::Inconclusive: return "inconclusive";
  }
  return "?";
}

bool satisfies(QuantityClass observed, QuantityClass expected) {
  switch (expected) {
    case QuantityClass::Conserved:
    case QuantityClass::Dissipated: return observed == expected || observed == QuantityClass::Both;
    default: return observed == expected;
  }
}

std::vector<State> sample_states(const Chart& chart, const SampleOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> uniform(-opts.box, opts.box);
  std::vector<State> out;
  out.reserve(opts.count);
  for (std::size_t k = 0; k < opts.count; ++k) {
    State x;
    x.q.resize(chart.n());
    x.p.resize(chart.n());
    for (auto& q : x.q) q = uniform(rng);
    for (auto& p : x.p) {
      do {
        p = uniform(rng);
      } while (std::abs(p) < opts.min_abs_momentum);
    }
    x.s = uniform(rng);
    out.push_back(std::move(x));
  }
  return out;
}

SymmetryReport classify_symmetry(const SystemSpec& sys, const VectorFieldSpec& y, std::span<const State> samples,
                                 double tol) {
  require_samples(samples);
  const VectorFieldSpec xh = hamiltonian_field(sys);
  const ScalarFieldSpec h = hamiltonian_scalar(sys);
  Accumulator contact_acc, dynamical_acc;
  SymmetryReport report;
  for (const auto& x : samples) {
    try {
      const double lie_eta = max_abs(lie_derivative_contact_form(sys, y, x));
      const double lie_h = std::abs(lie_derivative_scalar(sys, y, h, x));
      report.max_abs_lie_eta = std::max(report.max_abs_lie_eta, lie_eta);
      report.max_abs_lie_h = std::max(report.max_abs_lie_h, lie_h);
      contact_acc.add(std::max(lie_eta, lie_h));
    } catch (const Error& e) {
      contact_acc.fail(e.what());
    }
    try {
      dynamical_acc.add(max_abs(lie_bracket(sys, y, xh, x)));
    } catch (const Error& e) {
      dynamical_acc.fail(e.what());
    }
  }
  report.contact = contact_acc.finish(y.name(), CheckKind::ContactSymmetry, tol);
  report.dynamical = dynamical_acc.finish(y.name(), CheckKind::DynamicalSymmetry, tol);
  if (report.contact.pass && !report.dynamical.pass) {
    throw std::logic_error("contact symmetry '" + y.name() + "' failed the dynamical-symmetry check");
  }
  report.classification = report.contact.pass     ? SymmetryClass::Contact
                          : report.dynamical.pass ? SymmetryClass::Dynamical
                                                  : SymmetryClass::Neither;
  return report;
}

ScalarFieldSpec noether_quantity(const VectorFieldSpec& y) {
  return {"-i(" + y.name() + ")eta", -contract_contact_form(y)};
}

QuantityResiduals quantity_residuals(const SystemSpec& sys, const ScalarFieldSpec& f, const State& x) {
  const Tangent xh = hamiltonian_vector_field(sys, x);
  const auto jet = hamiltonian_jet(sys, x);
  const auto grad = phase_gradient(sys, f.expression, x);
  const auto v = flatten(xh);
  double lie = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) lie += v[k] * grad[k];
  const double h_s = jet.gradient[sys.chart()->s_slot()];
  return {lie, lie + h_s * f.value(sys, x)};
}

QuantityReport check_quantity(const SystemSpec& sys, const ScalarFieldSpec& f, std::span<const State> states,
                              double tol) {
  require_samples(states);
  Accumulator cons, diss;
  for (const auto& x : states) {
    try {
      const auto r = quantity_residuals(sys, f, x);
      cons.add(r.conserved);
      diss.add(r.dissipated);
    } catch (const Error& e) {
      cons.fail(e.what());
      diss.fail(e.what());
    }
  }
  QuantityReport report;
  report.conserved = cons.finish(f.name, CheckKind::Conserved, tol);
  report.dissipated = diss.finish(f.name, CheckKind::Dissipated, tol);
  report.classification = classify(report.conserved, report.dissipated, tol);
  return report;
}

QuantityReport check_quantity(const SystemSpec& sys, const ScalarFieldSpec& f, const Trajectory& traj, double tol) {
  return check_quantity(sys, f, std::span<const State>(traj.states), tol);
}

ScalarFieldSpec quotient_quantity(const ScalarFieldSpec& numerator, const ScalarFieldSpec& denominator) {
  return {parenthesized(numerator.name) + "/" + parenthesized(denominator.name),
          numerator.expression / denominator.expression};
}

ScalarFieldSpec product_quantity(const ScalarFieldSpec& dissipated, const ScalarFieldSpec& conserved) {
  return {parenthesized(dissipated.name) + "*" + parenthesized(conserved.name),
          dissipated.expression * conserved.expression};
}

ScalarFieldSpec conserved_from_symmetry(const SystemSpec& sys, const VectorFieldSpec& y) {
  return quotient_quantity(noether_quantity(y), hamiltonian_scalar(sys));
}

VectorFieldSpec reeb_lift(const SystemSpec& sys, const ScalarFieldSpec& f) {
  const auto& chart = *sys.chart();
  std::vector<Expression> comps(chart.phase_dim(), Expression::constant(0.0, chart.scope()));
  comps[chart.s_slot()] = -f.expression;
  return VectorFieldSpec("Y_" + parenthesized(f.name), sys.chart(), std::move(comps));
}

double characterization_residual(const SystemSpec& sys, const VectorFieldSpec& x_field, const State& x) {
  return contact_form_apply(x, lie_bracket(sys, x_field, hamiltonian_field(sys), x));
}

CheckReport check_characterization(const SystemSpec& sys, const VectorFieldSpec& x_field,
                                   std::span<const State> samples, double tol) {
  require_samples(samples);
  const VectorFieldSpec xh = hamiltonian_field(sys);
  Accumulator acc;
  for (const auto& x : samples) {
    try {
      acc.add(contact_form_apply(x, lie_bracket(sys, x_field, xh, x)));
    } catch (const Error& e) {
      acc.fail(e.what());
    }
  }
  return acc.finish(x_field.name(), CheckKind::BracketCharacterization, tol);
}

PointMap::PointMap(std::string name, ChartPtr chart, std::vector<Expression> components)
    : name_(std::move(name)), chart_(std::move(chart)), components_(std::move(components)) {
  if (components_.size() != chart_->phase_dim()) {
    throw DimensionMismatch("point map '" + name_ + "' needs " + std::to_string(chart_->phase_dim()) + " components");
  }
}

PointMap PointMap::parse(std::string name, const SystemSpec& sys, const std::map<std::string, std::string>& components) {
  const auto& chart = *sys.chart();
  std::vector<Expression> comps;
  for (std::size_t k = 0; k < chart.phase_dim(); ++k) comps.push_back(Expression::symbol(k, chart.scope()));
  for (const auto& [direction, source] : components) {
    auto slot = chart.scope()->find(direction);
    if (!slot || *slot >= chart.phase_dim()) {
      throw SpecError("point map '" + name + "': unknown direction '" + direction + "'");
    }
    comps[*slot] = sys.parse(source);
  }
  return PointMap(std::move(name), sys.chart(), std::move(comps));
}

PointMap PointMap::identity(const SystemSpec& sys) { return parse("identity", sys, {}); }

State PointMap::apply(const SystemSpec& sys, const State& x) const {
  auto slots = sys.slot_values(x);
  std::vector<double> flat;
  for (const auto& c : components_) flat.push_back(c.evaluate_slots<double>(slots));
  return state_from_flat(flat);
}

ScalarFieldSpec pullback_quantity(const PointMap& map, const ScalarFieldSpec& f) {
  return {map.name() + "^*" + parenthesized(f.name), f.expression.substitute(map.components())};
}

CheckReport check_contact_symmetry_map(const SystemSpec& sys, const PointMap& map, std::span<const State> samples,
                                       double tol) {
  require_samples(samples);
  const auto& chart = *sys.chart();
  const std::size_t dim = chart.phase_dim();
  Accumulator acc;
  for (const auto& x : samples) {
    try {
      const State image = map.apply(sys, x);
      const auto eta_image = flatten(contact_form(image));
      const auto eta_here = flatten(contact_form(x));
      std::vector<std::vector<double>> jac;
      for (const auto& c : map.components()) jac.push_back(phase_gradient(sys, c, x));
      double dev = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        double pulled = 0.0;
        for (std::size_t k = 0; k < dim; ++k) pulled += eta_image[k] * jac[k][j];
        dev = std::max(dev, std::abs(pulled - eta_here[j]));
      }
      dev = std::max(dev, std::abs(hamiltonian_value(sys, image) - hamiltonian_value(sys, x)));
      acc.add(dev);
    } catch (const Error& e) {
      acc.fail(e.what());
    }
  }
  return acc.finish(map.name(), CheckKind::ContactSymmetry, tol);
}

}  // namespace contact
