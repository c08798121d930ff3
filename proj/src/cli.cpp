#include "contact/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "contact/analysis.hpp"
#include "contact/errors.hpp"
#include "contact/integrate.hpp"
#include "contact/models.hpp"
#include "contact/report.hpp"
#include "contact/spec_document.hpp"

namespace contact::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunFlags {
  double t0 = 0.0;
  double tf = 10.0;
  double dt = 1e-3;
  std::optional<double> tol;  // selects the adaptive integrator
};

Trajectory run_trajectory(const SystemSpec& sys, const State& x0, const RunFlags& f) {
  if (!(f.tf > f.t0)) throw UsageError("--tf must be greater than --t0");
  if (f.tol) {
    if (!(*f.tol > 0.0)) throw UsageError("--tol must be positive");
    return integrate_adaptive(sys, x0, f.t0, f.tf, *f.tol);
  }
  if (!(f.dt > 0.0)) throw UsageError("--dt must be positive");
  return integrate_fixed(sys, x0, f.t0, f.tf, f.dt);
}

ParameterOverrides parse_overrides(const std::vector<std::string>& assignments) {
  ParameterOverrides out;
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects name=value, got '" + a + "'");
    try {
      std::size_t used = 0;
      const std::string value = a.substr(eq + 1);
      out[a.substr(0, eq)] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::logic_error&) {
      throw UsageError("--set: '" + a + "' has a non-numeric value");
    }
  }
  return out;
}

std::string describe_state(const SystemSpec& sys, const State& x) {
  const auto flat = flatten(x);
  std::string out;
  for (std::size_t k = 0; k < flat.size(); ++k) {
    if (k) out += ", ";
    out += sys.chart()->direction_name(k) + "=" + format_double(flat[k]);
  }
  return out;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot write '" + path + "'");
  file << text;
}

// ---- simulate ----

struct SimulateArgs {
  std::string spec;
  std::string out_path;
  std::string method = "rk4";
  RunFlags run;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  const SpecDocument doc = load_spec_document(a.spec);
  const SystemSpec sys = doc.system();
  RunFlags run = a.run;
  if (a.method == "dopri5" && !run.tol) run.tol = 1e-9;
  if (a.method == "rk4") run.tol.reset();
  const Trajectory traj = run_trajectory(sys, doc.initial_or_zero(), run);

  std::ostringstream csv;
  write_trajectory_csv(csv, sys, traj);
  write_text(a.out_path, csv.str(), out);

  std::ostream& summary = a.out_path == "-" ? err : out;
  const double h0 = hamiltonian_value(sys, traj.states.front());
  const double h1 = hamiltonian_value(sys, traj.states.back());
  summary << "method " << traj.method << ": " << traj.accepted_steps << " accepted steps, " << traj.rejected_steps
          << " rejected\n";
  summary << "final t = " << format_double(traj.times.back()) << ": " << describe_state(sys, traj.states.back())
          << "\n";
  summary << "H(t0) = " << format_double(h0) << ", H(tf) = " << format_double(h1) << ", decay factor "
          << (h0 != 0.0 ? format_double(h1 / h0) : std::string("undefined")) << "\n";
  return kOk;
}

// ---- verify ----

struct VerifyArgs {
  std::string spec;
  std::string trajectory_path;
  std::string report_path = "-";
  RunFlags run;
  double tol = kPointwiseTolerance;
  std::size_t samples = 100;
  std::uint64_t seed = 42;
};

void expect(RunReport& report, std::string subject, std::string check, std::string expected, std::string observed,
            bool match) {
  report.expectations.push_back({std::move(subject), std::move(check), std::move(expected), std::move(observed), match});
}

void add_quantity(RunReport& report, const QuantityReport& q) {
  report.checks.push_back(q.conserved);
  report.checks.push_back(q.dissipated);
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const SpecDocument doc = load_spec_document(a.spec);
  if (!doc.has_candidates()) throw UsageError("spec declares no symmetries, quantities or maps to verify");
  const SystemSpec sys = doc.system();

  RunReport report;
  report.seed = a.seed;
  report.sample_count = a.samples;
  report.tolerance = a.tol;

  Trajectory traj;
  if (!a.trajectory_path.empty()) {
    std::ifstream in(a.trajectory_path);
    if (!in) throw UsageError("cannot open trajectory '" + a.trajectory_path + "'");
    traj = read_trajectory_csv(in, sys);
    report.trajectory = {{"source", "file"}, {"path", a.trajectory_path}};
  } else {
    traj = run_trajectory(sys, doc.initial_or_zero(), a.run);
    report.trajectory = {{"source", traj.method}, {"t0", a.run.t0}, {"tf", a.run.tf}};
    if (a.run.tol) {
      report.trajectory["tol"] = *a.run.tol;
    } else {
      report.trajectory["dt"] = a.run.dt;
    }
  }
  report.trajectory["samples"] = traj.size();

  const auto samples = sample_states(*sys.chart(), {a.samples, a.seed});

  for (const auto& cand : doc.symmetries) {
    const auto y = VectorFieldSpec::parse(cand.name, sys, cand.components);
    const auto sym = classify_symmetry(sys, y, samples, a.tol);
    report.checks.push_back(sym.contact);
    report.checks.push_back(sym.dynamical);
    if (cand.expect) {
      expect(report, cand.name, "symmetry", to_string(*cand.expect), to_string(sym.classification),
             *cand.expect == sym.classification);
    }
    if (sym.dynamical.pass) {
      // −i(Y)η of a dynamical symmetry must be dissipated.
      auto f = noether_quantity(y);
      f.name = "noether(" + cand.name + ")";
      const auto q = check_quantity(sys, f, traj, a.tol);
      add_quantity(report, q);
      expect(report, f.name, "noether", "dissipated", to_string(q.classification),
             satisfies(q.classification, QuantityClass::Dissipated));
    }
  }

  std::vector<ScalarFieldSpec> dissipated;
  for (const auto& cand : doc.quantities) {
    const ScalarFieldSpec f{cand.name, sys.parse(cand.expression)};
    const auto q = check_quantity(sys, f, traj, a.tol);
    add_quantity(report, q);
    if (cand.expect) {
      expect(report, cand.name, "quantity", to_string(*cand.expect), to_string(q.classification),
             satisfies(q.classification, *cand.expect));
      if (*cand.expect == QuantityClass::Dissipated && satisfies(q.classification, QuantityClass::Dissipated)) {
        dissipated.push_back(f);
      }
    }
  }
  for (std::size_t i = 0; i < dissipated.size(); ++i) {
    for (std::size_t j = i + 1; j < dissipated.size(); ++j) {
      const auto ratio = quotient_quantity(dissipated[i], dissipated[j]);
      const auto q = check_quantity(sys, ratio, traj, a.tol);
      add_quantity(report, q);
      expect(report, ratio.name, "quotient", "conserved", to_string(q.classification),
             satisfies(q.classification, QuantityClass::Conserved));
    }
  }

  for (const auto& cand : doc.maps) {
    const auto map = PointMap::parse(cand.name, sys, cand.components);
    const auto r = check_contact_symmetry_map(sys, map, samples, a.tol);
    report.checks.push_back(r);
    if (cand.expect_contact) {
      expect(report, cand.name, "map", *cand.expect_contact ? "contact" : "neither", r.pass ? "contact" : "neither",
             *cand.expect_contact == r.pass);
    }
    if (r.pass) {
      // Pullbacks of dissipated quantities by contact symmetries stay dissipated.
      for (const auto& f : dissipated) {
        const auto pulled = pullback_quantity(map, f);
        const auto q = check_quantity(sys, pulled, traj, a.tol);
        add_quantity(report, q);
        expect(report, pulled.name, "pullback", "dissipated", to_string(q.classification),
               satisfies(q.classification, QuantityClass::Dissipated));
      }
    }
  }

  write_text(a.report_path, to_json(report).dump(2) + "\n", out);
  std::ostream& summary = a.report_path == "-" ? std::cerr : out;
  std::size_t matched = 0;
  for (const auto& e : report.expectations) {
    summary << (e.match ? "ok       " : "MISMATCH ") << e.check << " " << e.subject << ": expected " << e.expected
            << ", observed " << e.observed << "\n";
    matched += e.match ? 1 : 0;
  }
  summary << matched << "/" << report.expectations.size() << " expectations met\n";
  return report.all_match() ? kOk : kMismatch;
}

// ---- analyze ----

struct AnalyzeArgs {
  std::string spec;
  std::string field;
  std::size_t samples = 100;
  std::uint64_t seed = 42;
  double tol = kPointwiseTolerance;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const SpecDocument doc = load_spec_document(a.spec);
  const SystemSpec sys = doc.system();
  std::optional<VectorFieldSpec> y;
  if (a.field == "X_H") y = hamiltonian_field(sys);
  for (const auto& cand : doc.symmetries) {
    if (cand.name == a.field) y = VectorFieldSpec::parse(cand.name, sys, cand.components);
  }
  if (!y) throw UsageError("no vector field named '" + a.field + "' in the spec");

  const auto samples = sample_states(*sys.chart(), {a.samples, a.seed});
  const auto sym = classify_symmetry(sys, *y, samples, a.tol);

  std::string verdict;
  if (sym.classification == SymmetryClass::Contact) {
    verdict = "contact symmetry";
  } else {
    std::string why;
    if (sym.max_abs_lie_h > a.tol) why = "L_YH = " + format_double(sym.max_abs_lie_h);
    if (sym.max_abs_lie_eta > a.tol) why += (why.empty() ? "" : ", ") + ("|L_Y eta| = " + format_double(sym.max_abs_lie_eta));
    if (sym.contact.failed_samples) why += (why.empty() ? "" : ", ") + std::string("evaluation errors");
    verdict = (sym.classification == SymmetryClass::Dynamical ? "dynamical symmetry; " : "") +
              std::string("not a contact symmetry (") + why + ")";
    if (sym.classification == SymmetryClass::Neither) verdict += "; not a dynamical symmetry";
  }
  out << y->name() << ": " << verdict << "\n";
  out << "  max |L_Y eta| = " << format_double(sym.max_abs_lie_eta) << ", max |L_Y H| = "
      << format_double(sym.max_abs_lie_h) << ", max |[Y, X_H]| = " << format_double(sym.dynamical.max_residual)
      << " over " << samples.size() << " samples (seed " << a.seed << ", tol " << format_double(a.tol) << ")\n";

  const ScalarFieldSpec f = noether_quantity(*y);
  const std::string f_text = f.expression.to_string();
  const auto fq = check_quantity(sys, f, samples, a.tol);
  out << "Noether quantity " << f_text << ": " << to_string(fq.classification) << "\n";
  out << "  max |X_H(F)| = " << format_double(fq.conserved.max_residual)
      << ", max |X_H(F) + (dH/ds) F| = " << format_double(fq.dissipated.max_residual) << "\n";

  bool h_vanishes = false;
  for (const auto& x : samples) h_vanishes = h_vanishes || hamiltonian_value(sys, x) == 0.0;
  if (h_vanishes) {
    out << "conserved quotient skipped: H vanishes at a sample\n";
  } else {
    ScalarFieldSpec ratio = conserved_from_symmetry(sys, *y);
    const std::string label = (f.expression.root().kind == NodeKind::Symbol || f.expression.root().kind == NodeKind::Number
                                   ? f_text
                                   : "(" + f_text + ")") +
                              "/H";
    const auto rq = check_quantity(sys, ratio, samples, a.tol);
    out << "conserved quotient " << label << ": " << to_string(rq.classification) << "\n";
    out << "  max |X_H(F/H)| = " << format_double(rq.conserved.max_residual) << "\n";
  }
  return kOk;
}

// ---- list-models / export-model ----

int cmd_list_models(std::ostream& out) {
  for (const auto& m : model_catalog()) {
    out << m.name << "  n=" << m.coordinates.size() << "  params:";
    for (const auto& p : m.parameters) out << " " << p.name << "=" << format_double(p.default_value);
    out << "  H = " << m.hamiltonian << "\n";
  }
  return kOk;
}

int cmd_export_model(const std::string& name, const std::vector<std::string>& sets, const std::string& path,
                     std::ostream& out) {
  write_text(path, to_json_text(model_document(name, parse_overrides(sets))), out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Integrate and analyze contact Hamiltonian systems", "contactsym"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "integrate a system and write a trajectory CSV");
  simulate->add_option("spec", sim.spec, "system spec document")->required();
  simulate->add_option("-o,--out", sim.out_path, "trajectory CSV path ('-' for stdout)")->required();
  simulate->add_option("--t0", sim.run.t0, "start time");
  simulate->add_option("--tf", sim.run.tf, "end time");
  simulate->add_option("--dt", sim.run.dt, "fixed step size (rk4)");
  auto* sim_tol = simulate->add_option("--tol", sim.run.tol, "error tolerance (selects dopri5)");
  simulate->add_option("--method", sim.method, "rk4 or dopri5")->check(CLI::IsMember({"rk4", "dopri5"}));

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "check declared symmetries and quantities");
  verify->add_option("spec", ver.spec, "system spec document")->required();
  verify->add_option("--trajectory", ver.trajectory_path, "trajectory CSV to check instead of a fresh run");
  verify->add_option("--t0", ver.run.t0, "fresh run start time");
  verify->add_option("--tf", ver.run.tf, "fresh run end time");
  verify->add_option("--dt", ver.run.dt, "fresh run step size (rk4)");
  verify->add_option("--rk-tol", ver.run.tol, "fresh run with dopri5 at this tolerance");
  verify->add_option("--tol", ver.tol, "residual tolerance");
  verify->add_option("--samples", ver.samples, "random sample states for pointwise checks");
  verify->add_option("--seed", ver.seed, "sampling seed");
  verify->add_option("--report", ver.report_path, "report path ('-' for stdout)");

  AnalyzeArgs ana;
  auto* analyze = app.add_subcommand("analyze", "classify one vector field and derive its quantities");
  analyze->add_option("spec", ana.spec, "system spec document")->required();
  analyze->add_option("--field", ana.field, "symmetry name from the spec, or X_H")->required();
  analyze->add_option("--samples", ana.samples, "random sample states");
  analyze->add_option("--seed", ana.seed, "sampling seed");
  analyze->add_option("--tol", ana.tol, "residual tolerance");

  auto* list_models = app.add_subcommand("list-models", "list built-in models");

  std::string export_name;
  std::string export_path = "-";
  std::vector<std::string> export_sets;
  auto* export_model = app.add_subcommand("export-model", "write a built-in model as a spec document");
  export_model->add_option("model", export_name, "model name")->required();
  export_model->add_option("--set", export_sets, "parameter override name=value");
  export_model->add_option("-o,--out", export_path, "output path ('-' for stdout)");

  std::vector<const char*> argv{"contactsym"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (simulate->parsed()) {
      if (sim_tol->count() > 0 && simulate->get_option("--method")->count() == 0) sim.method = "dopri5";
      return cmd_simulate(sim, out, err);
    }
    if (verify->parsed()) return cmd_verify(ver, out);
    if (analyze->parsed()) return cmd_analyze(ana, out);
    if (list_models->parsed()) return cmd_list_models(out);
    if (export_model->parsed()) return cmd_export_model(export_name, export_sets, export_path, out);
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << " (last good time " << format_double(e.last_time()) << ")\n";
    return kDivergence;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const SpecError& e) {
    err << "spec error: " << e.what() << "\n";
    return kUsage;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const SyntaxError& e) {
    err << "spec error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnknownIdentifier& e) {
    err << "spec error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace contact::cli
