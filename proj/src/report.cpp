#include "contact/report.hpp"

#include <algorithm>

namespace contact {

bool RunReport::all_match() const {
  return std::all_of(expectations.begin(), expectations.end(), [](const auto& e) { return e.match; });
}

nlohmann::ordered_json to_json(const CheckReport& r) {
  nlohmann::ordered_json j;
  j["subject"] = r.subject;
  j["kind"] = to_string(r.kind);
  j["samples"] = r.samples;
  j["failed_samples"] = r.failed_samples;
  j["max_abs_residual"] = r.max_residual;
  j["mean_abs_residual"] = r.mean_residual;
  j["tolerance"] = r.tolerance;
  j["verdict"] = r.pass ? "pass" : "fail";
  if (!r.errors.empty()) j["errors"] = r.errors;
  return j;
}

nlohmann::ordered_json to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["seed"] = r.seed;
  j["samples"] = r.sample_count;
  j["tolerances"] = {{"pointwise", r.tolerance}, {"neither_factor", kNeitherFactor}};
  j["trajectory"] = r.trajectory;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  j["checks"] = checks;
  auto exps = nlohmann::ordered_json::array();
  for (const auto& e : r.expectations) {
    exps.push_back({{"subject", e.subject},
                    {"check", e.check},
                    {"expected", e.expected},
                    {"observed", e.observed},
                    {"match", e.match}});
  }
  j["expectations"] = exps;
  j["status"] = r.all_match() ? "pass" : "fail";
  return j;
}

}  // namespace contact
