#pragma once

// Machine-readable verification report: every CheckReport of a run plus the
// seed, tolerances and how each declared expectation fared.

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "contact/analysis.hpp"

namespace contact {

struct ExpectationResult {
  std::string subject;
  std::string check;  // "symmetry", "quantity", "noether", "quotient", "map", "pullback"
  std::string expected;
  std::string observed;
  bool match = false;
};

struct RunReport {
  std::uint64_t seed = 42;
  std::size_t sample_count = 0;
  double tolerance = kPointwiseTolerance;
  nlohmann::ordered_json trajectory;  // provenance of the trajectory used
  std::vector<CheckReport> checks;
  std::vector<ExpectationResult> expectations;

  bool all_match() const;
};

nlohmann::ordered_json to_json(const CheckReport& r);
nlohmann::ordered_json to_json(const RunReport& r);

}  // namespace contact
