#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace contact::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,       // bad flags or malformed spec
  kDivergence = 3,  // integration produced non-finite values
  kMismatch = 4,    // a declared expectation disagrees with its verdict
};

/// Runs the `contactsym` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace contact::cli
