#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dplimit::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kConfigError = 2,
  kResourceCap = 3,
};

/// Runs one command line (without the program name). Data goes to `out`
/// unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dplimit::cli
