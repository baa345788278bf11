#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ultraflow::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kNumerical = 3,
  kPropertyViolation = 4,
};

/// Runs one command line (args exclude the program name). Reports go to
/// out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

/// Locale-independent, 17 significant digits, "inf"/"-inf"/"nan".
std::string format_number(double v);

}  // namespace ultraflow::cli
