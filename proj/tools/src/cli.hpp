// Subcommand driver shared by the executable and the tests.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mantrap::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kFitError = 3 };

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mantrap::cli
