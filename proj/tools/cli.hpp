#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace domegrip::cli {

enum ExitCode : int { kOk = 0, kUsageError = 2, kIoError = 3, kDomainError = 4 };

/// Parses `args` (without the program name) and runs one subcommand.
/// Errors are reported on `err` as a single JSON object.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace domegrip::cli
