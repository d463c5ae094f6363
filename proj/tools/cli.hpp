#pragma once

#include <iosfwd>

namespace tsgd::cli {

// Exit codes of the command-line tool. Divergence is not an error.
enum ExitCode : int { kOk = 0, kConfigError = 1, kDataError = 2, kIoError = 3 };

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tsgd::cli
