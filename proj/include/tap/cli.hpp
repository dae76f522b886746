#pragma once

#include <iosfwd>

namespace tap::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,    // invalid graph, metric threshold, chart conversion failure
  kBudget = 2,     // decoder found no incumbent or the instance is too large
  kMalformed = 3,  // unreadable input; the message names the line
};

/// Runs the `tap` command line. Streams stand in for stdin/stdout/stderr.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace tap::cli
