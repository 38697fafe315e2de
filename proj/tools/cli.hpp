#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fatoulab::cli {

/// Exit codes: 0 success, 1 invalid invocation or input, 2 failed computation.
enum ExitCode : int { kOk = 0, kInvalid = 1, kRuntime = 2 };

/// Runs one command line (without the program name). Results go to `out` as
/// JSON, diagnostics and usage to `err`. Every successful run also writes
/// manifest.json into the output directory.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fatoulab::cli
