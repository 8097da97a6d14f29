#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace anormal::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kInvalidInput = 2,
  kExhausted = 3,
};

/// Runs the command line; reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace anormal::cli
