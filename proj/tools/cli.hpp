#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mppc::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kInvalidConfig = 3,
  kIoFailure = 4,
};

/// Parses argv (without the program name), runs the selected subcommand and
/// writes its output. Diagnostics go to `err` as a single line.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err);

}  // namespace mppc::cli
