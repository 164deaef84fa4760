#pragma once

// Batch front end: one subcommand per invocation, one report on the output
// stream, and an exit status that encodes the verdict.

#include <ostream>
#include <string>
#include <vector>

namespace hspkit::cli {

enum ExitCode : int {
  affirmative = 0,
  negative = 1,
  unknown = 2,
  usage_error = 64,
  malformed_input = 65,
  size_limit = 70,
};

// args excludes the program name.
int execute(const std::vector<std::string>& args, std::ostream& out);

}  // namespace hspkit::cli
