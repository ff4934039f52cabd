#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace eqt::cli {

/// Runs the command line `args` (args[0] is the program name). Returns the
/// process exit code: 0 iff a report was written.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eqt::cli
