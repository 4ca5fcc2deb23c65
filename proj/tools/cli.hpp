#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace slopp::cli {

/// Runs one command line (without the program name). Returns the process exit
/// code: 0 success, 1 input or validation failure, 2 bad flags.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace slopp::cli
