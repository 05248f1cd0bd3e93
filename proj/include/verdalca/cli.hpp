#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace verdalca {

/// Runs one CLI invocation. `args` excludes the program name.
/// Returns 0 on success, 1 on compute failure, 2 on bad input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace verdalca
