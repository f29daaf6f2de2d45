#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace asymshap::cli {

/// Runs one CLI invocation (arguments after the program name). Returns the process exit code;
/// failures print {"error": <code>, "message": ...} to `err` and return nonzero.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace asymshap::cli
