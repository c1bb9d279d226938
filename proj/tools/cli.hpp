#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace divergia::cli {

/// Runs one command line (without the program name). The backend comes from
/// DIVERGIA_BACKEND (exact|float, default float).
///
/// Exit status: 0 on success, 2 for malformed arguments or parameters outside
/// their admissible range (message and usage on `err`), 1 for any other
/// library error (structured error JSON on `out`).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace divergia::cli
