#pragma once

// Command-line front end. Every command writes into one output directory with
// fixed file names, and identical arguments always produce identical files.

#include <iosfwd>
#include <string>
#include <vector>

namespace sgraphon::cli {

enum ExitCode : int { ok = 0, usage_error = 2, data_error = 3, numerical_error = 4 };

/// Parse `args` (without the program name) and run the selected command.
/// Diagnostics go to `err`, short progress lines to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sgraphon::cli
