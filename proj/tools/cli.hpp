#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bgm::cli {

/// Parses `args` (without the program name) and runs the requested command.
/// Returns the process exit code; diagnostics go to `err`, results that have
/// no --out path go to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bgm::cli
