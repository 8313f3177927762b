#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace parasource {

/// Exit statuses of the command-line tool.
enum ExitStatus : int { kExitOk = 0, kExitInvalid = 1, kExitCheckFailed = 2 };

/// Runs the tool on `args` (program name excluded).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace parasource
