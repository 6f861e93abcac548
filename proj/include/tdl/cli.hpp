#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tdl {

/// Exit statuses of dispatch().
enum ExitCode : int { kExitOk = 0, kExitDomain = 1, kExitTooLarge = 2 };

/// Runs one subcommand. `args` excludes the program name. Reports go to
/// `out` (or the --out file), diagnostics as "ERROR <code>: <detail>" to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tdl
