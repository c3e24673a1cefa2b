#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lenscat {

/// Runs one CLI invocation (argv without the program name) against the
/// given streams.  Exit codes: 0 success, 1 validation failure,
/// 2 parse error, 3 precondition or reference error, 4 bound exceeded.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

} // namespace lenscat
