#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dstree {

/// Runs the command line tool in-process. args excludes the program name.
/// Returns the exit code: 0 success, 1 negative result (none found, invalid,
/// bound exceeded), 2 bad input, 3 budget exhausted.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dstree
