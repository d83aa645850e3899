#pragma once

// Command-line driver. Exit codes: 0 proven / certified / complete,
// 1 undecided / refuted / inconclusive / incomplete, 2 input error.

#include <iosfwd>
#include <string>
#include <vector>

namespace rigor {

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rigor
