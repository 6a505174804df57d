#pragma once

#include <iosfwd>

namespace padyn::cli {

/// Runs the command line front end. Exit codes: 0 success, 1 usage or input
/// error, 2 mathematical obstruction.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace padyn::cli
