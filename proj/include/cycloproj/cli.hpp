#pragma once

#include <iosfwd>

namespace cycloproj {

// Entry point of the `cycloproj` tool. Results go to `out` (or the --out
// file), diagnostics to `err`. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cycloproj
