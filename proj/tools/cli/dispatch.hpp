#pragma once

#include <iosfwd>

namespace hotspot::cli {

// Runs one subcommand. Returns 0 on success, 2 on usage or configuration
// errors and 1 on runtime failures; failures also print a one-line JSON error
// record to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv);

}  // namespace hotspot::cli
