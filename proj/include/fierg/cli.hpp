#pragma once

#include <iosfwd>

namespace fierg {

// Entry point of the fierg command-line tool. Returns 0 on success, 2 on a
// usage error and 1 on any other failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fierg
