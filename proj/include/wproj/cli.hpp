#pragma once

#include <iosfwd>

namespace wproj::cli {

/// Entry point of the wproj tool. Exit codes: 0 success, 1 a checked
/// property failed, 2 usage error, 3 the computation raised an error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wproj::cli
