#pragma once

#include <iosfwd>

namespace wavenet::cli {

/// Runs one subcommand. Exit codes: 0 success, 1 usage error, 2 data or
/// contract error (including a failed gradient check).
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wavenet::cli
