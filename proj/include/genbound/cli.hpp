#pragma once

#include <ostream>

namespace genbound {

/// Exit codes: 0 success, 1 verification failure, 2 invalid flags or
/// instance, 3 numerical accuracy failure, 4 solver non-convergence.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace genbound
