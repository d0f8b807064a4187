#pragma once

#include <iosfwd>

namespace fadapt::cli {

// Runs one `fadapt` invocation. Returns the process exit code:
// 0 success, 1 invalid input, 2 locus sweep over budget.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fadapt::cli
