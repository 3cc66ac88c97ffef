#pragma once

#include <ostream>

namespace jostlab::cli {

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,       ///< bad flags, unreadable or malformed config
    kExitNumerical = 2,   ///< solver failure, or a verification that ran and failed
    kExitHypothesis = 3,  ///< input outside the estimate's hypotheses, near-resonant ambiguity
};

/// Entry point shared by main() and the tests. Never calls exit().
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jostlab::cli
