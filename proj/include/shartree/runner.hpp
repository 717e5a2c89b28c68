#pragma once

#include <iosfwd>

#include "shartree/config.hpp"

namespace sh {

enum ExitCode { exit_ok = 0, exit_usage = 1, exit_physics = 2 };

// dispatch a validated config; failures are reported as JSON on err
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// singular-hartree <command> [--config FILE] [--section.key VALUE ...]
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// SH_THREADS, or 1 when unset; throws RangeError on garbage
int thread_cap();

} // namespace sh
