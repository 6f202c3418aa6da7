#pragma once

#include <iosfwd>

#include "nhb/config.hpp"

namespace nhb::run {

/// Execute a validated run configuration. Returns the process exit code:
/// 0 ok, 1 verification failure. Config and numerical errors propagate as
/// nhb::Error for the caller to map to exit codes 2 and 3.
int execute(const config::RunConfig& cfg, std::ostream& log, bool verbose = false);

}  // namespace nhb::run
