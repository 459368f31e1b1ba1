#pragma once

#include <iosfwd>
#include <string>

#include "hb/config.hpp"

namespace hb {

/// Executes one CLI command (solve, ladder, props, audit) against a parsed
/// configuration. Artifacts land in out_dir (created if missing); progress
/// lines go to log. seed_override >= 0 replaces both net.seed and props.seed.
/// Returns the process exit code: 0 success, 1 configuration error,
/// 2 convergence failure, 3 property or audit violation.
[[nodiscard]] int run_command(const std::string& command, RunConfig cfg, const std::string& out_dir,
                              long seed_override, std::ostream& log);

} // namespace hb
