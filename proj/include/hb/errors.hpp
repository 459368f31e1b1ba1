#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hb {

/// Floating-point breakdown inside an otherwise valid computation
/// (eigensolver stall, dual-route disagreement, bracket blowup).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad run configuration. `field` names the offending key so the CLI
/// can report it machine-readably.
struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(std::string f, const std::string& what)
        : std::runtime_error(what), field(std::move(f)) {}
};

/// Iterative solve gave up; carries the residual history for diagnosis.
struct ConvergenceError : std::runtime_error {
    std::vector<double> residual_history;
    ConvergenceError(const std::string& what, std::vector<double> hist)
        : std::runtime_error(what), residual_history(std::move(hist)) {}
};

} // namespace hb
