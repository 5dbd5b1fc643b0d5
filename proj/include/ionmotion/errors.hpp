#pragma once

#include <stdexcept>
#include <string>

namespace ionmotion {

// Exit codes shared by the CLI and anything scripting it.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 2,
    kExitContractError = 3,
    kExitFitError = 4,
};

// Bad configuration input: missing file, parse failure, invariant violation.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violated precondition or type invariant at runtime.
struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Truncated Fock window lost more probability than the budget allows.
struct TruncationError : ContractError {
    using ContractError::ContractError;
};

// Sideband ratio >= 1: no finite mean occupation explains the data.
struct UnphysicalRatioError : ContractError {
    using ContractError::ContractError;
};

// Regression could not be performed (too few points, singular system).
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ionmotion
