#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace morpho {

// Exit codes used by the CLI.
enum ExitCode : int { exit_ok = 0, exit_validation = 2, exit_solver = 3, exit_invariant = 4 };

struct ConfigError : std::runtime_error {
    std::vector<std::string> issues;
    explicit ConfigError(std::vector<std::string> list)
        : std::runtime_error(join(list)), issues(std::move(list)) {}
    explicit ConfigError(const std::string& msg)
        : std::runtime_error(msg), issues{msg} {}

private:
    static std::string join(const std::vector<std::string>& list) {
        std::string out;
        for (const auto& s : list) {
            if (!out.empty()) out += "\n";
            out += s;
        }
        return out;
    }
};

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LineSearchFailure : SolverError {
    using SolverError::SolverError;
};

struct MaxIterations : SolverError {
    using SolverError::SolverError;
};

struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace morpho
