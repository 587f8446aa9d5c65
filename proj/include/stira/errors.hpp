#pragma once

#include <stdexcept>
#include <string>

namespace stira {

// Configuration / input validation problems (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Static solver failures: pole hits, bracket failures (CLI exit code 3).
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Vanishing denominator in the pulse assembly (CLI exit code 4).
struct SingularDenominatorError : std::runtime_error {
    SingularDenominatorError(const std::string& what, double eta_value)
        : std::runtime_error(what), eta(eta_value) {}
    double eta;
};

// Time propagation failures: step-solver breakdown, norm budget (exit code 5).
struct PropagationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace stira
