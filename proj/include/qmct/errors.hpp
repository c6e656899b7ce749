#pragma once

#include <stdexcept>
#include <string>

namespace qmct {

// Error taxonomy shared by all modules.  Everything derives from
// std::runtime_error so callers can catch broadly at the CLI boundary.

// Bad user-facing input: config keys, parameter ranges, length mismatches.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mathematically invalid request (momentum outside the forbidden region,
// action without a barrier, Gamma >= 1 in the splitting formula, ...).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iterative solver ran out of budget; message carries the residual.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Result exists but failed its accuracy certificate (Richardson check,
// quadrature tolerance).
struct AccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dynamical integration blew up (Langevin step too large).
struct StabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Problem size exceeds a hard resource limit (dense ED beyond L=12).
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace qmct
