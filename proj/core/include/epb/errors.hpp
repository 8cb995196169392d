#pragma once

#include <stdexcept>
#include <string>

namespace epb {

/// Bad user-facing configuration: grid sizes, scenario parameters, file keys.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Non-finite data where finite values are required.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iterative solver gave up; carries the last residual for post-mortems.
class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& what, double last_residual)
        : std::runtime_error(what), last_residual_(last_residual) {}
    double last_residual() const { return last_residual_; }

private:
    double last_residual_;
};

/// Lagrangian particles crossed (x no longer monotone in alpha).
/// Downstream this is a blow-up signal, not a bug.
class CrossingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace epb
