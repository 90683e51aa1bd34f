#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace femtoloss {

/// Malformed or inconsistent scenario configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments handed to an estimator or simulator.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to meet its tolerance.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// r0 and r1 are too close for the inverse path-loss moments to exist.
class SingularGeometryError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Wraps a failure in one step of the estimation pipeline with the step name.
class EstimationError : public std::runtime_error {
public:
    EstimationError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace femtoloss
