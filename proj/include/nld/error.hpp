#pragma once

#include <stdexcept>
#include <string>

namespace nld {

/// A parameter lies outside the domain where an operation is defined
/// (alpha outside (0,2), non-positive scale, point outside D, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Adaptive quadrature ran out of budget before meeting its tolerance.
/// Carries the best estimate it had.
class QuadratureFailure : public std::runtime_error {
public:
    QuadratureFailure(const std::string& what, double best_estimate, double error_bound)
        : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double best_estimate_;
    double error_bound_;
};

/// Explicit drift step would violate the upwind CFL bound.
class CflViolation : public std::invalid_argument {
public:
    CflViolation(const std::string& what, double admissible_dt)
        : std::invalid_argument(what), admissible_dt_(admissible_dt) {}

    double admissible_dt() const noexcept { return admissible_dt_; }

private:
    double admissible_dt_;
};

/// Experiment configuration does not match the schema. `path` is a JSON
/// pointer to the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace nld
