#pragma once

#include <stdexcept>
#include <string>

namespace epiregime {

/// Bad inputs: malformed files, invalid configuration, violated preconditions.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Shape/length mismatch on a numeric argument.
class ShapeError : public ValidationError {
public:
    explicit ShapeError(const std::string& what) : ValidationError(what) {}
};

/// Non-finite state, integrator blow-up, or similar numeric failure.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// All particles lost support at a given time step.
class DegeneracyError : public NumericalError {
public:
    DegeneracyError(const std::string& what, int t)
        : NumericalError(what + " at t=" + std::to_string(t)), t_(t) {}
    int time_index() const { return t_; }

private:
    int t_;
};

}  // namespace epiregime
