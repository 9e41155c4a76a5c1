#pragma once

#include <stdexcept>
#include <string>

namespace talenti {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Gauge is not C^2 away from the origin (crystalline, p = 1, p = inf).
class UnsupportedGauge : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// Evaluation at a point where the function is not differentiable.
class SingularPoint : public Error {
public:
    using Error::Error;
};

class InvalidGeometry : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_residual)
        : Error(what), last_residual_(last_residual) {}

    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

}  // namespace talenti
