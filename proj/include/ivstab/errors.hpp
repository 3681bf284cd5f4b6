#pragma once

#include <stdexcept>
#include <string>

namespace ivstab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite coefficients, zero polynomials where one is not allowed, bad files.
class MalformedInput : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A size guard (matrix order, grid size, enumeration size) was exceeded.
class CapExceeded : public Error {
public:
    using Error::Error;
};

/// A check's hypothesis does not hold (e.g. improper transfer matrix).
class PreconditionFailed : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_estimate)
        : Error(what), best_estimate_(best_estimate) {}
    [[nodiscard]] double best_estimate() const noexcept { return best_estimate_; }

private:
    double best_estimate_;
};

}  // namespace ivstab
