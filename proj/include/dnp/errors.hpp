#pragma once

#include <stdexcept>
#include <string>

namespace dnp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A constructor received parameters outside their admissible set (e.g. q <= 1).
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// A nonlinearity was evaluated outside its effective domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A conjugate was requested outside the closure of range(beta).
class OutOfRangeError : public Error {
public:
    using Error::Error;
};

/// Interpolant or lookup outside the computed time window.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Inconsistent run configuration (mode/monitor mismatch, unknown keys, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// An iterative solver stopped without meeting its tolerance.
class SolverError : public Error {
public:
    using Error::Error;
};

/// The bisection oracle could not bracket a root.
class OracleError : public Error {
public:
    using Error::Error;
};

}  // namespace dnp
