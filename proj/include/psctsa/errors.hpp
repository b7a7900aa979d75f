#pragma once

#include <stdexcept>
#include <string>

namespace psctsa {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent scenario configuration (schema, units, signs).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input outside an operation's mathematical validity domain
/// (non-positive reactance, missing equilibria, |a| <= |b|, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Numerical integration failure (step-size underflow, bracket failure).
class IntegrationError : public Error {
public:
    using Error::Error;
};

/// Trajectory end state is neither settled nor advancing; carries diagnostics.
class InconclusiveError : public Error {
public:
    using Error::Error;
};

/// Filesystem / stream failure while emitting outputs.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace psctsa
