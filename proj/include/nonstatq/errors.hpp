#pragma once

#include <stdexcept>
#include <string>

namespace nonstatq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A quantity was evaluated outside its domain (negative permittivity,
/// tabulated profile queried outside its samples, nonpositive frequency...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Integration or quadrature failed to reach the requested accuracy.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent scenario description.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace nonstatq
