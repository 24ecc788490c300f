#pragma once

#include <stdexcept>
#include <string>

namespace g2lab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Wrong degree, shape, or dimension passed to an operation.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A point (form, metric, chart coordinate) lies outside the domain where an
/// operation is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A linear solve that should be nonsingular was not.
class SingularError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration or unreadable/unwritable file.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace g2lab
