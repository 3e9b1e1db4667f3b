#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hsroot {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OrderViolation : public Error {
public:
    using Error::Error;
};

class InvalidBound : public Error {
public:
    using Error::Error;
};

class ZeroInDivisor : public Error {
public:
    using Error::Error;
};

class UnboundedInterval : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class UnknownVariable : public Error {
public:
    using Error::Error;
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

class DegenerateInterval : public Error {
public:
    using Error::Error;
};

class NotOnGrid : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Parse failure with a 1-based source position.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace hsroot
