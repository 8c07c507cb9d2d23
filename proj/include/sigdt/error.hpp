#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sigdt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line number (0 when unknown).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Invalid configuration or parameter value.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Vector lengths that do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Precondition on the contents of a data collection is not met
/// (empty input, too few genuines, single class, ...).
class DataError : public Error {
public:
    using Error::Error;
};

/// SMO did not reach the KKT tolerance within its iteration budget.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace sigdt
