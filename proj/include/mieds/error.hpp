#pragma once

#include <stdexcept>
#include <string>

namespace mieds {

/// Base of every error raised by the library. The message is prefixed with
/// the name of the module that raised it ("expr: division by zero").
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& message)
        : std::runtime_error(module + ": " + message), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

/// A mathematical operation was attempted outside its domain (singular
/// expansion point, division by zero, non-finite state).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid arguments or configuration (dimension mismatch, bad parameters).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Reading or writing a file failed.
class IoError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : Error("expr", "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Integration aborted because the right-hand side failed at `time()`.
class IntegrationError : public DomainError {
public:
    IntegrationError(double time, const std::string& message)
        : DomainError("integrate", "failed at t=" + std::to_string(time) + ": " + message), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

} // namespace mieds
