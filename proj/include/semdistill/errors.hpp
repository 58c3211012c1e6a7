#pragma once

#include <stdexcept>
#include <string>

namespace semdistill {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad input: malformed files, invalid arguments, out-of-domain values.
/// Maps to process exit code 1.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// Parse failure with file position attached.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& msg, std::size_t line, std::size_t column)
        : ValidationError(msg + " (line " + std::to_string(line) + ", column " +
                          std::to_string(column) + ")"),
          line(line),
          column(column) {}

    std::size_t line;
    std::size_t column;
};

/// Numerical failure: eigensolver non-convergence, disconnected graph, etc.
/// Maps to process exit code 2.
class ComputationalError : public Error {
public:
    explicit ComputationalError(const std::string& msg) : Error(msg) {}
};

}  // namespace semdistill
