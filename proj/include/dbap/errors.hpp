#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dbap {

// Base class for everything thrown by the toolkit.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid layouts, configurations, arguments, or documents.
struct ValidationError : Error {
    using Error::Error;
};

// An operation that only handles one dimensionality was given the other.
struct UnsupportedDimensionError : ValidationError {
    using ValidationError::ValidationError;
};

// Malformed layout document text. Carries the 1-based line of the failure.
struct ParseError : ValidationError {
    ParseError(const std::string& message, std::size_t line)
        : ValidationError("parse error at line " + std::to_string(line) + ": " + message),
          line(line) {}
    std::size_t line;
};

// Filesystem failures (unreadable inputs, unwritable outputs).
struct IoError : Error {
    using Error::Error;
};

}  // namespace dbap
