#pragma once

#include <stdexcept>
#include <string>

namespace primespec {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Input data too short/narrow for the requested computation.
class InsufficientDataError : public Error {
public:
    explicit InsufficientDataError(const std::string& msg) : Error(msg) {}
};

// A numeric routine failed to converge or produced a non-finite value.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

// External data (checkpoint file, cached table) contradicts a local recount.
class IntegrityError : public Error {
public:
    explicit IntegrityError(const std::string& msg) : Error(msg) {}
};

// Malformed input file; carries a 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line = 0)
        : Error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

// Filesystem-level failure (missing file, unwritable path).
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace primespec
