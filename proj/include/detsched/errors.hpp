#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace detsched {

// Base for every error raised by the library. The CLI maps each subclass to
// its own exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input: bad block files, illegal partitions, invalid schedules.
class ValidationError : public Error {
public:
    using Error::Error;
};

class ParseError : public ValidationError {
public:
    ParseError(const std::string& what, std::size_t line)
        : ValidationError(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// An exact algorithm was asked to run above its configured size cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

// A library invariant was observed broken at runtime. Never expected.
class InvariantError : public Error {
public:
    using Error::Error;
};

}  // namespace detsched
