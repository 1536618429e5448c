#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nvfield {

/// Base for every error the library raises on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs fall outside the validity regime of a perturbative formula, or are
/// not finite.
class RegimeError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent arguments (bad units, bad schedule, flat data).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// File system or parse failures.
class IoError : public Error {
public:
    using Error::Error;
};

class ParseError : public IoError {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : IoError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace nvfield
