#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kinex {

/// Invalid argument or precondition violation.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Gini of a vector with zero total is undefined.
class UndefinedGiniError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Zero-variance sample passed to a distribution fit.
class DegenerateDistributionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Least squares with no spread in x.
class SingularFitError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Nothing left to work with after filtering.
class EmptyInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed tabular input. `line()` is 1-based, counting the header.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace kinex
