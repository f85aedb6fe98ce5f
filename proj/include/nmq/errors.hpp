// errors.hpp — Exception types shared by all nmq modules

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace nmq {

// Argument outside the mathematical domain of an operation (e.g. J(0) for 1/f).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A numerical procedure did not reach its requested accuracy.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double achieved_error = 0.0)
        : std::runtime_error(what), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

// Query outside a sampled table (time beyond t_max, etc.).
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Grid does not satisfy the structural requirement of an operation.
class GridError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed or invalid run configuration. line is 0 when not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::string field = {}, int line = 0)
        : std::runtime_error(what), field_(std::move(field)), line_(line) {}

    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

private:
    std::string field_;
    int line_;
};

} // namespace nmq
