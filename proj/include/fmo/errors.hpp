// errors.hpp: exception types shared by the fmo library

#pragma once

#include <stdexcept>
#include <string>

namespace fmo {

// Invalid argument outside an operation's domain (n0 = 0, negative population, ...)
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Site network passed in the wrong unit system
class UnitError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Integration produced a non-finite state, or a checked invariant broke numerically
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double time_ps)
        : std::runtime_error(what + " (t = " + std::to_string(time_ps) + " ps)"), time_(time_ps) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

// Step-doubling guard disagreement: the caller must choose a smaller step
class StepSizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Hermiticity or similar structural drift in a closure state
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Requested Fock sector is beyond the configured cap
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Config text error, always tied to a 1-based line number (0 when not line-specific)
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace fmo
