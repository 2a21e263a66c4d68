#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dwlab {

// Precondition / domain violations (|z| >= 1 passed as a disk point, singular
// Mobius transform, evaluation at a recorded pole, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Expression parser failure with the byte offset of the failure and the set
// of token kinds that would have been accepted there.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t offset, std::vector<std::string> expected)
        : std::runtime_error(std::move(message)), offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

// A conjugation or experiment was asked to run on a map whose dynamical type
// does not match its precondition. Carries the numeric evidence.
class TypeMismatch : public std::runtime_error {
public:
    TypeMismatch(std::string message, double evidence = 0.0)
        : std::runtime_error(std::move(message)), evidence_(evidence) {}

    double evidence() const { return evidence_; }

private:
    double evidence_;
};

// Iterative solver failed to reach its tolerance within the sweep budget.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dwlab
