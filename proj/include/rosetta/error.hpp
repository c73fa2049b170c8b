#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rosetta {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// Raised by substitution when a free variable of the substituted term would
// be bound. Evaluation of closed terms never triggers it.
class CaptureError : public Error {
public:
    using Error::Error;
};

// Raised when two rows handed to the pattern-match compiler overlap.
class OverlapError : public Error {
public:
    using Error::Error;
};

// A paired evaluator diverged from its partner. Carries the first step at
// which the alignment check failed.
class SimulationMismatch : public Error {
public:
    SimulationMismatch(std::size_t step, const std::string& what)
        : Error("step " + std::to_string(step) + ": " + what), step_(step) {}

    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

} // namespace rosetta
