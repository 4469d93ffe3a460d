#pragma once

#include <stdexcept>
#include <string>

namespace gridcarbon {

// Malformed input text. Carries the 1-based position of the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, int line, int column)
        : std::runtime_error(std::move(msg)), line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// Structurally well-formed input that violates a model invariant
// (dangling bus reference, non-convex cost, no reference bus, ...).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::string msg) : std::runtime_error(std::move(msg)) {}
};

// File could not be opened, read, or written.
class IoError : public std::runtime_error {
public:
    explicit IoError(std::string msg) : std::runtime_error(std::move(msg)) {}
};

enum class SolveFailure {
    Infeasible,
    Unbounded,
    Numerical,
};

// Dispatch or LP solve that terminated without an optimum.
class SolveError : public std::runtime_error {
public:
    SolveError(SolveFailure kind, std::string msg)
        : std::runtime_error(std::move(msg)), kind_(kind) {}
    SolveFailure kind() const { return kind_; }

private:
    SolveFailure kind_;
};

// Internal consistency failure (balance violation, singular mix system, ...).
class InternalError : public std::runtime_error {
public:
    explicit InternalError(std::string msg) : std::runtime_error(std::move(msg)) {}
};

} // namespace gridcarbon
