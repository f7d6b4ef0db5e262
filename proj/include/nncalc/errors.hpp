#pragma once

#include <stdexcept>
#include <string>

namespace nncalc {

// Base class for every error thrown by the toolkit.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Result left the representable positive range (overflow, underflow,
// or a non-finite intermediate).
class RangeError : public Error {
public:
    using Error::Error;
};

// Input outside an operation's domain (oslash by 1, evaluation outside
// a curve's interval, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A value violated a type invariant (non-positive where positivity is
// required, declared flag contradicted by the data, ...).
class InvariantError : public Error {
public:
    using Error::Error;
};

// Caller violated a documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Degenerate input: singular Jacobian, or a transformation family whose
// time map is stationary at a probe (velocity transform divides by the
// oplus-zero).
class DegenerateError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_residual, int iterations)
        : Error(what), last_residual(last_residual), iterations(iterations) {}

    double last_residual;
    int iterations;
};

// Syntax error with 1-based source position.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(what + " (line " + std::to_string(line) + ", column " +
                std::to_string(column) + ")"),
          line(line), column(column) {}

    int line;
    int column;
};

class UnknownIdentifierError : public ParseError {
public:
    UnknownIdentifierError(const std::string& name, int line, int column)
        : ParseError("unknown identifier '" + name + "'", line, column), name(name) {}

    std::string name;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace nncalc
