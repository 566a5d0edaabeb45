#pragma once

#include <stdexcept>
#include <string>

namespace instanet {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file (wrong arity, non-numeric field, ...). Carries the
/// offending line number in the message.
struct ParseError : Error {
    using Error::Error;
};

/// Structurally well-formed input that violates a contract (zero weight,
/// uncovered node, inadmissible boundary edge, ...).
struct ValidationError : Error {
    using Error::Error;
};

/// Bad argument to an operation (out-of-range parameter, size guard).
struct ArgumentError : Error {
    using Error::Error;
};

/// A statistic that is undefined for the given input (empty edge set,
/// singleton graph, zero-volume community).
struct UndefinedStatError : Error {
    using Error::Error;
};

/// Iterative method failed to reach its tolerance within the iteration cap.
struct ConvergenceError : Error {
    double residual = 0.0;
    ConvergenceError(const std::string& what, double res)
        : Error(what), residual(res) {}
};

} // namespace instanet
