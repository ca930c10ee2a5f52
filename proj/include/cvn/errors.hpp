#pragma once

#include <stdexcept>
#include <string>

namespace cvn {

/// Base class for every error the engine raises on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A state index or label outside its variable's frame, or malformed numeric input.
struct InvalidStateError : Error {
    using Error::Error;
};

/// A domain relation (subset/superset/equality) required by an operation does not hold.
struct DomainError : Error {
    using Error::Error;
};

/// Interval bounds cut an empty set out of the probability simplex (sum of lowers > 1
/// or sum of uppers < 1).
struct EmptyCredalSetError : Error {
    using Error::Error;
};

/// Interval bounds are nonempty but not reachable, in a context where silent
/// tightening is not allowed (e.g. explicit table rows in a network file).
struct CoherenceError : Error {
    using Error::Error;
};

/// A combinatorial enumeration was requested beyond its configured size limit.
struct ThresholdExceededError : Error {
    using Error::Error;
};

/// Every joint choice of mass functions has (numerically) zero overlap; the
/// combination is undefined.
struct TotalConflictError : Error {
    using Error::Error;
};

/// The optimizer failed an internal consistency check.
struct SolverError : Error {
    using Error::Error;
};

/// A linear program has no feasible point.
struct InfeasibleError : SolverError {
    using SolverError::SolverError;
};

/// A knowledge rule is satisfied by no configuration of its domain.
struct UnsatisfiableRuleError : Error {
    using Error::Error;
};

/// A knowledge rule is structurally malformed (bad reliability, non-integer
/// frame labels in a sum rule, ...).
struct InvalidRuleError : Error {
    using Error::Error;
};

/// Network file syntax or reference error, with source position.
struct ParseError : Error {
    ParseError(int line_, int column_, const std::string& what_)
        : Error("line " + std::to_string(line_) + ":" + std::to_string(column_) + ": " + what_),
          line(line_),
          column(column_) {}
    int line;
    int column;
};

}  // namespace cvn
