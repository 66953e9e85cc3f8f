#pragma once

#include <stdexcept>
#include <string>

namespace cavsat {

/// Unparseable input (DIMACS text, range expressions, checkpoints).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A clause or formula was evaluated while some of its variables are unset.
struct IncompleteAssignmentError : std::logic_error {
    explicit IncompleteAssignmentError(const std::string& what) : std::logic_error(what) {}
};

/// Conflicting hard messages: a normalization denominator vanished or a
/// log-term became nonpositive.
struct ContradictionError : std::runtime_error {
    explicit ContradictionError(const std::string& what) : std::runtime_error(what) {}
};

/// Instance too large for the exhaustive/DPLL enumeration guard.
struct EnumerationGuardError : std::invalid_argument {
    explicit EnumerationGuardError(const std::string& what) : std::invalid_argument(what) {}
};

/// A root-bracketing interval without a sign change.
struct BracketingError : std::runtime_error {
    explicit BracketingError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid generator or engine parameters.
struct InvalidInstanceError : std::invalid_argument {
    explicit InvalidInstanceError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace cavsat
