#pragma once

#include <stdexcept>
#include <string>

namespace mgr {

/// Bad argument to a constructor or factory (out-of-range size, malformed table, ...).
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A structure that was required to satisfy algebraic axioms does not.
struct AxiomViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An operation applied outside its domain (e.g. product across components).
struct InvalidOperation : std::logic_error {
    using std::logic_error::logic_error;
};

/// Text input rejected by one of the parsers; the message carries line/column.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace mgr
