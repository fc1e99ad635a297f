#pragma once

#include <stdexcept>
#include <string>

namespace ccqed {

/// Bad input: malformed configuration, out-of-range parameters, mismatched
/// operator dimensions. Maps to CLI exit status 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical invariant broke at runtime (trace drift, negativity,
/// singular inverse, degenerate steady state, non-convergence). Maps to CLI
/// exit status 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ccqed
