#pragma once

#include <stdexcept>
#include <string>

namespace monge2 {

/// Malformed or non-finite input (bad matrix entries, p out of range, bad config).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Spectrum outside the set where a formula is defined (e.g. a vanishing pairwise sum).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The largest eigenvalue is not strictly separated from the next one.
class DegeneracyError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A documented precondition such as f(lambda) = 1 does not hold.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A central-difference stencil would read outside the active grid.
class BoundaryStencilError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Newton backtracking shrank the step below the configured minimum.
class StallError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The Krylov solve broke down or did not reach its tolerance.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace monge2
