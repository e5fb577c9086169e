#ifndef HEISLAB_ERRORS_HPP
#define HEISLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace heis {

/// Raised when a numeric parameter violates its admissibility constraint
/// (q <= 1, ell too small, kappa too small, nonpositive horizon, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operands live in Heisenberg groups of different dimension.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Evaluation at a point where the quantity is undefined (e.g. the
/// anisotropy weight at the origin).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A test function fails a terminal condition, or a field's support
/// leaves the integration box.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Iterative solver did not converge, or detected an operator that is not
/// negative definite.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OperatorError : public SolverError {
public:
    using SolverError::SolverError;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace heis

#endif
