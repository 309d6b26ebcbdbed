// Error taxonomy shared by all modules.
//
// StructuralError   — mismatched meshes, malformed containers, empty inputs.
// DomainError       — arguments outside the mathematical domain of an operation.
// NumericDomainError— NaN/overflow produced while evaluating a functional.
// PreconditionError — a stated precondition of an operation was violated.
// ExtrapolationError— tabulated data queried outside its range.
// SolverError       — iterative solver breakdown or non-convergence.

#ifndef PARVEX_ERRORS_HPP
#define PARVEX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace parvex {

struct StructuralError : std::runtime_error {
    explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericDomainError : std::runtime_error {
    explicit NumericDomainError(const std::string& what) : std::runtime_error(what) {}
};

struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

struct ExtrapolationError : std::runtime_error {
    explicit ExtrapolationError(const std::string& what) : std::runtime_error(what) {}
};

// Carries the last residual norm so a failed time step can be reported.
struct SolverError : std::runtime_error {
    double last_residual;
    explicit SolverError(const std::string& what, double residual = 0.0)
        : std::runtime_error(what), last_residual(residual) {}
};

} // namespace parvex

#endif
