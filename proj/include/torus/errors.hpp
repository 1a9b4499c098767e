#pragma once

#include <stdexcept>
#include <string>

namespace torus {

/// Parameter values that violate a documented chain or range.
class ConfigurationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A caller broke an operation precondition (non-positive weight, wrong support, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Iterative solver stopped before reaching its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_residual, int iterations);

    double last_residual() const noexcept { return last_residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double last_residual_;
    int iterations_;
};

/// Grid too coarse to separate the requested eigenvalues from the kernel band,
/// or too large for a dense oracle.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A trial spinor with non-positive denominator was passed to the Dirac quotient.
class AdmissibilityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An internal identity that holds by construction failed (sign or gamma convention bug).
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace torus
