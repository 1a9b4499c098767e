#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace torus {

template <class Scalar>
using LinearMap = std::function<void(std::span<const Scalar>, std::span<Scalar>)>;

struct LanczosOptions {
    int wanted = 1;          ///< number of largest eigenvalues to converge
    int block_size = 1;      ///< > 1 resolves multiplicities up to this size
    int max_basis = 48;      ///< basis columns before a thick restart
    int max_matvecs = 20000;
    double tolerance = 1e-10;  ///< on ||A x - theta x|| / |theta|
    std::uint64_t seed = 1;
};

/// Lanczos tolerance used by the pencil solvers: one decade below the pencil tolerance,
/// since the refined pencil residual tracks the Ritz residual only up to a modest factor.
inline double inner_tolerance(double pencil_tolerance) noexcept { return std::max(0.1 * pencil_tolerance, 1e-14); }

template <class Scalar>
struct RitzPairs {
    std::vector<double> values;  ///< descending
    std::vector<std::vector<Scalar>> vectors;
    std::vector<double> residuals;  ///< relative, same order as values
    int matvecs = 0;
    bool converged = false;
};

/// Largest algebraic eigenpairs of a self-adjoint operator on C^dim (or R^dim).
///
/// Thick-restart block Lanczos with full reorthogonalisation. The start block is the
/// operator applied to seeded random vectors, so it lies in the operator's range.
/// Never throws on non-convergence; callers inspect `converged` and `residuals`.
template <class Scalar>
RitzPairs<Scalar> lanczos_largest(std::size_t dim, const LinearMap<Scalar>& op, const LanczosOptions& options);

extern template RitzPairs<double> lanczos_largest(std::size_t, const LinearMap<double>&, const LanczosOptions&);
extern template RitzPairs<std::complex<double>> lanczos_largest(std::size_t,
                                                                const LinearMap<std::complex<double>>&,
                                                                const LanczosOptions&);

}  // namespace torus
