#pragma once

#include "torus/fft.hpp"
#include "torus/geometry.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace torus {

enum class LaplaceScheme { fourier_spectral, five_point };

std::string_view to_string(LaplaceScheme scheme);

/// Flat Laplacian -(d1^2 + d2^2) as a Fourier multiplier. Nonnegative; kernel = constants.
///
/// fourier_spectral uses |kappa|^2 with the Nyquist wavenumber -pi n / L kept, so the
/// multiplier is exact for trigonometric polynomials of degree < n/2. five_point is the
/// standard stencil, diagonal in the same basis with symbol (2/h)^2 (sin^2 + sin^2).
class LaplaceOperator {
public:
    explicit LaplaceOperator(const TorusGrid& grid, LaplaceScheme scheme = LaplaceScheme::fourier_spectral);

    const TorusGrid& grid() const noexcept { return grid_; }
    LaplaceScheme scheme() const noexcept { return scheme_; }
    /// Symbol at flat FFT index a * n + b.
    std::span<const double> multipliers() const noexcept { return multipliers_; }

    ScalarField apply(const ScalarField& u) const;
    void apply(std::span<const double> in, std::span<double> out) const;
    /// Pseudo-inverse: removes the mean of `in`, inverts on the rest, returns a mean-zero field.
    void apply_pseudo_inverse(std::span<const double> in, std::span<double> out) const;

    /// Integral of |grad u|^2 in the scheme's own metric (Parseval form), equal to
    /// the integral of (Delta u) u.
    double dirichlet_energy(std::span<const double> u) const;
    double dirichlet_energy(const ScalarField& u) const { return dirichlet_energy(u.values()); }

    const Fft2d& fft() const noexcept { return *fft_; }

private:
    template <class Fn>
    void multiply(std::span<const double> in, std::span<double> out, Fn&& symbol) const;

    TorusGrid grid_;
    LaplaceScheme scheme_;
    std::vector<double> multipliers_;
    std::shared_ptr<const Fft2d> fft_;
};

ScalarField apply_laplacian(const LaplaceOperator& op, const ScalarField& u);

/// Nodal spectral gradient (d1 u, d2 u); the Nyquist mode is dropped because its
/// derivative is not real.
std::array<ScalarField, 2> spectral_gradient(const ScalarField& u);

enum class SolverChoice { automatic, lanczos, dense };

struct SolveOptions {
    double tolerance = 1e-10;
    std::uint64_t seed = 1;
    SolverChoice solver = SolverChoice::automatic;
    int max_matvecs = 20000;
    int block_size = 1;
};

template <class Field>
struct SpectralResult {
    double eigenvalue;
    Field eigenfunction;
    double residual;     ///< ||A x - mu B x|| / (mu ||B x||), B = f^2 (Laplace) or f (Dirac)
    int iterations;      ///< operator applications
    std::string solver;  ///< "lanczos" or "dense"
    double h1_norm;      ///< unweighted H^1 norm of the eigenfunction (diagnostic)
};

/// Smallest positive mu with Delta u = mu f^2 u. The eigenfunction is weighted mean-zero
/// (integral of u f^2 = 0) and normalised by the integral of u^2 f^2 = 1.
///
/// Throws ConvergenceError if the pencil residual does not reach options.tolerance.
SpectralResult<ScalarField> first_weighted_eigenvalue(const LaplaceOperator& op, const ConformalFactor& factor,
                                                      const SolveOptions& options = {});

/// The `count` smallest positive pencil eigenvalues, ascending.
std::vector<double> weighted_eigenvalues(const LaplaceOperator& op, const ConformalFactor& factor, int count,
                                         const SolveOptions& options = {});

/// Integral of |grad u|^2 over the integral of u^2 f^2. Throws PreconditionError if
/// the denominator vanishes.
double rayleigh_quotient_I(const ScalarField& u, const ConformalFactor& factor,
                           LaplaceScheme scheme = LaplaceScheme::fourier_spectral);

/// Dense symmetric eigensolve of f^-1 Delta f^-1 with Delta assembled from 1D
/// direct-summation differentiation matrices (no FFT). Returns the `count` smallest
/// eigenvalues ascending; the first is the constant mode 0. Refuses n > 48.
std::vector<double> dense_laplace_oracle(const ConformalFactor& factor, int count,
                                         LaplaceScheme scheme = LaplaceScheme::fourier_spectral);

}  // namespace torus
