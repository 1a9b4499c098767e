#pragma once

#include "torus/fft.hpp"
#include "torus/geometry.hpp"
#include "torus/laplace.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace torus {

/// Clifford multiplication convention. `standard` is v . psi = -i (v1 sigma1 + v2 sigma2) psi,
/// the one compatible with D = -i (sigma1 d1 + sigma2 d2). `corrupted` drops the -i, making
/// the action Hermitian; it exists only as a negative control for the imaginarity checks.
enum class GammaConvention { standard, corrupted };

/// Flat Dirac operator D = -i (sigma1 d1 + sigma2 d2) for one spin structure.
///
/// Fourier symbol [[0, k1 - i k2], [k1 + i k2, 0]] with k = 2 pi (m + phase) / L; the phase
/// shift is realised by twisting nodal values by exp(-2 pi i phase j / n) before the FFT.
/// The periodic Nyquist wavenumber -pi n / L is kept, so D^2 is the spectral Laplacian.
class DiracOperator {
public:
    DiracOperator(const TorusGrid& grid, SpinStructure spin);

    const TorusGrid& grid() const noexcept { return grid_; }
    SpinStructure spin() const noexcept { return spin_; }

    /// Throws PreconditionError if phi has another grid or spin structure.
    SpinorField apply(const SpinorField& phi) const;
    /// Flattened form (upper block, lower block), length 2 n^2.
    void apply(std::span<const complex> in, std::span<complex> out) const;
    /// Moore-Penrose inverse: zero on the kernel (constant spinors, trivial structure only).
    void apply_pseudo_inverse(std::span<const complex> in, std::span<complex> out) const;

    /// |k + phase| (2 pi / L) per flat mode index; the symbol eigenvalues are plus/minus these.
    const std::vector<double>& symbol_magnitudes() const noexcept { return magnitude_; }

private:
    template <class Fn>
    void multiply(std::span<const complex> in, std::span<complex> out, Fn&& scale) const;

    TorusGrid grid_;
    SpinStructure spin_;
    std::vector<double> kx_, ky_;
    std::vector<double> magnitude_;
    std::vector<complex> twist_;  // exp(-2 pi i (px i + py j) / n)
    std::shared_ptr<const Fft2d> fft_;
};

SpinorField apply_dirac(const DiracOperator& op, const SpinorField& phi);

/// Default kernel band, in units of 2 pi / L.
inline constexpr double default_kernel_tolerance = 1e-8;

/// Number of flat eigenvalues with |lambda| < tol (2 pi / L), read off the symbol.
int kernel_dimension(const DiracOperator& op, double tol = default_kernel_tolerance);

/// Kernel dimension of the weighted pencil D phi = lambda f phi: the flat kernel (conformally
/// invariant, exact) plus any eigenvalue pair the factor pushes inside the band, found by
/// Lanczos on the inverse operator.
int kernel_dimension(const DiracOperator& op, const ConformalFactor& factor, double tol = default_kernel_tolerance,
                     const SolveOptions& options = {});

struct DiracSolveOptions : SolveOptions {
    double kernel_tolerance = default_kernel_tolerance;
    DiracSolveOptions() { block_size = 2; }
};

/// Smallest positive lambda with D phi = lambda f phi. The eigenspinor satisfies the integral
/// of |phi|^2 f = 1. Throws ResolutionError if that lambda sits inside the kernel band and
/// ConvergenceError if the residual misses the tolerance.
SpectralResult<SpinorField> first_positive_weighted_eigenvalue(const DiracOperator& op, const ConformalFactor& factor,
                                                               const DiracSolveOptions& options = {});

/// The `count` smallest positive pencil eigenvalues, ascending (multiplicities included).
std::vector<double> weighted_dirac_eigenvalues(const DiracOperator& op, const ConformalFactor& factor, int count,
                                               const DiracSolveOptions& options = {});

/// Integral of |D phi|^2 / f over the integral of <D phi, phi>. Throws AdmissibilityError if the
/// denominator is not positive.
double rayleigh_quotient_J(const SpinorField& phi, const ConformalFactor& factor, const DiracOperator& op);

/// Pointwise v . psi at flat node k.
void clifford_multiply(double v1, double v2, const complex& up, const complex& down, complex& out_up,
                       complex& out_down, GammaConvention convention = GammaConvention::standard) noexcept;

/// (v1, v2) . psi nodewise.
SpinorField clifford_multiply(const ScalarField& v1, const ScalarField& v2, const SpinorField& psi,
                              GammaConvention convention = GammaConvention::standard);

/// f^{-1/2} phi. Rejects raw bump factors (kink at r = alpha); mollify them first.
SpinorField conformal_push(const SpinorField& phi, const ConformalFactor& factor);

/// Evaluates the Dirac operator of f^2 g on f^{-1/2} phi by the local formula
/// f^{-1} (D chi + 1/2 grad(ln f) . chi) and compares with f^{-3/2} D phi.
/// Returns max |difference| / max |f^{-3/2} D phi|.
double conformal_covariance_residual(const DiracOperator& op, const SpinorField& phi, const ConformalFactor& factor);

enum class DenseDiracRoute { chiral_svd, hermitian };

/// Eigenvalues of f^{-1/2} D f^{-1/2} from direct-summation differentiation matrices (no FFT),
/// the `count` smallest in magnitude, sorted by magnitude then sign. Refuses n > 32.
///
/// chiral_svd uses that the spectrum is plus/minus the singular values of the off-diagonal block;
/// hermitian diagonalises the full 2 n^2 matrix.
std::vector<double> dense_dirac_oracle(const ConformalFactor& factor, SpinStructure spin, int count,
                                       DenseDiracRoute route = DenseDiracRoute::chiral_svd);

}  // namespace torus
