#pragma once

#include "torus/dirac.hpp"
#include "torus/geometry.hpp"

#include <array>

namespace torus {

using ConstantSpinor = std::array<complex, 2>;

/// (1, 1) / sqrt(2): unit, and not an eigenvector of the chirality sigma3.
ConstantSpinor unit_base_spinor() noexcept;
/// (1, 1) / 2, so that the witness satisfies |psi| = f^{1/2} pointwise.
ConstantSpinor witness_base_spinor() noexcept;

/// Inverse stereographic conformal factor 2 / (1 + |y|^2).
double sphere_factor(double y1, double y2) noexcept;

/// psi(y) = f(y) (psi0 - y . psi0) at one point, Clifford product in the standard convention.
void model_spinor_at(double y1, double y2, const ConstantSpinor& base, complex& up, complex& down) noexcept;

/// Nodal values of psi(x / scale), x the minimum-image offset from p. Satisfies D psi = f psi
/// (D in y), i.e. D[psi(x / scale)] = f(x / scale) psi(x / scale) / scale away from the seam,
/// and |psi|^2 = 2 f |psi0|^2.
SpinorField model_spinor(const TorusGrid& grid, double scale, const ConstantSpinor& base = unit_base_spinor());

/// psi_eps = eta(x) psi(x / eps) on the trivial spin structure.
struct WitnessSpinor {
    SpinorField field;
    double epsilon;
    CutoffProfile profile;
    ConstantSpinor base_spinor;
};

/// Throws ConfigurationError if eps is not in (0, delta] or the cutoff support reaches period / 2.
WitnessSpinor witness_spinor(const TorusGrid& grid, const CutoffProfile& profile, double epsilon,
                             const ConstantSpinor& base = witness_base_spinor());

/// Closed form D psi_eps = grad eta . psi(x/eps) + (eta / eps) f(x/eps) psi(x/eps), split into
/// the two terms.
struct WitnessDerivative {
    SpinorField gradient_term;
    SpinorField bulk_term;
};
WitnessDerivative witness_derivative(const WitnessSpinor& w, GammaConvention convention = GammaConvention::standard);

struct NumeratorSplit {
    double I1;  ///< integral of |grad eta . psi|^2 / f
    double I2;  ///< integral of (eta / eps)^2 f(x/eps)^2 |psi|^2 / f
    double max_cross_real;  ///< largest nodal |Re <grad eta . psi, psi>| / (|psi|^2 |grad eta|)
};

/// Tolerance of the nodal imaginarity assertion.
inline constexpr double imaginarity_tolerance = 1e-10;

/// The integral of |D psi_eps|^2 f^{-1} as I1 + I2. The cross term is dropped after checking at
/// every node that Re <grad eta . psi, psi> vanishes; throws ConsistencyError otherwise.
/// `factor` must be the bump with the witness's epsilon (possibly rescaled).
NumeratorSplit numerator_split(const WitnessSpinor& w, const ConformalFactor& factor,
                               GammaConvention convention = GammaConvention::standard);

/// Real part of the integral of <D psi_eps, psi_eps>; throws ConsistencyError if the imaginary
/// part is not negligible.
double denominator(const WitnessSpinor& w, GammaConvention convention = GammaConvention::standard);

struct WitnessBound {
    double I1;
    double I2;
    double denominator;
    double quotient;  ///< J = (I1 + I2) / denominator
    double volume;
    double product;  ///< J^2 Vol, an upper bound for lambda1^2 Vol
};

/// Throws AdmissibilityError if the denominator is not positive.
WitnessBound witness_bound(const TorusGrid& grid, const CutoffProfile& profile, const ConformalFactor& factor,
                           double epsilon);

/// ((I1 + I2) / denominator)^2 times the generalized volume.
double upper_bound_product(const TorusGrid& grid, const CutoffProfile& profile, const ConformalFactor& factor,
                           double epsilon);

}  // namespace torus
