#pragma once

#include "torus/fields.hpp"

#include <optional>
#include <string_view>

namespace torus {

enum class FactorKind { bump, constant, smooth_custom, mollified };

std::string_view to_string(FactorKind kind);

/// Positive nodal weight f of the conformal (generalized) metric f^2 g.
class ConformalFactor {
public:
    /// Throws PreconditionError if any value is non-positive or non-finite.
    ConformalFactor(ScalarField values, FactorKind kind, std::optional<double> alpha = std::nullopt,
                    std::optional<double> epsilon = std::nullopt);

    const ScalarField& values() const noexcept { return values_; }
    const TorusGrid& grid() const noexcept { return values_.grid(); }
    FactorKind kind() const noexcept { return kind_; }
    std::optional<double> alpha() const noexcept { return alpha_; }
    std::optional<double> epsilon() const noexcept { return epsilon_; }

    double operator[](std::size_t k) const noexcept { return values_[k]; }
    double min() const noexcept;
    double max() const noexcept;

    /// c * f; keeps kind and parameters.
    ConformalFactor scaled(double c) const;

private:
    ScalarField values_;
    FactorKind kind_;
    std::optional<double> alpha_;
    std::optional<double> epsilon_;
};

ConformalFactor constant_factor(const TorusGrid& grid, double value);
/// Wraps an arbitrary positive smooth weight.
ConformalFactor custom_factor(ScalarField values);

/// f_{alpha,eps}(r) = eps^2 / (eps^2 + r^2) for r <= alpha, frozen at its r = alpha value outside.
double bump_profile(double alpha, double epsilon, double r) noexcept;

/// Nodal samples of the bump profile at the minimum-image distance to the origin.
/// Requires 0 < eps <= alpha and 2 alpha < period / 2.
ConformalFactor bump_factor(const TorusGrid& grid, double alpha, double epsilon);

/// Continuum value of the integral of f_{alpha,eps}^2 over the torus of side `period`.
double bump_volume_exact(double period, double alpha, double epsilon) noexcept;

/// Radial cutoff: 1 on r <= delta, 0 on r >= 2 delta, a smoothstep of odd polynomial
/// degree `order` in between (3 = cubic, 5 = quintic).
struct CutoffProfile {
    double delta = 0.125;
    int order = 5;

    double value(double r) const noexcept;
    /// d(eta)/dr.
    double radial_derivative(double r) const noexcept;
};

/// Generalized smoothstep of odd degree: 0 at t <= 0, 1 at t >= 1, (order-1)/2 vanishing
/// derivatives at both ends.
double smoothstep(int order, double t) noexcept;
double smoothstep_derivative(int order, double t) noexcept;

/// Throws ConfigurationError if delta <= 0, the order is unsupported, or 2 delta >= period / 2.
void validate_cutoff(const TorusGrid& grid, const CutoffProfile& profile);

ScalarField cutoff_field(const TorusGrid& grid, const CutoffProfile& profile);

/// h^2 times the nodal sum (periodic trapezoidal rule).
double integrate(const ScalarField& field);

/// Integral of f^2 against the flat area element.
double generalized_volume(const ConformalFactor& factor);

/// Circular convolution with a normalised, nonnegative Gaussian kernel of standard
/// deviation `width` (minimum-image distances). Output kind is `mollified`.
ConformalFactor mollify_factor(const ConformalFactor& factor, double width);

}  // namespace torus
