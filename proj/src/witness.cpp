#include "torus/witness.hpp"

#include "torus/errors.hpp"

#include <cmath>
#include <sstream>

namespace torus {

ConstantSpinor unit_base_spinor() noexcept {
    const double s = 1.0 / std::sqrt(2.0);
    return {complex(s, 0.0), complex(s, 0.0)};
}

ConstantSpinor witness_base_spinor() noexcept { return {complex(0.5, 0.0), complex(0.5, 0.0)}; }

double sphere_factor(double y1, double y2) noexcept { return 2.0 / (1.0 + y1 * y1 + y2 * y2); }

void model_spinor_at(double y1, double y2, const ConstantSpinor& base, complex& up, complex& down) noexcept {
    complex cu, cd;
    clifford_multiply(y1, y2, base[0], base[1], cu, cd);
    const double f = sphere_factor(y1, y2);
    up = f * (base[0] - cu);
    down = f * (base[1] - cd);
}

SpinorField model_spinor(const TorusGrid& grid, double scale, const ConstantSpinor& base) {
    if (!(scale > 0.0)) throw PreconditionError("model spinor scale must be positive");
    SpinorField out(grid, SpinStructure::trivial());
    const int n = grid.nodes();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const std::size_t k = grid.index(i, j);
            model_spinor_at(grid.coordinate(i) / scale, grid.coordinate(j) / scale, base, out.upper()[k], out.lower()[k]);
        }
    }
    return out;
}

WitnessSpinor witness_spinor(const TorusGrid& grid, const CutoffProfile& profile, double epsilon,
                             const ConstantSpinor& base) {
    validate_cutoff(grid, profile);
    if (!(epsilon > 0.0) || !(epsilon <= profile.delta)) {
        std::ostringstream msg;
        msg << "witness needs 0 < eps <= delta (eps=" << epsilon << ", delta=" << profile.delta << ")";
        throw ConfigurationError(msg.str());
    }
    SpinorField field = model_spinor(grid, epsilon, base);
    const int n = grid.nodes();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const std::size_t k = grid.index(i, j);
            const double eta = profile.value(grid.distance_to_origin(i, j));
            field.upper()[k] *= eta;
            field.lower()[k] *= eta;
        }
    }
    return {std::move(field), epsilon, profile, base};
}

WitnessDerivative witness_derivative(const WitnessSpinor& w, GammaConvention convention) {
    const TorusGrid& grid = w.field.grid();
    const int n = grid.nodes();
    WitnessDerivative d{SpinorField(grid, w.field.spin()), SpinorField(grid, w.field.spin())};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const std::size_t k = grid.index(i, j);
            const double x1 = grid.coordinate(i), x2 = grid.coordinate(j);
            const double r = std::hypot(x1, x2);
            const double y1 = x1 / w.epsilon, y2 = x2 / w.epsilon;
            complex up, down;
            model_spinor_at(y1, y2, w.base_spinor, up, down);
            const double eta = w.profile.value(r);
            const double deta = r > 0.0 ? w.profile.radial_derivative(r) / r : 0.0;
            clifford_multiply(deta * x1, deta * x2, up, down, d.gradient_term.upper()[k], d.gradient_term.lower()[k],
                              convention);
            const double bulk = eta / w.epsilon * sphere_factor(y1, y2);
            d.bulk_term.upper()[k] = bulk * up;
            d.bulk_term.lower()[k] = bulk * down;
        }
    }
    return d;
}

namespace {

void require_matching_factor(const WitnessSpinor& w, const ConformalFactor& factor) {
    if (!(factor.grid() == w.field.grid())) throw PreconditionError("witness and factor live on different grids");
    if (factor.kind() != FactorKind::bump || !factor.epsilon()
        || std::abs(*factor.epsilon() - w.epsilon) > 1e-12 * w.epsilon)
        throw PreconditionError("witness integrals need the bump factor built with the witness's epsilon");
}

}  // namespace

NumeratorSplit numerator_split(const WitnessSpinor& w, const ConformalFactor& factor, GammaConvention convention) {
    require_matching_factor(w, factor);
    const TorusGrid& grid = w.field.grid();
    const int n = grid.nodes();
    const double h = grid.spacing();
    const WitnessDerivative d = witness_derivative(w, convention);

    NumeratorSplit out{0.0, 0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const std::size_t k = grid.index(i, j);
            const double r = grid.distance_to_origin(i, j);
            const double grad = std::abs(w.profile.radial_derivative(r));
            out.I1 += d.gradient_term.norm2_at(k) / factor[k];
            out.I2 += d.bulk_term.norm2_at(k) / factor[k];
            if (grad > 0.0) {
                // <grad eta . psi(x/eps), psi(x/eps)> with the unscaled model spinor
                complex up, down;
                model_spinor_at(grid.coordinate(i) / w.epsilon, grid.coordinate(j) / w.epsilon, w.base_spinor, up, down);
                const double psi2 = std::norm(up) + std::norm(down);
                const complex pairing = d.gradient_term.upper()[k] * std::conj(up) + d.gradient_term.lower()[k] * std::conj(down);
                out.max_cross_real = std::max(out.max_cross_real, std::abs(pairing.real()) / (psi2 * grad));
            }
        }
    }
    out.I1 *= h * h;
    out.I2 *= h * h;
    if (!(out.max_cross_real <= imaginarity_tolerance)) {
        std::ostringstream msg;
        msg << "Clifford cross term is not imaginary: max |Re<grad eta . psi, psi>| / (|psi|^2 |grad eta|) = "
            << out.max_cross_real << " (gamma convention bug)";
        throw ConsistencyError(msg.str());
    }
    return out;
}

double denominator(const WitnessSpinor& w, GammaConvention convention) {
    const TorusGrid& grid = w.field.grid();
    const double h = grid.spacing();
    const WitnessDerivative d = witness_derivative(w, convention);
    complex sum = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const complex gt = SpinorField::inner_at(d.gradient_term, w.field, k);
        const complex bt = SpinorField::inner_at(d.bulk_term, w.field, k);
        sum += gt + bt;
        scale += std::abs(gt) + std::abs(bt);
    }
    if (std::abs(sum.imag()) > 1e-9 * scale) {
        std::ostringstream msg;
        msg << "witness denominator has a non-negligible imaginary part " << sum.imag() * h * h << " (scale "
            << scale * h * h << ")";
        throw ConsistencyError(msg.str());
    }
    return sum.real() * h * h;
}

WitnessBound witness_bound(const TorusGrid& grid, const CutoffProfile& profile, const ConformalFactor& factor,
                           double epsilon) {
    const WitnessSpinor w = witness_spinor(grid, profile, epsilon);
    const NumeratorSplit split = numerator_split(w, factor);
    const double den = denominator(w);
    if (!(den > 0.0)) throw AdmissibilityError("witness spinor has a non-positive Dirac denominator");
    const double quotient = (split.I1 + split.I2) / den;
    const double volume = generalized_volume(factor);
    return {split.I1, split.I2, den, quotient, volume, quotient * quotient * volume};
}

double upper_bound_product(const TorusGrid& grid, const CutoffProfile& profile, const ConformalFactor& factor,
                           double epsilon) {
    return witness_bound(grid, profile, factor, epsilon).product;
}

}  // namespace torus
