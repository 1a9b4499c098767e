#include "torus/geometry.hpp"

#include "torus/errors.hpp"
#include "torus/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace torus {

std::string_view to_string(FactorKind kind) {
    switch (kind) {
        case FactorKind::bump: return "bump";
        case FactorKind::constant: return "constant";
        case FactorKind::smooth_custom: return "smooth-custom";
        case FactorKind::mollified: return "mollified";
    }
    return "unknown";
}

ConformalFactor::ConformalFactor(ScalarField values, FactorKind kind, std::optional<double> alpha,
                                 std::optional<double> epsilon)
    : values_(std::move(values)), kind_(kind), alpha_(alpha), epsilon_(epsilon) {
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!(values_[k] > 0.0) || !std::isfinite(values_[k]))
            throw PreconditionError("conformal factor must be positive and finite at every node");
    }
}

double ConformalFactor::min() const noexcept {
    const auto v = values_.values();
    return *std::min_element(v.begin(), v.end());
}

double ConformalFactor::max() const noexcept {
    const auto v = values_.values();
    return *std::max_element(v.begin(), v.end());
}

ConformalFactor ConformalFactor::scaled(double c) const {
    ScalarField out = values_;
    for (double& v : out.values()) v *= c;
    return ConformalFactor(std::move(out), kind_, alpha_, epsilon_);
}

ConformalFactor constant_factor(const TorusGrid& grid, double value) {
    return ConformalFactor(ScalarField(grid, value), FactorKind::constant);
}

ConformalFactor custom_factor(ScalarField values) {
    return ConformalFactor(std::move(values), FactorKind::smooth_custom);
}

double bump_profile(double alpha, double epsilon, double r) noexcept {
    const double e2 = epsilon * epsilon;
    const double rr = std::min(r, alpha);
    return e2 / (e2 + rr * rr);
}

ConformalFactor bump_factor(const TorusGrid& grid, double alpha, double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon <= alpha) || !(2.0 * alpha < grid.period() / 2.0)) {
        std::ostringstream msg;
        msg << "bump parameters violate the chain eps <= alpha <= delta <= period/4 (eps=" << epsilon
            << ", alpha=" << alpha << ", period=" << grid.period() << ")";
        throw ConfigurationError(msg.str());
    }
    ScalarField values(grid);
    const int n = grid.nodes();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) values(i, j) = bump_profile(alpha, epsilon, grid.distance_to_origin(i, j));
    return ConformalFactor(std::move(values), FactorKind::bump, alpha, epsilon);
}

double bump_volume_exact(double period, double alpha, double epsilon) noexcept {
    const double e2 = epsilon * epsilon;
    const double a2 = alpha * alpha;
    const double outside = e2 / (e2 + a2);
    return std::numbers::pi * e2 * a2 / (e2 + a2) + outside * outside * (period * period - std::numbers::pi * a2);
}

namespace {

double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

}  // namespace

double smoothstep(int order, double t) noexcept {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const int m = (order - 1) / 2;
    double sum = 0.0;
    for (int k = 0; k <= m; ++k) sum += binomial(m + k, k) * binomial(2 * m + 1, m - k) * std::pow(-t, k);
    return std::pow(t, m + 1) * sum;
}

double smoothstep_derivative(int order, double t) noexcept {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const int m = (order - 1) / 2;
    // (2m+1)! / (m!)^2 t^m (1-t)^m
    const double c = (2 * m + 1) * binomial(2 * m, m);
    return c * std::pow(t * (1.0 - t), m);
}

double CutoffProfile::value(double r) const noexcept { return 1.0 - smoothstep(order, (r - delta) / delta); }

double CutoffProfile::radial_derivative(double r) const noexcept {
    return -smoothstep_derivative(order, (r - delta) / delta) / delta;
}

void validate_cutoff(const TorusGrid& grid, const CutoffProfile& profile) {
    if (!(profile.delta > 0.0)) throw ConfigurationError("cutoff radius delta must be positive");
    if (profile.order < 3 || profile.order % 2 == 0 || profile.order > 15)
        throw ConfigurationError("cutoff smoothstep order must be odd and in [3, 15], got "
                                 + std::to_string(profile.order));
    if (!(2.0 * profile.delta < grid.period() / 2.0)) {
        std::ostringstream msg;
        msg << "cutoff support 2*delta=" << 2.0 * profile.delta << " must stay below period/2=" << grid.period() / 2.0;
        throw ConfigurationError(msg.str());
    }
}

ScalarField cutoff_field(const TorusGrid& grid, const CutoffProfile& profile) {
    validate_cutoff(grid, profile);
    ScalarField eta(grid);
    const int n = grid.nodes();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) eta(i, j) = profile.value(grid.distance_to_origin(i, j));
    return eta;
}

double integrate(const ScalarField& field) {
    const double h = field.grid().spacing();
    double sum = 0.0;
    for (double v : field.values()) sum += v;
    return h * h * sum;
}

double generalized_volume(const ConformalFactor& factor) {
    const double h = factor.grid().spacing();
    double sum = 0.0;
    for (double v : factor.values().values()) sum += v * v;
    return h * h * sum;
}

ConformalFactor mollify_factor(const ConformalFactor& factor, double width) {
    if (!(width > 0.0)) throw PreconditionError("mollification width must be positive");
    const TorusGrid& grid = factor.grid();
    const int n = grid.nodes();
    const std::size_t size = grid.size();

    std::vector<complex> kernel(size);
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double d = grid.distance_to_origin(i, j);
            const double w = std::exp(-0.5 * d * d / (width * width));
            kernel[grid.index(i, j)] = w;
            mass += w;
        }
    }
    std::vector<complex> data(size);
    for (std::size_t k = 0; k < size; ++k) data[k] = factor[k];

    const Fft2d fft(n);
    fft.forward(kernel);
    fft.forward(data);
    for (std::size_t k = 0; k < size; ++k) data[k] *= kernel[k] / mass;
    fft.backward(data);

    ScalarField out(grid);
    for (std::size_t k = 0; k < size; ++k) out[k] = data[k].real();
    return ConformalFactor(std::move(out), FactorKind::mollified, factor.alpha(), factor.epsilon());
}

}  // namespace torus
