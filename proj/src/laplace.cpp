#include "torus/laplace.hpp"

#include "torus/errors.hpp"
#include "torus/lanczos.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace torus {

std::string_view to_string(LaplaceScheme scheme) {
    return scheme == LaplaceScheme::five_point ? "five-point" : "fourier-spectral";
}

LaplaceOperator::LaplaceOperator(const TorusGrid& grid, LaplaceScheme scheme)
    : grid_(grid), scheme_(scheme), multipliers_(grid.size()), fft_(std::make_shared<const Fft2d>(grid.nodes())) {
    const int n = grid.nodes();
    const auto kappa = wavenumbers(n, grid.period());
    const double h = grid.spacing();
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            double m;
            if (scheme == LaplaceScheme::fourier_spectral) {
                m = kappa[a] * kappa[a] + kappa[b] * kappa[b];
            } else {
                const double sa = std::sin(std::numbers::pi * a / n);
                const double sb = std::sin(std::numbers::pi * b / n);
                m = 4.0 / (h * h) * (sa * sa + sb * sb);
            }
            multipliers_[static_cast<std::size_t>(a) * n + b] = m;
        }
    }
}

template <class Fn>
void LaplaceOperator::multiply(std::span<const double> in, std::span<double> out, Fn&& symbol) const {
    const std::size_t size = grid_.size();
    if (in.size() != size || out.size() != size) throw PreconditionError("field does not live on the operator's grid");
    std::vector<complex> data(in.begin(), in.end());
    fft_->forward(data);
    for (std::size_t k = 0; k < size; ++k) data[k] *= symbol(multipliers_[k]);
    fft_->backward(data);
    for (std::size_t k = 0; k < size; ++k) out[k] = data[k].real();
}

ScalarField LaplaceOperator::apply(const ScalarField& u) const {
    if (!(u.grid() == grid_)) throw PreconditionError("field does not live on the operator's grid");
    ScalarField out(grid_);
    apply(u.values(), out.values());
    return out;
}

void LaplaceOperator::apply(std::span<const double> in, std::span<double> out) const {
    multiply(in, out, [](double m) { return m; });
}

void LaplaceOperator::apply_pseudo_inverse(std::span<const double> in, std::span<double> out) const {
    multiply(in, out, [](double m) { return m > 0.0 ? 1.0 / m : 0.0; });
}

double LaplaceOperator::dirichlet_energy(std::span<const double> u) const {
    const std::size_t size = grid_.size();
    if (u.size() != size) throw PreconditionError("field does not live on the operator's grid");
    std::vector<complex> data(u.begin(), u.end());
    fft_->forward(data);
    double sum = 0.0;
    for (std::size_t k = 0; k < size; ++k) sum += multipliers_[k] * std::norm(data[k]);
    const double h = grid_.spacing();
    return h * h * sum / static_cast<double>(size);
}

ScalarField apply_laplacian(const LaplaceOperator& op, const ScalarField& u) { return op.apply(u); }

std::array<ScalarField, 2> spectral_gradient(const ScalarField& u) {
    const TorusGrid& grid = u.grid();
    const int n = grid.nodes();
    auto kappa = wavenumbers(n, grid.period());
    kappa[n / 2] = 0.0;
    const Fft2d fft(n);
    std::vector<complex> hat(u.values().begin(), u.values().end());
    fft.forward(hat);

    std::array<ScalarField, 2> grad{ScalarField(grid), ScalarField(grid)};
    for (int axis = 0; axis < 2; ++axis) {
        std::vector<complex> d(hat);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) d[static_cast<std::size_t>(a) * n + b] *= complex(0.0, axis == 0 ? kappa[a] : kappa[b]);
        fft.backward(d);
        for (std::size_t k = 0; k < d.size(); ++k) grad[axis][k] = d[k].real();
    }
    return grad;
}

namespace {

void require_same_grid(const LaplaceOperator& op, const ConformalFactor& factor) {
    if (!(op.grid() == factor.grid())) throw PreconditionError("factor and operator live on different grids");
}

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

/// w -> Q f Delta^+ f Q w; its nonzero eigenvalues are 1 / mu.
LinearMap<double> inverse_pencil(const LaplaceOperator& op, const std::vector<double>& f, const std::vector<double>& q) {
    return [&op, &f, &q](std::span<const double> in, std::span<double> out) {
        const double c = dot(q, in);
        std::vector<double> t(in.size());
        for (std::size_t k = 0; k < t.size(); ++k) t[k] = f[k] * (in[k] - c * q[k]);
        op.apply_pseudo_inverse(t, out);
        for (std::size_t k = 0; k < t.size(); ++k) out[k] *= f[k];
        const double d = dot(q, out);
        for (std::size_t k = 0; k < t.size(); ++k) out[k] -= d * q[k];
    };
}

/// Removes the f^2-weighted mean, normalises the integral of u^2 f^2 to one and fixes the sign.
void normalise_eigenfunction(std::vector<double>& u, const std::vector<double>& f, double h) {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        num += u[k] * f[k] * f[k];
        den += f[k] * f[k];
    }
    const double mean = num / den;
    double mass = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        u[k] -= mean;
        mass += u[k] * u[k] * f[k] * f[k];
    }
    const auto peak = std::max_element(u.begin(), u.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    const double scale = (*peak < 0.0 ? -1.0 : 1.0) / std::sqrt(h * h * mass);
    for (double& v : u) v *= scale;
}

double pencil_residual(const LaplaceOperator& op, const std::vector<double>& f, const std::vector<double>& u, double mu) {
    std::vector<double> lu(u.size());
    op.apply(u, lu);
    double r2 = 0.0, b2 = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double r = lu[k] - mu * f[k] * f[k] * u[k];
        const double b = f[k] * f[k] * u[k];
        r2 += r * r;
        b2 += b * b;
    }
    return std::sqrt(r2) / (mu * std::sqrt(b2));
}

double h1_norm(const LaplaceOperator& op, const std::vector<double>& u) {
    const double h = op.grid().spacing();
    return std::sqrt(h * h * dot(u, u) + op.dirichlet_energy(u));
}

Eigen::MatrixXd second_derivative_1d(int n, double period, LaplaceScheme scheme) {
    Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(n, n);
    const double h = period / n;
    if (scheme == LaplaceScheme::five_point) {
        for (int j = 0; j < n; ++j) {
            d2(j, j) = 2.0 / (h * h);
            d2(j, (j + 1) % n) -= 1.0 / (h * h);
            d2(j, (j + n - 1) % n) -= 1.0 / (h * h);
        }
        return d2;
    }
    // (1/n) sum_k kappa_k^2 exp(i kappa_k (x_j - x_l)), summed directly over k = -n/2 .. n/2-1.
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
            double s = 0.0;
            for (int k = -n / 2; k < n / 2; ++k) {
                const double kappa = 2.0 * std::numbers::pi * k / period;
                s += kappa * kappa * std::cos(kappa * h * (j - l));
            }
            d2(j, l) = s / n;
        }
    }
    return d2;
}

struct DenseSpectrum {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;  // columns: w = f u
};

DenseSpectrum dense_symmetrized(const ConformalFactor& factor, LaplaceScheme scheme) {
    const TorusGrid& grid = factor.grid();
    const int n = grid.nodes();
    if (n > 48) throw ResolutionError("dense Laplace oracle refuses n > 48 (got " + std::to_string(n) + ")");
    const Eigen::MatrixXd d2 = second_derivative_1d(n, grid.period(), scheme);
    const int N = n * n;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int row = i * n + j;
            for (int l = 0; l < n; ++l) {
                a(row, l * n + j) += d2(i, l);
                a(row, i * n + l) += d2(j, l);
            }
        }
    }
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) a(r, c) /= factor[r] * factor[c];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    if (eig.info() != Eigen::Success) throw ConvergenceError("dense symmetric eigensolver failed", NAN, 0);
    return {eig.eigenvalues(), eig.eigenvectors()};
}

std::vector<double> factor_values(const ConformalFactor& factor) {
    const auto v = factor.values().values();
    return {v.begin(), v.end()};
}

std::vector<double> kernel_direction(const std::vector<double>& f) {
    std::vector<double> q(f);
    const double norm = std::sqrt(dot(q, q));
    for (double& v : q) v /= norm;
    return q;
}

}  // namespace

SpectralResult<ScalarField> first_weighted_eigenvalue(const LaplaceOperator& op, const ConformalFactor& factor,
                                                      const SolveOptions& options) {
    require_same_grid(op, factor);
    if (!(options.tolerance > 0.0)) throw ConfigurationError("solver tolerance must be positive");
    const TorusGrid& grid = op.grid();
    const double h = grid.spacing();
    const std::vector<double> f = factor_values(factor);

    double mu;
    std::vector<double> u;
    int iterations;
    std::string solver;

    if (options.solver == SolverChoice::dense) {
        const DenseSpectrum dense = dense_symmetrized(factor, op.scheme());
        mu = dense.values[1];
        u.resize(f.size());
        for (std::size_t k = 0; k < f.size(); ++k) u[k] = dense.vectors(static_cast<Eigen::Index>(k), 1) / f[k];
        iterations = 1;
        solver = "dense";
    } else {
        const std::vector<double> q = kernel_direction(f);
        LanczosOptions lo;
        lo.wanted = 1;
        lo.block_size = options.block_size;
        lo.tolerance = inner_tolerance(options.tolerance);
        lo.max_matvecs = options.max_matvecs;
        lo.seed = options.seed;
        const auto ritz = lanczos_largest<double>(f.size(), inverse_pencil(op, f, q), lo);
        if (!ritz.converged || !(ritz.values[0] > 0.0))
            throw ConvergenceError("Lanczos did not converge on the weighted Laplace pencil", ritz.residuals.at(0),
                                   ritz.matvecs);
        mu = 1.0 / ritz.values[0];
        // One inverse step recovers u = mu Delta^+ (f w) exactly up to the constant.
        const auto& w = ritz.vectors[0];
        std::vector<double> fw(f.size());
        for (std::size_t k = 0; k < f.size(); ++k) fw[k] = f[k] * w[k];
        u.resize(f.size());
        op.apply_pseudo_inverse(fw, u);
        for (double& v : u) v *= mu;
        iterations = ritz.matvecs;
        solver = "lanczos";
    }

    normalise_eigenfunction(u, f, h);
    // Rayleigh quotient of the refined vector; the quotient is second-order accurate.
    mu = op.dirichlet_energy(u);
    const double residual = pencil_residual(op, f, u, mu);
    if (!(residual <= options.tolerance))
        throw ConvergenceError("weighted Laplace eigenpair misses the residual tolerance", residual, iterations);
    const double norm = h1_norm(op, u);
    return {mu, ScalarField(grid, std::move(u)), residual, iterations, solver, norm};
}

std::vector<double> weighted_eigenvalues(const LaplaceOperator& op, const ConformalFactor& factor, int count,
                                         const SolveOptions& options) {
    require_same_grid(op, factor);
    if (count < 1) throw ConfigurationError("eigenvalue count must be at least 1");
    const std::vector<double> f = factor_values(factor);
    if (options.solver == SolverChoice::dense) {
        const DenseSpectrum dense = dense_symmetrized(factor, op.scheme());
        std::vector<double> out;
        for (int i = 1; i <= count && i < dense.values.size(); ++i) out.push_back(dense.values[i]);
        return out;
    }
    const std::vector<double> q = kernel_direction(f);
    LanczosOptions lo;
    lo.wanted = count;
    lo.block_size = std::max(options.block_size, std::min(count, 4));
    lo.max_basis = std::max(48, 6 * count + 4 * lo.block_size);
    lo.tolerance = inner_tolerance(options.tolerance);
    lo.max_matvecs = options.max_matvecs;
    lo.seed = options.seed;
    const auto ritz = lanczos_largest<double>(f.size(), inverse_pencil(op, f, q), lo);
    if (!ritz.converged) {
        const double worst = *std::max_element(ritz.residuals.begin(), ritz.residuals.end());
        throw ConvergenceError("Lanczos did not converge on the weighted Laplace pencil", worst, ritz.matvecs);
    }
    std::vector<double> out;
    for (double theta : ritz.values) out.push_back(1.0 / theta);
    return out;
}

double rayleigh_quotient_I(const ScalarField& u, const ConformalFactor& factor, LaplaceScheme scheme) {
    if (!(u.grid() == factor.grid())) throw PreconditionError("field and factor live on different grids");
    const double h = u.grid().spacing();
    double den = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) den += u[k] * u[k] * factor[k] * factor[k];
    den *= h * h;
    if (!(den > 0.0)) throw PreconditionError("Rayleigh quotient undefined: u vanishes at every node");
    const LaplaceOperator op(u.grid(), scheme);
    return op.dirichlet_energy(u) / den;
}

std::vector<double> dense_laplace_oracle(const ConformalFactor& factor, int count, LaplaceScheme scheme) {
    if (count < 1) throw ConfigurationError("eigenvalue count must be at least 1");
    const DenseSpectrum dense = dense_symmetrized(factor, scheme);
    std::vector<double> out;
    for (int i = 0; i < count && i < dense.values.size(); ++i) out.push_back(dense.values[i]);
    return out;
}

}  // namespace torus
