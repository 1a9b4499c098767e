#include "torus/dirac.hpp"

#include "torus/errors.hpp"
#include "torus/lanczos.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace torus {

DiracOperator::DiracOperator(const TorusGrid& grid, SpinStructure spin)
    : grid_(grid),
      spin_(spin),
      kx_(wavenumbers(grid.nodes(), grid.period(), spin.phase_x())),
      ky_(wavenumbers(grid.nodes(), grid.period(), spin.phase_y())),
      magnitude_(grid.size()),
      twist_(grid.size()),
      fft_(std::make_shared<const Fft2d>(grid.nodes())) {
    const int n = grid.nodes();
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const std::size_t k = static_cast<std::size_t>(a) * n + b;
            magnitude_[k] = std::hypot(kx_[a], ky_[b]);
            const double angle = -2.0 * std::numbers::pi * (spin.phase_x() * a + spin.phase_y() * b) / n;
            twist_[k] = std::polar(1.0, angle);
        }
    }
}

template <class Fn>
void DiracOperator::multiply(std::span<const complex> in, std::span<complex> out, Fn&& scale) const {
    const std::size_t m = grid_.size();
    if (in.size() != 2 * m || out.size() != 2 * m) throw PreconditionError("spinor data has the wrong length");
    const int n = grid_.nodes();
    std::vector<complex> up(m), down(m);
    for (std::size_t k = 0; k < m; ++k) {
        up[k] = in[k] * twist_[k];
        down[k] = in[m + k] * twist_[k];
    }
    fft_->forward(up);
    fft_->forward(down);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const std::size_t k = static_cast<std::size_t>(a) * n + b;
            const double s = scale(magnitude_[k]);
            const complex minus(kx_[a], -ky_[b]), plus(kx_[a], ky_[b]);
            const complex u = up[k];
            up[k] = s * minus * down[k];
            down[k] = s * plus * u;
        }
    }
    fft_->backward(up);
    fft_->backward(down);
    for (std::size_t k = 0; k < m; ++k) {
        out[k] = up[k] * std::conj(twist_[k]);
        out[m + k] = down[k] * std::conj(twist_[k]);
    }
}

void DiracOperator::apply(std::span<const complex> in, std::span<complex> out) const {
    multiply(in, out, [](double) { return 1.0; });
}

void DiracOperator::apply_pseudo_inverse(std::span<const complex> in, std::span<complex> out) const {
    multiply(in, out, [](double mag) { return mag > 0.0 ? 1.0 / (mag * mag) : 0.0; });
}

SpinorField DiracOperator::apply(const SpinorField& phi) const {
    if (!(phi.grid() == grid_)) throw PreconditionError("spinor does not live on the operator's grid");
    if (!(phi.spin() == spin_))
        throw PreconditionError("spin structure mismatch: operator " + to_string(spin_) + ", spinor "
                                + to_string(phi.spin()));
    const auto flat = phi.flatten();
    std::vector<complex> out(flat.size());
    apply(flat, out);
    return SpinorField::unflatten(grid_, spin_, out);
}

SpinorField apply_dirac(const DiracOperator& op, const SpinorField& phi) { return op.apply(phi); }

int kernel_dimension(const DiracOperator& op, double tol) {
    if (!(tol > 0.0)) throw ConfigurationError("kernel tolerance must be positive");
    const double band = tol * 2.0 * std::numbers::pi / op.grid().period();
    int count = 0;
    for (double m : op.symbol_magnitudes())
        if (m < band) count += 2;
    return count;
}

namespace {

void require_same_grid(const DiracOperator& op, const ConformalFactor& factor) {
    if (!(op.grid() == factor.grid())) throw PreconditionError("factor and operator live on different grids");
}

struct Symmetrized {
    std::vector<double> root;  // f^{1/2}
    std::vector<std::vector<complex>> kernel;  // orthonormal f^{1/2} (constant spinor), trivial structure only
};

Symmetrized symmetrize(const DiracOperator& op, const ConformalFactor& factor) {
    Symmetrized s;
    const std::size_t m = op.grid().size();
    s.root.resize(m);
    double norm2 = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        s.root[k] = std::sqrt(factor[k]);
        norm2 += factor[k];
    }
    if (kernel_dimension(op) > 0) {
        for (int c = 0; c < 2; ++c) {
            std::vector<complex> q(2 * m, 0.0);
            for (std::size_t k = 0; k < m; ++k) q[c * m + k] = s.root[k] / std::sqrt(norm2);
            s.kernel.push_back(std::move(q));
        }
    }
    return s;
}

void deflate(const Symmetrized& s, std::span<complex> v) {
    for (const auto& q : s.kernel) {
        complex c = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) c += std::conj(q[k]) * v[k];
        for (std::size_t k = 0; k < v.size(); ++k) v[k] -= c * q[k];
    }
}

/// psi -> Q f^{1/2} D^+ f^{1/2} Q psi; largest eigenvalues are 1 / lambda for the smallest positive lambda.
LinearMap<complex> inverse_pencil(const DiracOperator& op, const Symmetrized& s) {
    return [&op, &s](std::span<const complex> in, std::span<complex> out) {
        const std::size_t m = s.root.size();
        std::vector<complex> t(in.begin(), in.end());
        deflate(s, t);
        for (std::size_t k = 0; k < 2 * m; ++k) t[k] *= s.root[k % m];
        op.apply_pseudo_inverse(t, out);
        for (std::size_t k = 0; k < 2 * m; ++k) out[k] *= s.root[k % m];
        deflate(s, out);
    };
}

LanczosOptions lanczos_options(const SolveOptions& options, int wanted) {
    LanczosOptions lo;
    lo.wanted = wanted;
    lo.block_size = std::max(2, options.block_size);
    lo.max_basis = std::max(48, 6 * wanted + 4 * lo.block_size);
    lo.tolerance = inner_tolerance(options.tolerance);
    lo.max_matvecs = options.max_matvecs;
    lo.seed = options.seed;
    return lo;
}

Eigen::MatrixXcd derivative_1d(int n, double period, double phase) {
    // (1/n) sum_k i kappa_k exp(i kappa_k (x_j - x_l)), kappa_k = 2 pi (k + phase) / L, k = -n/2 .. n/2-1
    Eigen::MatrixXcd d(n, n);
    const double h = period / n;
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
            complex s = 0.0;
            for (int k = -n / 2; k < n / 2; ++k) {
                const double kappa = 2.0 * std::numbers::pi * (k + phase) / period;
                s += complex(0.0, kappa) * std::polar(1.0, kappa * h * (j - l));
            }
            d(j, l) = s / static_cast<double>(n);
        }
    }
    return d;
}

/// f^{-1/2} (-i d1 + sign d2) f^{-1/2} as a dense n^2 x n^2 matrix.
Eigen::MatrixXcd dense_chiral_block(const ConformalFactor& factor, SpinStructure spin, double sign) {
    const TorusGrid& grid = factor.grid();
    const int n = grid.nodes();
    if (n > 32) throw ResolutionError("dense Dirac oracle refuses n > 32 (got " + std::to_string(n) + ")");
    const Eigen::MatrixXcd dx = derivative_1d(n, grid.period(), spin.phase_x());
    const Eigen::MatrixXcd dy = derivative_1d(n, grid.period(), spin.phase_y());
    const int N = n * n;
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(N, N);
    const complex minus_i(0.0, -1.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int row = i * n + j;
            for (int l = 0; l < n; ++l) {
                p(row, l * n + j) += minus_i * dx(i, l);
                p(row, i * n + l) += sign * dy(j, l);
            }
        }
    }
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) p(r, c) /= std::sqrt(factor[r] * factor[c]);
    return p;
}

Eigen::MatrixXcd dense_hermitian(const ConformalFactor& factor, SpinStructure spin) {
    const Eigen::MatrixXcd upper = dense_chiral_block(factor, spin, -1.0);
    const Eigen::MatrixXcd lower = dense_chiral_block(factor, spin, +1.0);
    const Eigen::Index N = upper.rows();
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
    a.topRightCorner(N, N) = upper;
    a.bottomLeftCorner(N, N) = lower;
    return a;
}

void sort_by_magnitude(std::vector<double>& v) {
    std::sort(v.begin(), v.end(), [](double a, double b) {
        if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
        return a < b;
    });
}

}  // namespace

int kernel_dimension(const DiracOperator& op, const ConformalFactor& factor, double tol, const SolveOptions& options) {
    require_same_grid(op, factor);
    const int flat = kernel_dimension(op, tol);
    const double band = tol * 2.0 * std::numbers::pi / op.grid().period();
    const Symmetrized s = symmetrize(op, factor);
    const auto ritz = lanczos_largest<complex>(2 * op.grid().size(), inverse_pencil(op, s), lanczos_options(options, 2));
    int inside = 0;
    for (double theta : ritz.values)
        if (theta > 0.0 && 1.0 / theta < band) ++inside;
    return flat + 2 * inside;
}

SpectralResult<SpinorField> first_positive_weighted_eigenvalue(const DiracOperator& op, const ConformalFactor& factor,
                                                               const DiracSolveOptions& options) {
    require_same_grid(op, factor);
    if (!(options.tolerance > 0.0)) throw ConfigurationError("solver tolerance must be positive");
    if (!(options.kernel_tolerance > 0.0)) throw ConfigurationError("kernel tolerance must be positive");
    const TorusGrid& grid = op.grid();
    const std::size_t m = grid.size();
    const double h = grid.spacing();
    const double band = options.kernel_tolerance * 2.0 * std::numbers::pi / grid.period();
    const Symmetrized s = symmetrize(op, factor);

    std::vector<complex> phi(2 * m);
    int iterations;
    std::string solver;

    if (options.solver == SolverChoice::dense) {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(dense_hermitian(factor, op.spin()));
        Eigen::Index pick = -1;
        for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
            if (eig.eigenvalues()[i] > band) {
                pick = i;
                break;
            }
        }
        if (pick < 0) throw ResolutionError("no positive weighted Dirac eigenvalue outside the kernel band; increase n");
        for (std::size_t k = 0; k < 2 * m; ++k) phi[k] = eig.eigenvectors()(static_cast<Eigen::Index>(k), pick) / s.root[k % m];
        iterations = 1;
        solver = "dense";
    } else {
        const auto ritz = lanczos_largest<complex>(2 * m, inverse_pencil(op, s), lanczos_options(options, 1));
        if (!ritz.converged)
            throw ConvergenceError("Lanczos did not converge on the weighted Dirac pencil", ritz.residuals.at(0),
                                   ritz.matvecs);
        const double theta = ritz.values[0];
        if (!(theta > 0.0) || 1.0 / theta <= band)
            throw ResolutionError("smallest positive weighted Dirac eigenvalue lies in the kernel band; increase n");
        const double lambda = 1.0 / theta;
        std::vector<complex> t(ritz.vectors[0]);
        for (std::size_t k = 0; k < 2 * m; ++k) t[k] *= s.root[k % m];
        op.apply_pseudo_inverse(t, phi);
        for (auto& z : phi) z *= lambda;
        if (!s.kernel.empty()) {
            // D phi = lambda f phi forces the integral of f phi to vanish; fix the free constant accordingly.
            double fsum = 0.0;
            for (std::size_t k = 0; k < m; ++k) fsum += factor[k];
            for (int c = 0; c < 2; ++c) {
                complex mean = 0.0;
                for (std::size_t k = 0; k < m; ++k) mean += factor[k] * phi[c * m + k];
                mean /= fsum;
                for (std::size_t k = 0; k < m; ++k) phi[c * m + k] -= mean;
            }
        }
        iterations = ritz.matvecs;
        solver = "lanczos";
    }

    // normalise: integral of f |phi|^2 = 1, largest entry real positive
    double mass = 0.0;
    for (std::size_t k = 0; k < 2 * m; ++k) mass += factor[k % m] * std::norm(phi[k]);
    const auto peak = std::max_element(phi.begin(), phi.end(), [](complex a, complex b) { return std::abs(a) < std::abs(b); });
    const complex scale = std::conj(*peak) / std::abs(*peak) / std::sqrt(h * h * mass);
    for (auto& z : phi) z *= scale;

    std::vector<complex> dphi(2 * m);
    op.apply(phi, dphi);
    complex rq = 0.0;
    for (std::size_t k = 0; k < 2 * m; ++k) rq += dphi[k] * std::conj(phi[k]);
    const double lambda = h * h * rq.real();
    if (!(lambda > band))
        throw ResolutionError("smallest positive weighted Dirac eigenvalue lies in the kernel band; increase n");

    double r2 = 0.0, b2 = 0.0;
    for (std::size_t k = 0; k < 2 * m; ++k) {
        const double f = factor[k % m];
        r2 += std::norm(dphi[k] - lambda * f * phi[k]);
        b2 += f * f * std::norm(phi[k]);
    }
    const double residual = std::sqrt(r2) / (lambda * std::sqrt(b2));
    if (!(residual <= options.tolerance))
        throw ConvergenceError("weighted Dirac eigenpair misses the residual tolerance", residual, iterations);

    SpinorField field = SpinorField::unflatten(grid, op.spin(), phi);
    double h1 = 0.0;
    for (std::size_t k = 0; k < 2 * m; ++k) h1 += std::norm(phi[k]) + std::norm(dphi[k]);
    return {lambda, std::move(field), residual, iterations, solver, std::sqrt(h * h * h1)};
}

std::vector<double> weighted_dirac_eigenvalues(const DiracOperator& op, const ConformalFactor& factor, int count,
                                               const DiracSolveOptions& options) {
    require_same_grid(op, factor);
    if (count < 1) throw ConfigurationError("eigenvalue count must be at least 1");
    const double band = options.kernel_tolerance * 2.0 * std::numbers::pi / op.grid().period();
    std::vector<double> out;
    if (options.solver == SolverChoice::dense) {
        for (double v : dense_dirac_oracle(factor, op.spin(), 2 * static_cast<int>(op.grid().size())))
            if (v > band && static_cast<int>(out.size()) < count) out.push_back(v);
        return out;
    }
    const Symmetrized s = symmetrize(op, factor);
    const auto ritz = lanczos_largest<complex>(2 * op.grid().size(), inverse_pencil(op, s), lanczos_options(options, count));
    if (!ritz.converged) {
        const double worst = *std::max_element(ritz.residuals.begin(), ritz.residuals.end());
        throw ConvergenceError("Lanczos did not converge on the weighted Dirac pencil", worst, ritz.matvecs);
    }
    for (double theta : ritz.values)
        if (theta > 0.0) out.push_back(1.0 / theta);
    return out;
}

double rayleigh_quotient_J(const SpinorField& phi, const ConformalFactor& factor, const DiracOperator& op) {
    require_same_grid(op, factor);
    const SpinorField dphi = op.apply(phi);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < phi.nodes(); ++k) {
        num += dphi.norm2_at(k) / factor[k];
        den += SpinorField::inner_at(dphi, phi, k).real();
    }
    if (!(den > 0.0))
        throw AdmissibilityError("Dirac quotient needs a positive denominator (trial spinor outside the positive cone)");
    return num / den;
}

void clifford_multiply(double v1, double v2, const complex& up, const complex& down, complex& out_up,
                       complex& out_down, GammaConvention convention) noexcept {
    // (v1 sigma1 + v2 sigma2) psi = ((v1 - i v2) psi2, (v1 + i v2) psi1)
    const complex a(v1, -v2), b(v1, v2);
    const complex u = a * down, d = b * up;
    if (convention == GammaConvention::standard) {
        const complex minus_i(0.0, -1.0);
        out_up = minus_i * u;
        out_down = minus_i * d;
    } else {
        out_up = u;
        out_down = d;
    }
}

SpinorField clifford_multiply(const ScalarField& v1, const ScalarField& v2, const SpinorField& psi,
                              GammaConvention convention) {
    if (!(v1.grid() == psi.grid()) || !(v2.grid() == psi.grid()))
        throw PreconditionError("vector field and spinor live on different grids");
    SpinorField out(psi.grid(), psi.spin());
    for (std::size_t k = 0; k < psi.nodes(); ++k)
        clifford_multiply(v1[k], v2[k], psi.upper()[k], psi.lower()[k], out.upper()[k], out.lower()[k], convention);
    return out;
}

SpinorField conformal_push(const SpinorField& phi, const ConformalFactor& factor) {
    if (factor.kind() == FactorKind::bump)
        throw PreconditionError("conformal push needs a smooth factor; mollify the bump first");
    if (!(phi.grid() == factor.grid())) throw PreconditionError("spinor and factor live on different grids");
    SpinorField out(phi.grid(), phi.spin());
    for (std::size_t k = 0; k < phi.nodes(); ++k) {
        const double s = 1.0 / std::sqrt(factor[k]);
        out.upper()[k] = s * phi.upper()[k];
        out.lower()[k] = s * phi.lower()[k];
    }
    return out;
}

double conformal_covariance_residual(const DiracOperator& op, const SpinorField& phi, const ConformalFactor& factor) {
    const SpinorField chi = conformal_push(phi, factor);
    ScalarField log_f(factor.grid());
    for (std::size_t k = 0; k < log_f.size(); ++k) log_f[k] = std::log(factor[k]);
    const auto grad = spectral_gradient(log_f);
    const SpinorField dchi = op.apply(chi);
    const SpinorField term = clifford_multiply(grad[0], grad[1], chi);
    const SpinorField dphi = op.apply(phi);

    double diff = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < phi.nodes(); ++k) {
        const double f = factor[k];
        const double w = std::pow(f, -1.5);
        for (int c = 0; c < 2; ++c) {
            const complex lhs = (dchi.component(c)[k] + 0.5 * term.component(c)[k]) / f;
            const complex rhs = w * dphi.component(c)[k];
            diff = std::max(diff, std::abs(lhs - rhs));
            scale = std::max(scale, std::abs(rhs));
        }
    }
    return scale > 0.0 ? diff / scale : diff;
}

std::vector<double> dense_dirac_oracle(const ConformalFactor& factor, SpinStructure spin, int count,
                                       DenseDiracRoute route) {
    if (count < 1) throw ConfigurationError("eigenvalue count must be at least 1");
    std::vector<double> values;
    if (route == DenseDiracRoute::chiral_svd) {
        const Eigen::BDCSVD<Eigen::MatrixXcd> svd(dense_chiral_block(factor, spin, -1.0));
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
            values.push_back(svd.singularValues()[i]);
            values.push_back(-svd.singularValues()[i]);
        }
    } else {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(dense_hermitian(factor, spin), Eigen::EigenvaluesOnly);
        values.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size());
    }
    sort_by_magnitude(values);
    if (static_cast<std::size_t>(count) < values.size()) values.resize(count);
    return values;
}

}  // namespace torus
