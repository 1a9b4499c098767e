#include "torus/lanczos.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <type_traits>

namespace torus {

namespace {

template <class Scalar>
void fill_random(Eigen::Ref<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> v, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if constexpr (std::is_same_v<Scalar, double>) {
            v[i] = normal(rng);
        } else {
            const double re = normal(rng);
            v[i] = Scalar(re, normal(rng));
        }
    }
}

}  // namespace

template <class Scalar>
RitzPairs<Scalar> lanczos_largest(std::size_t dim, const LinearMap<Scalar>& op, const LanczosOptions& options) {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    const auto n = static_cast<Eigen::Index>(dim);
    const int b = std::max(1, options.block_size);
    const int wanted = std::max(1, options.wanted);
    int max_basis = std::max(options.max_basis, wanted + 3 * b + 4);
    max_basis = std::min<Eigen::Index>(max_basis, n - b);

    RitzPairs<Scalar> out;
    std::mt19937_64 rng(options.seed);

    Mat V(n, max_basis + b);
    Mat H = Mat::Zero(max_basis + b, max_basis);
    Mat W(n, b);

    auto apply = [&](const Scalar* in, Scalar* result) {
        op(std::span<const Scalar>(in, dim), std::span<Scalar>(result, dim));
        ++out.matvecs;
    };

    // Orthonormalises W against V(:, 0..m) and itself, writing the new block into
    // V(:, m..m+b). Coefficients against the old basis are returned in `old_coeff`
    // (m x b), the triangular factor of the new block in `tri` (b x b).
    auto orthonormalize_block = [&](Eigen::Index m, Mat& old_coeff, Mat& tri) {
        old_coeff = Mat::Zero(m, b);
        tri = Mat::Zero(b, b);
        for (int c = 0; c < b; ++c) {
            Vec w = W.col(c);
            const double scale = std::max(w.norm(), 1e-300);
            for (int pass = 0; pass < 2; ++pass) {
                if (m > 0) {
                    Vec coeff = V.leftCols(m).adjoint() * w;
                    w.noalias() -= V.leftCols(m) * coeff;
                    old_coeff.col(c) += coeff;
                }
                for (int i = 0; i < c; ++i) {
                    const Scalar coeff = V.col(m + i).dot(w);
                    w -= coeff * V.col(m + i);
                    tri(i, c) += coeff;
                }
            }
            double nrm = w.norm();
            if (nrm <= 1e-12 * scale) {
                // Invariant subspace reached: continue with a fresh random direction, no coupling.
                fill_random<Scalar>(w, rng);
                for (int pass = 0; pass < 2; ++pass) {
                    if (m > 0) w -= V.leftCols(m) * (V.leftCols(m).adjoint() * w);
                    for (int i = 0; i < c; ++i) w -= V.col(m + i).dot(w) * V.col(m + i);
                }
                nrm = w.norm();
                tri(c, c) = Scalar(0);
            } else {
                tri(c, c) = Scalar(nrm);
            }
            V.col(m + c) = w / nrm;
        }
    };

    {
        Vec r(n);
        for (int c = 0; c < b; ++c) {
            fill_random<Scalar>(r, rng);
            apply(r.data(), W.col(c).data());
        }
        Mat old_coeff, tri;
        orthonormalize_block(0, old_coeff, tri);
    }

    Eigen::Index start = 0;  // first column of the block to expand
    Eigen::Index m = b;      // filled basis columns
    Mat old_coeff, tri;

    while (true) {
        for (int c = 0; c < b; ++c) apply(V.col(start + c).data(), W.col(c).data());
        orthonormalize_block(m, old_coeff, tri);
        H.block(0, start, m, b) = old_coeff;
        H.block(m, start, b, b) = tri;
        const Eigen::Index k = m;  // size of the projected problem
        start = m;
        m += b;

        Mat T = H.topLeftCorner(k, k);
        T = (0.5 * (T + T.adjoint())).eval();
        Eigen::SelfAdjointEigenSolver<Mat> eig(T);
        const auto& theta = eig.eigenvalues();
        const Mat& Y = eig.eigenvectors();
        const Mat coupling = H.block(k, k - b, b, b);

        const int have = static_cast<int>(std::min<Eigen::Index>(wanted, k));
        std::vector<double> residuals(have);
        bool converged = have == wanted;
        for (int i = 0; i < have; ++i) {
            const Eigen::Index col = k - 1 - i;
            const double res = (coupling * Y.block(k - b, col, b, 1)).norm();
            residuals[i] = res / std::max(std::abs(theta[col]), 1e-300);
            if (!(residuals[i] <= options.tolerance)) converged = false;
        }

        const bool budget_spent = out.matvecs + b > options.max_matvecs;
        if (converged || budget_spent) {
            out.converged = converged;
            for (int i = 0; i < have; ++i) {
                const Eigen::Index col = k - 1 - i;
                Vec x = V.leftCols(k) * Y.col(col);
                x.normalize();
                out.values.push_back(theta[col]);
                out.vectors.emplace_back(x.data(), x.data() + n);
                out.residuals.push_back(residuals[i]);
            }
            return out;
        }

        if (m + b > max_basis + b || start + b > max_basis) {
            // Thick restart: keep the leading Ritz vectors plus the residual block.
            const Eigen::Index keep = std::min<Eigen::Index>(k - b, std::max<Eigen::Index>(wanted + 2 * b, k / 2));
            const Mat Ytop = Y.rightCols(keep).rowwise().reverse();
            const Mat X = V.leftCols(k) * Ytop;
            const Mat residual_block = V.middleCols(k, b);
            const Mat new_coupling = coupling * Ytop.bottomRows(b);
            V.leftCols(keep) = X;
            V.middleCols(keep, b) = residual_block;
            H.setZero();
            for (Eigen::Index i = 0; i < keep; ++i) H(i, i) = Scalar(theta[k - 1 - i]);
            H.block(keep, 0, b, keep) = new_coupling;
            start = keep;
            m = keep + b;
        }
    }
}

template RitzPairs<double> lanczos_largest(std::size_t, const LinearMap<double>&, const LanczosOptions&);
template RitzPairs<std::complex<double>> lanczos_largest(std::size_t, const LinearMap<std::complex<double>>&,
                                                         const LanczosOptions&);

}  // namespace torus
