#include "torus/analysis.hpp"

#include "torus/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace torus {

namespace {

void require_decreasing_widths(std::span<const double> widths) {
    if (widths.empty()) throw PreconditionError("continuity experiment needs at least one width");
    for (std::size_t k = 0; k < widths.size(); ++k) {
        if (!(widths[k] > 0.0)) throw PreconditionError("mollification widths must be positive");
        if (k > 0 && !(widths[k] < widths[k - 1]))
            throw PreconditionError("mollification widths must be strictly decreasing");
    }
}

double uniform_distance(const ConformalFactor& a, const ConformalFactor& b) {
    return max_abs_difference(a.values(), b.values());
}

double sum_product(const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

}  // namespace

bool ContinuityReport::gaps_decreasing() const noexcept {
    for (std::size_t k = 1; k < points.size(); ++k)
        if (!(points[k].gap < points[k - 1].gap)) return false;
    return true;
}

double ContinuityReport::max_gap_ratio() const noexcept {
    double m = 0.0;
    for (const auto& p : points)
        if (p.uniform_distance > 0.0) m = std::max(m, p.gap / p.uniform_distance);
    return m;
}

ContinuityReport continuity_experiment_laplace(const ConformalFactor& factor, std::span<const double> widths,
                                               const SolveOptions& options) {
    require_decreasing_widths(widths);
    const LaplaceOperator op(factor.grid());
    ContinuityReport out{first_weighted_eigenvalue(op, factor, options).eigenvalue, std::nullopt, {}};
    for (double w : widths) {
        const ConformalFactor fw = mollify_factor(factor, w);
        const double mu = first_weighted_eigenvalue(op, fw, options).eigenvalue;
        out.points.push_back({w, mu, std::abs(mu - out.reference), uniform_distance(fw, factor), std::nullopt});
    }
    return out;
}

ContinuityReport continuity_experiment_dirac(const ConformalFactor& factor, std::span<const double> widths,
                                             SpinStructure spin, const DiracSolveOptions& options) {
    require_decreasing_widths(widths);
    const DiracOperator op(factor.grid(), spin);
    ContinuityReport out{first_positive_weighted_eigenvalue(op, factor, options).eigenvalue,
                         kernel_dimension(op, factor, options.kernel_tolerance, options),
                         {}};
    for (double w : widths) {
        const ConformalFactor fw = mollify_factor(factor, w);
        const double lambda = first_positive_weighted_eigenvalue(op, fw, options).eigenvalue;
        out.points.push_back({w, lambda, std::abs(lambda - out.reference), uniform_distance(fw, factor),
                              kernel_dimension(op, fw, options.kernel_tolerance, options)});
    }
    return out;
}

double check_integration_identity(const ScalarField& u, const ScalarField& v) {
    if (!(u.grid() == v.grid())) throw PreconditionError("identity check needs fields on one grid");
    const TorusGrid& grid = u.grid();
    const double h2 = grid.spacing() * grid.spacing();
    const ScalarField lap_u = LaplaceOperator(grid).apply(u);

    ScalarField uv(grid), u_v2(grid), u2(grid);
    for (std::size_t k = 0; k < u.size(); ++k) {
        uv[k] = u[k] * v[k];
        u_v2[k] = u[k] * v[k] * v[k];
        u2[k] = u[k] * u[k];
    }
    const auto g_uv = spectral_gradient(uv);
    const auto g_v = spectral_gradient(v);

    const double lhs = sum_product(lap_u, u_v2) * h2;
    double rhs = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        rhs += g_uv[0][k] * g_uv[0][k] + g_uv[1][k] * g_uv[1][k];
        rhs -= u2[k] * (g_v[0][k] * g_v[0][k] + g_v[1][k] * g_v[1][k]);
    }
    rhs *= h2;
    return std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
}

double check_poincare_bump(const ScalarField& u, double alpha, double epsilon) {
    const TorusGrid& grid = u.grid();
    const ConformalFactor f = bump_factor(grid, alpha, epsilon);
    const int n = grid.nodes();
    double peak = 0.0, outside = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double a = std::abs(u(i, j));
            peak = std::max(peak, a);
            if (grid.distance_to_origin(i, j) > alpha) outside = std::max(outside, a);
        }
    if (outside > support_tolerance * peak) {
        std::ostringstream msg;
        msg << "u must vanish outside B_p(alpha): max |u| there is " << outside << " against peak " << peak;
        throw PreconditionError(msg.str());
    }

    const double h2 = grid.spacing() * grid.spacing();
    const auto g = spectral_gradient(u);
    double lhs = 0.0, mean = 0.0, energy = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double f2 = f[k] * f[k];
        lhs += u[k] * u[k] * f2;
        mean += u[k] * f2;
        energy += g[0][k] * g[0][k] + g[1][k] * g[1][k];
    }
    lhs *= h2;
    mean *= h2;
    energy *= h2;
    const double pi = std::numbers::pi;
    return epsilon * epsilon / 8.0 * energy + mean * mean / (pi * epsilon * epsilon) - lhs;
}

LiminfReport liminf_product_check(std::span<const SweepRecord> records, double noise) {
    if (records.empty()) throw PreconditionError("liminf check needs at least one record");
    const double alpha = records.front().alpha;
    for (std::size_t k = 0; k < records.size(); ++k) {
        const SweepRecord& r = records[k];
        if (!r.ok) throw PreconditionError("liminf check got a failed record: " + r.error);
        if (r.alpha != alpha) throw PreconditionError("liminf check needs records sharing alpha");
        if (k > 0 && !(r.epsilon < records[k - 1].epsilon))
            throw PreconditionError("liminf check needs strictly decreasing eps");
    }

    const double pi = std::numbers::pi;
    LiminfReport out{alpha, {}, false, true, {}};
    std::ostringstream diag;
    for (const SweepRecord& r : records) {
        const double e2 = r.epsilon * r.epsilon;
        const double vol_ratio = r.volume / (pi * e2);
        const double via_products = r.mu1_vol / (e2 * r.mu1 * pi);
        out.rows.push_back(
            {r.epsilon, e2 * r.mu1, r.mu1_vol / (8 * pi), vol_ratio, std::abs(via_products - vol_ratio) / vol_ratio});
    }
    for (std::size_t k = 1; k < out.rows.size(); ++k) {
        if (out.rows[k].eps2_mu1 < out.rows[k - 1].eps2_mu1 * (1.0 - noise)) {
            out.increasing = false;
            diag << "eps^2 mu1 drops from " << out.rows[k - 1].eps2_mu1 << " to " << out.rows[k].eps2_mu1
                 << " at eps=" << out.rows[k].epsilon << "; ";
        }
    }
    const double tail = out.rows.back().eps2_mu1;
    out.tail_in_band = tail >= 6.4 && tail <= 8.4;
    if (!out.tail_in_band) diag << "tail eps^2 mu1 = " << tail << " outside [6.4, 8.4]; ";
    out.diagnostics = diag.str();
    return out;
}

}  // namespace torus
