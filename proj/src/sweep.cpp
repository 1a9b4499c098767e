#include "torus/sweep.hpp"

#include "torus/dirac.hpp"
#include "torus/errors.hpp"
#include "torus/laplace.hpp"
#include "torus/witness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

namespace torus {

void mark_failed(SweepRecord& r, std::string kind, std::string message) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double alpha = r.alpha, eps = r.epsilon, wall = r.wall_time;
    r = SweepRecord{};
    r.alpha = alpha;
    r.epsilon = eps;
    r.wall_time = wall;
    for (double* f : {&r.mu1, &r.lambda1, &r.volume, &r.mu1_vol, &r.lambda1sq_vol, &r.ratio, &r.witness_bound, &r.I1,
                      &r.I2, &r.denominator, &r.residual_mu, &r.residual_lambda})
        *f = nan;
    r.kernel_dim = -1;
    r.ok = false;
    r.error_kind = std::move(kind);
    r.error = std::move(message);
}

SweepRecord run_pair(const SweepConfig& config, double alpha, double epsilon) {
    const auto start = std::chrono::steady_clock::now();
    SweepRecord r;
    r.alpha = alpha;
    r.epsilon = epsilon;
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
    try {
        const TorusGrid grid(config.period, config.nodes);
        const ConformalFactor factor =
            config.factor == FactorChoice::bump ? bump_factor(grid, alpha, epsilon) : constant_factor(grid, 1.0);

        SolveOptions lo;
        lo.tolerance = config.tolerance;
        lo.seed = config.seed;
        lo.max_matvecs = config.max_matvecs;
        const auto mu = first_weighted_eigenvalue(LaplaceOperator(grid), factor, lo);

        DiracSolveOptions dopt;
        dopt.tolerance = config.tolerance;
        dopt.seed = config.seed;
        dopt.max_matvecs = config.max_matvecs;
        dopt.kernel_tolerance = config.kernel_tolerance;
        const DiracOperator dirac(grid, config.spin);
        const auto lambda = first_positive_weighted_eigenvalue(dirac, factor, dopt);

        r.mu1 = mu.eigenvalue;
        r.lambda1 = lambda.eigenvalue;
        r.residual_mu = mu.residual;
        r.residual_lambda = lambda.residual;
        r.volume = generalized_volume(factor);
        r.mu1_vol = r.mu1 * r.volume;
        r.lambda1sq_vol = r.lambda1 * r.lambda1 * r.volume;
        r.ratio = r.lambda1sq_vol / r.mu1_vol;
        r.kernel_dim = kernel_dimension(dirac, factor, config.kernel_tolerance, dopt);

        if (config.factor == FactorChoice::bump) {
            const WitnessBound w = witness_bound(grid, CutoffProfile{config.delta, config.cutoff_order}, factor, epsilon);
            r.witness_bound = w.product;
            r.I1 = w.I1;
            r.I2 = w.I2;
            r.denominator = w.denominator;
        } else {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            r.witness_bound = r.I1 = r.I2 = r.denominator = nan;
        }
    } catch (const ConvergenceError& e) {
        mark_failed(r, "convergence", e.what());
    } catch (const ResolutionError& e) {
        mark_failed(r, "resolution", e.what());
    } catch (const AdmissibilityError& e) {
        mark_failed(r, "admissibility", e.what());
    } catch (const ConsistencyError& e) {
        mark_failed(r, "consistency", e.what());
    } catch (const std::invalid_argument& e) {
        mark_failed(r, "configuration", e.what());
    } catch (const std::exception& e) {
        mark_failed(r, "error", e.what());
    }
    r.wall_time = elapsed();
    return r;
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
    validate(config);
    std::vector<std::pair<double, double>> pairs;
    for (double a : config.alphas)
        for (double ratio : config.epsilon_ratios) pairs.emplace_back(a, a * ratio);

    std::vector<SweepRecord> out(pairs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < pairs.size();)
            out[k] = run_pair(config, pairs[k].first, pairs[k].second);
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers =
        std::min<std::size_t>(pairs.size(), config.threads == 0 ? hw : static_cast<unsigned>(config.threads));
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();

    std::stable_sort(out.begin(), out.end(), [](const SweepRecord& a, const SweepRecord& b) {
        if (a.alpha != b.alpha) return a.alpha > b.alpha;
        return a.epsilon > b.epsilon;
    });
    return out;
}

}  // namespace torus
