// Acceptance criteria runner: `acceptance C3` prints one PASS/FAIL line and exits nonzero on FAIL.
#include "torus/analysis.hpp"
#include "torus/random_fields.hpp"
#include "torus/sweep.hpp"
#include "torus/witness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace torus;
using std::numbers::pi;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;
    void require(bool cond, const std::string& what) {
        if (!cond) pass = false;
        detail << (cond ? "" : "[x] ") << what << "; ";
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

ConformalFactor random_smooth_factor(const TorusGrid& g, std::mt19937_64& rng) {
    const ScalarField w = random_band_limited(g, 3, rng);
    double peak = 0.0;
    for (double x : w.values()) peak = std::max(peak, std::abs(x));
    ScalarField v(g);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::exp(0.7 * w[k] / peak);
    return custom_factor(v);
}

// The dirac/laplace sweep shared by C3, C4, C5: alpha = 1/32, delta = 1/8, n = 256.
std::vector<SweepRecord> degenerate_sweep() {
    SweepConfig c;
    c.nodes = 256;
    c.delta = 0.125;
    c.alphas = {1.0 / 32};
    c.epsilon_ratios = {0.5, 0.25, 0.125, 0.0625};
    return run_sweep(c);
}

bool all_ok(const std::vector<SweepRecord>& rs, Verdict& v) {
    bool ok = true;
    for (const auto& r : rs)
        if (!r.ok) {
            ok = false;
            v.require(false, "record eps=" + fmt(r.epsilon) + " failed: " + r.error);
        }
    return ok;
}

void c1(Verdict& v) {
    const auto t0 = std::chrono::steady_clock::now();
    const TorusGrid g(2 * pi, 32);
    const ConformalFactor one = constant_factor(g, 1.0);
    const LaplaceOperator lap(g);
    std::vector<double> mu{rayleigh_quotient_I(sample(g, [](double, double) { return 1.0; }), one)};
    for (double m : weighted_eigenvalues(lap, one, 5)) mu.push_back(m);
    const double expected[] = {0, 1, 1, 1, 1, 2};
    double err = 0.0;
    for (int k = 0; k < 6; ++k) err = std::max(err, std::abs(mu[k] - expected[k]));
    v.require(err <= 1e-10, "Laplace first 6 max error " + fmt(err));

    for (SpinStructure spin : all_spin_structures()) {
        const DiracOperator op(g, spin);
        std::vector<double> symbol;
        for (double m : op.symbol_magnitudes())
            if (m > 1e-12) symbol.push_back(m);
        std::sort(symbol.begin(), symbol.end());
        DiracSolveOptions o;
        o.block_size = 4;
        const int count = 8;
        const auto lambda = weighted_dirac_eigenvalues(op, one, count, o);
        double e = 0.0;
        for (int k = 0; k < count; ++k) e = std::max(e, std::abs(lambda[k] - symbol[k]));
        const int kernel = kernel_dimension(op, one);
        v.require(e <= 1e-10, "Dirac " + to_string(spin) + " symbol error " + fmt(e));
        v.require(kernel == (spin.is_trivial() ? 2 : 0), "kernel " + to_string(spin) + " = " + std::to_string(kernel));
    }
    const double t = seconds_since(t0);
    v.require(t < 10.0, "runtime " + fmt(t) + " s");
}

void c2(Verdict& v) {
    const TorusGrid g(1.0, 256);
    const SweepConfig defaults;
    std::vector<double> alphas = defaults.alphas;
    for (double a : alphas) {
        for (double r : defaults.epsilon_ratios) {
            const double eps = a * r;
            const double vol = generalized_volume(bump_factor(g, a, eps));
            const double exact = bump_volume_exact(1.0, a, eps);
            const double rel = std::abs(vol - exact) / exact;
            v.require(rel <= 1e-3, "alpha=" + fmt(a) + " eps/alpha=" + fmt(r) + " rel err " + fmt(rel));
        }
        const double eps = a / 16;
        const double ratio = generalized_volume(bump_factor(g, a, eps)) / (pi * eps * eps);
        v.require(ratio >= 0.9 && ratio <= 1.0, "alpha=" + fmt(a) + " Vol/(pi eps^2) at eps=alpha/16 = " + fmt(ratio));
    }
}

void c3(Verdict& v) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rs = degenerate_sweep();
    const double t = seconds_since(t0);
    if (all_ok(rs, v)) {
        std::ostringstream series;
        for (std::size_t k = 0; k < rs.size(); ++k) {
            series << fmt(rs[k].lambda1sq_vol / (4 * pi)) << (k + 1 < rs.size() ? "," : "");
            if (k > 0 && !(rs[k].lambda1sq_vol < rs[k - 1].lambda1sq_vol)) v.require(false, "lambda1^2 Vol not decreasing at eps=" + fmt(rs[k].epsilon));
            v.require(rs[k].witness_bound >= rs[k].lambda1sq_vol, "witness dominates at eps=" + fmt(rs[k].epsilon));
        }
        v.detail << "lambda1^2 Vol/4pi = [" << series.str() << "]; ";
        const auto& tail = rs.back();
        v.require(tail.lambda1sq_vol <= 4 * pi * 1.15, "tail lambda1^2 Vol/4pi " + fmt(tail.lambda1sq_vol / (4 * pi)) + " <= 1.15");
        v.require(tail.witness_bound <= 4 * pi * 1.25, "tail witness/4pi " + fmt(tail.witness_bound / (4 * pi)) + " <= 1.25");
    }
    v.require(t < 600.0, "runtime " + fmt(t) + " s");
}

void c4(Verdict& v) {
    const auto rs = degenerate_sweep();
    if (!all_ok(rs, v)) return;
    const LiminfReport rep = liminf_product_check(rs);
    std::ostringstream series;
    for (const auto& row : rep.rows) series << fmt(row.eps2_mu1) << ",";
    v.detail << "eps^2 mu1 = [" << series.str() << "]; ";
    for (std::size_t k = 1; k < rs.size(); ++k)
        if (!(rs[k].mu1_vol > rs[k - 1].mu1_vol)) v.require(false, "mu1 Vol not increasing at eps=" + fmt(rs[k].epsilon));
    const double tail = rs.back().mu1_vol / (8 * pi);
    v.require(tail >= 0.8 && tail <= 1.05, "tail mu1 Vol/8pi " + fmt(tail) + " in [0.8, 1.05]");
    v.require(rep.tail_in_band, "tail eps^2 mu1 " + fmt(rep.rows.back().eps2_mu1) + " in [6.4, 8.4]");
}

void c5(Verdict& v) {
    const auto rs = degenerate_sweep();
    if (!all_ok(rs, v)) return;
    for (const auto& r : rs) {
        if (r.epsilon / r.alpha > 0.125 + 1e-12) continue;  // tail: eps/alpha <= 1/8
        v.require(r.ratio < 1.0, "ratio " + fmt(r.ratio) + " < 1 at eps/alpha=" + fmt(r.epsilon / r.alpha));
    }
    v.require(rs.back().ratio <= 0.55, "tail ratio " + fmt(rs.back().ratio) + " <= 0.55");
}

void c6(Verdict& v) {
    std::mt19937_64 rng(2024);
    {
        const TorusGrid g(1.0, 64);
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const ScalarField u = random_band_limited(g, 1 + t % 16, rng);
            const ScalarField w = random_band_limited(g, 1 + (3 * t + 5) % 16, rng);
            worst = std::max(worst, check_integration_identity(u, w));
        }
        v.require(worst <= 1e-8, "integration identity worst residual " + fmt(worst));
    }
    {
        const TorusGrid g(1.0, 128);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        double worst = INFINITY;
        for (int t = 0; t < 50; ++t) {
            const double alpha = 0.08 + 0.12 * unif(rng);
            const double eps = alpha * std::pow(2.0, -1.0 - 3.0 * unif(rng));
            const ScalarField w = random_band_limited(g, 5, rng);
            ScalarField u(g);
            for (int i = 0; i < g.nodes(); ++i)
                for (int j = 0; j < g.nodes(); ++j) {
                    const double r = g.distance_to_origin(i, j);
                    u(i, j) = (1.0 - smoothstep(7, (r - 0.2 * alpha) / (0.7 * alpha))) * (w(i, j) + (t % 3 == 0 ? 2.0 : 0.0));
                }
            worst = std::min(worst, check_poincare_bump(u, alpha, eps));
        }
        v.require(worst >= -1e-6, "Poincare minimum slack " + fmt(worst));
    }
    {
        double worst_decay = INFINITY;
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<double> res;
            for (int n : {16, 32}) {
                const TorusGrid g(1.0, n);
                std::mt19937_64 same(100 + trial);
                const SpinorField p = random_band_limited_spinor(g, SpinStructure::trivial(), 3, same);
                const double a = 0.2 + 0.1 * trial;
                const ConformalFactor f = custom_factor(sample(g, [a](double x, double y) {
                    return std::exp(a * std::cos(2 * pi * x) + 0.5 * a * std::sin(2 * pi * (x + y)));
                }));
                res.push_back(conformal_covariance_residual(DiracOperator(g, SpinStructure::trivial()), p, f));
            }
            worst_decay = std::min(worst_decay, res[0] / res[1]);
        }
        v.require(worst_decay >= 1e2, "covariance decay on doubling n " + fmt(worst_decay));
    }
    {
        double worst = 0.0;
        const TorusGrid g(1.0, 128);
        for (double alpha : {0.0625, 0.03125})
            for (double r : {0.5, 0.25, 0.125, 0.0625}) {
                const double eps = alpha * r;
                const NumeratorSplit s =
                    numerator_split(witness_spinor(g, CutoffProfile{0.125, 5}, eps), bump_factor(g, alpha, eps));
                worst = std::max(worst, s.max_cross_real);
            }
        v.require(worst <= 1e-10, "cross-term imaginarity " + fmt(worst));
    }
}

void c7(Verdict& v) {
    const TorusGrid g(1.0, 128);
    const ConformalFactor f = bump_factor(g, 1.0 / 16, 1.0 / 32);
    const double h = g.spacing();
    const std::vector<double> widths{4 * h, 2 * h, h};
    const ContinuityReport lap = continuity_experiment_laplace(f, widths);
    const ContinuityReport dir = continuity_experiment_dirac(f, widths, SpinStructure::trivial());
    auto gaps = [](const ContinuityReport& r) {
        std::string s;
        for (const auto& p : r.points) s += fmt(p.gap / r.reference) + ",";
        return s;
    };
    v.require(lap.gaps_decreasing(), "mu1 relative gaps [" + gaps(lap) + "] strictly decreasing");
    v.require(dir.gaps_decreasing(), "lambda1 relative gaps [" + gaps(dir) + "] strictly decreasing");
    bool kernel = dir.reference_kernel_dim == 2;
    for (const auto& p : dir.points) kernel = kernel && p.kernel_dim == 2;
    v.require(kernel, "kernel dimension 2 throughout");
}

void c8(Verdict& v) {
    const TorusGrid g(1.0, 24);
    std::mt19937_64 rng(8);
    std::vector<std::pair<std::string, ConformalFactor>> factors;
    for (int k = 0; k < 5; ++k) factors.emplace_back("smooth" + std::to_string(k), random_smooth_factor(g, rng));
    factors.emplace_back("bump(0.2,0.1)", bump_factor(g, 0.2, 0.1));
    factors.emplace_back("bump(0.1,0.05)", bump_factor(g, 0.1, 0.05));
    double worst_mu = 0.0, worst_lambda = 0.0;
    for (const auto& [name, f] : factors) {
        const double mu = first_weighted_eigenvalue(LaplaceOperator(g), f).eigenvalue;
        const double mu_dense = dense_laplace_oracle(f, 2)[1];
        const double lambda = first_positive_weighted_eigenvalue(DiracOperator(g, SpinStructure::trivial()), f).eigenvalue;
        double lambda_dense = INFINITY;
        for (double l : dense_dirac_oracle(f, SpinStructure::trivial(), 6))
            if (l > 1e-6) lambda_dense = std::min(lambda_dense, l);
        worst_mu = std::max(worst_mu, std::abs(mu - mu_dense) / mu_dense);
        worst_lambda = std::max(worst_lambda, std::abs(lambda - lambda_dense) / lambda_dense);
    }
    v.require(worst_mu <= 1e-8, "mu1 worst relative disagreement " + fmt(worst_mu));
    v.require(worst_lambda <= 1e-8, "lambda1 worst relative disagreement " + fmt(worst_lambda));
}

const std::map<std::string, std::pair<std::string, std::function<void(Verdict&)>>>& criteria() {
    static const std::map<std::string, std::pair<std::string, std::function<void(Verdict&)>>> table{
        {"C1", {"flat-spectrum oracle", c1}},
        {"C2", {"volume oracle", c2}},
        {"C3", {"Dirac upper bound", c3}},
        {"C4", {"Laplace lower bound", c4}},
        {"C5", {"eigenvalue ratio", c5}},
        {"C6", {"identity suite", c6}},
        {"C7", {"continuity suite", c7}},
        {"C8", {"oracle equivalence", c8}},
    };
    return table;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> wanted(argv + 1, argv + argc);
    if (wanted.empty())
        for (const auto& [id, _] : criteria()) wanted.push_back(id);
    int failures = 0;
    for (const auto& id : wanted) {
        const auto it = criteria().find(id);
        if (it == criteria().end()) {
            std::cout << "FAIL " << id << ": unknown criterion\n";
            ++failures;
            continue;
        }
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            it->second.second(v);
        } catch (const std::exception& e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        std::cout << (v.pass ? "PASS " : "FAIL ") << id << " " << it->second.first << " (" << fmt(seconds_since(t0))
                  << " s): " << v.detail.str() << std::endl;
        failures += !v.pass;
    }
    return failures ? 1 : 0;
}
