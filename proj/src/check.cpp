#include "torus/check.hpp"

#include "torus/analysis.hpp"
#include "torus/errors.hpp"
#include "torus/random_fields.hpp"
#include "torus/witness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace torus {

namespace {

using std::numbers::pi;

struct Outcome {
    bool ok = true;
    std::ostringstream note;
    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            note << what << "; ";
        }
    }
};

SolveOptions solve_options(const CheckConfig& c) {
    SolveOptions o;
    o.tolerance = c.tolerance;
    o.seed = c.seed;
    return o;
}

DiracSolveOptions dirac_options(const CheckConfig& c) {
    DiracSolveOptions o;
    o.tolerance = c.tolerance;
    o.seed = c.seed;
    return o;
}

void flat_oracle(const CheckConfig& c, Outcome& out) {
    const TorusGrid g(2 * pi, 32);
    const ConformalFactor one = constant_factor(g, 1.0);
    const auto mu = weighted_eigenvalues(LaplaceOperator(g), one, 5, solve_options(c));
    const double expected[] = {1, 1, 1, 1, 2};
    double err = 0.0;
    for (int k = 0; k < 5; ++k) err = std::max(err, std::abs(mu[k] - expected[k]));
    out.require(err <= 1e-10, "laplace flat spectrum off by " + std::to_string(err));

    for (SpinStructure spin : all_spin_structures()) {
        const DiracOperator op(g, spin);
        std::vector<double> symbol;
        for (double m : op.symbol_magnitudes())
            if (m > 1e-12) symbol.push_back(m);
        std::sort(symbol.begin(), symbol.end());
        DiracSolveOptions o = dirac_options(c);
        o.block_size = 4;
        const auto lambda = weighted_dirac_eigenvalues(op, one, 5, o);
        // each Fourier mode carries the pair +-|kappa|
        double e = 0.0;
        for (int k = 0; k < 5; ++k) e = std::max(e, std::abs(lambda[k] - symbol[k]));
        out.require(e <= 1e-10, "dirac " + to_string(spin) + " off the symbol by " + std::to_string(e));
        const int kernel = kernel_dimension(op, one, default_kernel_tolerance, dirac_options(c));
        out.require(kernel == (spin.is_trivial() ? 2 : 0),
                    "dirac " + to_string(spin) + " kernel " + std::to_string(kernel));
    }
}

void symmetry(const CheckConfig& c, Outcome& out) {
    const TorusGrid g(1.0, 32);
    std::mt19937_64 rng(c.seed);
    const ScalarField u = random_band_limited(g, 16, rng), v = random_band_limited(g, 16, rng);
    const LaplaceOperator lap(g);
    const ScalarField lu = lap.apply(u), lv = lap.apply(v);
    double a = 0.0, b = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        a += lu[k] * v[k];
        b += u[k] * lv[k];
        scale += std::abs(lu[k] * v[k]);
    }
    out.require(std::abs(a - b) <= 1e-12 * scale, "laplacian not symmetric");

    for (SpinStructure spin : all_spin_structures()) {
        const DiracOperator d(g, spin);
        const SpinorField p = random_band_limited_spinor(g, spin, 16, rng), q = random_band_limited_spinor(g, spin, 16, rng);
        const SpinorField dp = d.apply(p), dq = d.apply(q);
        complex x = 0.0, y = 0.0;
        double s = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            x += SpinorField::inner_at(dp, q, k);
            y += SpinorField::inner_at(p, dq, k);
            s += std::abs(SpinorField::inner_at(dp, q, k));
        }
        out.require(std::abs(x - y) <= 1e-12 * s, "dirac " + to_string(spin) + " not self-adjoint");
    }
}

void identities(const CheckConfig& c, Outcome& out) {
    const TorusGrid g(1.0, 64);
    std::mt19937_64 rng(c.seed);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const ScalarField u = random_band_limited(g, 1 + t % 16, rng);
        const ScalarField v = random_band_limited(g, 1 + (5 * t) % 16, rng);
        worst = std::max(worst, check_integration_identity(u, v));
    }
    out.require(worst <= 1e-8, "integration identity residual " + std::to_string(worst));

    double slack = INFINITY;
    const double alpha = 0.2;
    for (int t = 0; t < 10; ++t) {
        const ScalarField w = random_band_limited(g, 4, rng);
        ScalarField u(g);
        for (int i = 0; i < g.nodes(); ++i)
            for (int j = 0; j < g.nodes(); ++j) {
                const double r = g.distance_to_origin(i, j);
                u(i, j) = (1.0 - smoothstep(7, (r - 0.2 * alpha) / (0.7 * alpha))) * w(i, j);
            }
        slack = std::min(slack, check_poincare_bump(u, alpha, alpha / (2 << (t % 4))));
    }
    out.require(slack >= -1e-6, "Poincare slack " + std::to_string(slack));
}

void covariance(const CheckConfig& c, Outcome& out) {
    double prev = 0.0;
    for (int n : {16, 32}) {
        const TorusGrid g(1.0, n);
        std::mt19937_64 rng(c.seed);
        const SpinorField p = random_band_limited_spinor(g, SpinStructure::trivial(), 3, rng);
        const ConformalFactor f =
            custom_factor(sample(g, [](double x, double y) { return 1.0 + 0.3 * std::cos(2 * pi * x) * std::sin(2 * pi * y); }));
        const double r = conformal_covariance_residual(DiracOperator(g, SpinStructure::trivial()), p, f);
        if (prev > 0.0) out.require(r * 1e2 <= prev, "covariance residual " + std::to_string(prev) + " -> " + std::to_string(r));
        prev = r;
    }
}

void imaginarity(const CheckConfig& c, Outcome& out) {
    const TorusGrid g(1.0, 64);
    const double alpha = 0.1, eps = 0.025;
    try {
        const NumeratorSplit s =
            numerator_split(witness_spinor(g, CutoffProfile{0.125, 5}, eps), bump_factor(g, alpha, eps), c.gamma);
        out.require(s.max_cross_real <= imaginarity_tolerance, "cross term not imaginary");
    } catch (const ConsistencyError& e) {
        out.require(false, e.what());
    }
}

void oracle_equivalence(const CheckConfig& c, Outcome& out) {
    const TorusGrid g(1.0, 16);
    std::mt19937_64 rng(c.seed);
    const ScalarField w = random_band_limited(g, 3, rng);
    double peak = 0.0;
    for (double x : w.values()) peak = std::max(peak, std::abs(x));
    ScalarField values(g);
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = std::exp(0.5 * w[k] / peak);
    const ConformalFactor f = custom_factor(values);

    const double mu = first_weighted_eigenvalue(LaplaceOperator(g), f, solve_options(c)).eigenvalue;
    const double mu_dense = dense_laplace_oracle(f, 2)[1];
    out.require(std::abs(mu - mu_dense) <= 1e-8 * mu_dense, "laplace iterative vs dense");
    const double lambda =
        first_positive_weighted_eigenvalue(DiracOperator(g, SpinStructure::trivial()), f, dirac_options(c)).eigenvalue;
    double lambda_dense = INFINITY;
    for (double l : dense_dirac_oracle(f, SpinStructure::trivial(), 6))
        if (l > 1e-6) lambda_dense = std::min(lambda_dense, l);
    out.require(std::abs(lambda - lambda_dense) <= 1e-8 * lambda_dense, "dirac iterative vs dense");
}

struct Suite {
    std::string name;
    bool uses_solver;
    std::function<void(const CheckConfig&, Outcome&)> run;
};

const std::vector<Suite>& suites() {
    static const std::vector<Suite> s{
        {"flat_oracle", true, flat_oracle},   {"symmetry", false, symmetry},
        {"identities", false, identities},    {"covariance", false, covariance},
        {"imaginarity", false, imaginarity},  {"oracle_equivalence", true, oracle_equivalence},
    };
    return s;
}

}  // namespace

std::string_view to_string(SuiteStatus status) {
    switch (status) {
        case SuiteStatus::passed: return "PASS";
        case SuiteStatus::failed: return "FAIL";
        case SuiteStatus::tolerance_infeasible: return "TOLERANCE-INFEASIBLE";
    }
    return "?";
}

int CheckReport::exit_code() const noexcept {
    bool infeasible = false;
    for (const auto& s : suites) {
        if (s.status == SuiteStatus::failed) return 1;
        if (s.status == SuiteStatus::tolerance_infeasible) infeasible = true;
    }
    return infeasible ? 2 : 0;
}

const std::vector<std::string>& check_suites() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& s : suites()) n.push_back(s.name);
        return n;
    }();
    return names;
}

CheckReport run_checks(const CheckConfig& config) {
    if (!(config.tolerance > 0.0)) throw ConfigurationError("check tolerance must be positive");
    for (const auto& name : config.suites)
        if (std::find(check_suites().begin(), check_suites().end(), name) == check_suites().end())
            throw ConfigurationError("unknown check suite '" + name + "'");

    CheckReport report;
    for (const Suite& suite : suites()) {
        if (!config.suites.empty() && std::find(config.suites.begin(), config.suites.end(), suite.name) == config.suites.end())
            continue;
        if (suite.uses_solver && config.tolerance < tolerance_floor) {
            std::ostringstream m;
            m << "tolerance " << config.tolerance << " is below the rounding floor " << tolerance_floor;
            report.suites.push_back({suite.name, SuiteStatus::tolerance_infeasible, m.str()});
            continue;
        }
        Outcome out;
        try {
            suite.run(config, out);
        } catch (const std::exception& e) {
            out.require(false, std::string("exception: ") + e.what());
        }
        report.suites.push_back({suite.name, out.ok ? SuiteStatus::passed : SuiteStatus::failed, out.note.str()});
    }
    return report;
}

int check_command(const CheckConfig& config, std::ostream& out) {
    const CheckReport report = run_checks(config);
    for (const auto& s : report.suites) {
        out << to_string(s.status) << ' ' << s.name;
        if (!s.details.empty()) out << ": " << s.details;
        out << '\n';
    }
    return report.exit_code();
}

}  // namespace torus
