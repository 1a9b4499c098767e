#include <doctest.h>

#include "support.hpp"
#include "torus/errors.hpp"
#include "torus/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace torus;
using std::numbers::pi;

namespace {

double l2_dot(const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s * a.grid().spacing() * a.grid().spacing();
}

ScalarField smooth_positive(const TorusGrid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> amp(-0.25, 0.25);
    const double a = amp(rng), b = amp(rng), c = amp(rng), d = amp(rng);
    const double L = g.period();
    return sample(g, [&](double x, double y) {
        return 1.0 + a * std::cos(2 * pi * x / L) + b * std::sin(2 * pi * y / L) + c * std::cos(2 * pi * (x + y) / L)
               + d * std::sin(4 * pi * (x - y) / L);
    });
}

}  // namespace

TEST_SUITE("laplace") {

TEST_CASE("plane waves and constants") {
    for (double L : {1.0, 2 * pi}) {
        const TorusGrid g(L, 16);
        const LaplaceOperator op(g);
        const auto u = sample(g, [&](double x, double) { return std::cos(2 * pi * x / L); });
        const auto lu = apply_laplacian(op, u);
        for (std::size_t k = 0; k < u.size(); ++k) CHECK(lu[k] == doctest::Approx(std::pow(2 * pi / L, 2) * u[k]).epsilon(1e-12));
        const auto zero = apply_laplacian(op, ScalarField(g, 3.0));
        for (double v : zero.values()) CHECK(std::abs(v) < 1e-10);

        // highest resolved mode k = n/2 - 1 along the diagonal
        const auto w = sample(g, [&](double x, double y) { return std::sin(2 * pi * 7 * (x + y) / L); });
        const auto lw = op.apply(w);
        for (std::size_t k = 0; k < w.size(); ++k)
            CHECK(std::abs(lw[k] - 2 * std::pow(2 * pi * 7 / L, 2) * w[k]) < 1e-9 * std::pow(2 * pi * 7 / L, 2));
    }
}

TEST_CASE("five-point symbol") {
    const TorusGrid g(1.0, 16);
    const LaplaceOperator op(g, LaplaceScheme::five_point);
    const auto u = sample(g, [](double x, double y) { return std::cos(2 * pi * x) * std::cos(4 * pi * y); });
    const auto lu = op.apply(u);
    // stencil applied by hand
    const double h = g.spacing();
    for (int i = 0; i < 16; ++i) {
        for (int j = 0; j < 16; ++j) {
            const double expect = (4 * u(i, j) - u(i + 1, j) - u(i - 1, j) - u(i, j + 1) - u(i, j - 1)) / (h * h);
            CHECK(lu(i, j) == doctest::Approx(expect).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("symmetric and energy identity on band-limited fields") {
    std::mt19937_64 rng(5);
    for (double L : {1.0, 2 * pi}) {
        const TorusGrid g(L, 32);
        const LaplaceOperator op(g);
        for (int t = 0; t < 10; ++t) {
            const auto u = testing::random_band_limited(g, 16, rng);
            const auto v = testing::random_band_limited(g, 16, rng);
            const auto lu = op.apply(u), lv = op.apply(v);
            CHECK(l2_dot(lu, v) == doctest::Approx(l2_dot(u, lv)).epsilon(1e-11));

            const auto grad = spectral_gradient(u);
            const double energy = l2_dot(grad[0], grad[0]) + l2_dot(grad[1], grad[1]);
            CHECK(l2_dot(lu, u) == doctest::Approx(energy).epsilon(1e-10));
            CHECK(op.dirichlet_energy(u) == doctest::Approx(energy).epsilon(1e-10));
        }
    }
}

TEST_CASE("spectral gradient of a plane wave") {
    const TorusGrid g(2.0, 16);
    const auto u = sample(g, [](double x, double y) { return std::sin(pi * x) * std::cos(3 * pi * y); });
    const auto grad = spectral_gradient(u);
    const auto dx = sample(g, [](double x, double y) { return pi * std::cos(pi * x) * std::cos(3 * pi * y); });
    const auto dy = sample(g, [](double x, double y) { return -3 * pi * std::sin(pi * x) * std::sin(3 * pi * y); });
    CHECK(max_abs_difference(grad[0], dx) < 1e-12);
    CHECK(max_abs_difference(grad[1], dy) < 1e-12);
}

TEST_CASE("flat torus of period 2 pi") {
    const TorusGrid g(2 * pi, 32);
    const LaplaceOperator op(g);
    const auto r = first_weighted_eigenvalue(op, constant_factor(g, 1.0));
    CHECK(r.eigenvalue == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.residual <= 1e-10);
    CHECK(r.solver == "lanczos");

    const auto vals = weighted_eigenvalues(op, constant_factor(g, 1.0), 5);
    REQUIRE(vals.size() == 5);
    for (int k = 0; k < 4; ++k) CHECK(vals[k] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(vals[4] == doctest::Approx(2.0).epsilon(1e-10));

    for (double c : {0.5, 2.0, 7.0}) {
        const auto rc = first_weighted_eigenvalue(op, constant_factor(g, c));
        CHECK(rc.eigenvalue == doctest::Approx(1.0 / (c * c)).epsilon(1e-10));
    }
}

TEST_CASE("Rayleigh quotient") {
    const TorusGrid g(2 * pi, 32);
    const auto u = sample(g, [](double x, double) { return std::cos(x); });
    // integral of sin^2 over the torus = 2 pi^2 = integral of cos^2
    CHECK(rayleigh_quotient_I(u, constant_factor(g, 1.0)) == doctest::Approx(1.0).epsilon(1e-12));
    const auto f = bump_factor(g, 1.0, 0.5);
    const double q = rayleigh_quotient_I(u, f);
    for (double c : {0.1, 3.0, 10.0}) CHECK(rayleigh_quotient_I(u, f.scaled(c)) == doctest::Approx(q / (c * c)).epsilon(1e-12));
    CHECK_THROWS_AS(rayleigh_quotient_I(ScalarField(g), f), PreconditionError);
}

TEST_CASE("dense oracle") {
    const TorusGrid g(2 * pi, 16);
    const auto vals = dense_laplace_oracle(constant_factor(g, 1.0), 6);
    const std::vector<double> expect{0, 1, 1, 1, 1, 2};
    REQUIRE(vals.size() == 6);
    for (int k = 0; k < 6; ++k) CHECK(std::abs(vals[k] - expect[k]) < 1e-10);
    CHECK(std::is_sorted(vals.begin(), vals.end()));
    CHECK_THROWS_AS(dense_laplace_oracle(constant_factor(TorusGrid(1.0, 50), 1.0), 2), ResolutionError);

    const auto five = dense_laplace_oracle(constant_factor(g, 1.0), 2, LaplaceScheme::five_point);
    const double h = g.spacing();
    CHECK(five[1] == doctest::Approx(4 / (h * h) * std::pow(std::sin(pi / 16), 2)).epsilon(1e-10));
}

TEST_CASE("iterative and dense agree on bump and smooth factors") {
    const TorusGrid g(1.0, 24);
    const LaplaceOperator op(g);
    std::mt19937_64 rng(2);
    std::vector<ConformalFactor> factors{bump_factor(g, 0.2, 0.1), bump_factor(g, 0.12, 0.06),
                                         custom_factor(smooth_positive(g, rng))};
    for (const auto& f : factors) {
        const auto it = first_weighted_eigenvalue(op, f);
        const auto dense = dense_laplace_oracle(f, 2);
        CHECK(it.eigenvalue == doctest::Approx(dense[1]).epsilon(1e-8));
        SolveOptions o;
        o.solver = SolverChoice::dense;
        const auto d = first_weighted_eigenvalue(op, f, o);
        CHECK(d.solver == "dense");
        CHECK(d.eigenvalue == doctest::Approx(dense[1]).epsilon(1e-10));
    }
    const LaplaceOperator five(g, LaplaceScheme::five_point);
    const auto f = bump_factor(g, 0.2, 0.1);
    CHECK(first_weighted_eigenvalue(five, f).eigenvalue
          == doctest::Approx(dense_laplace_oracle(f, 2, LaplaceScheme::five_point)[1]).epsilon(1e-8));
}

TEST_CASE("eigenfunction invariants") {
    const TorusGrid g(1.0, 64);
    const LaplaceOperator op(g);
    const auto f = bump_factor(g, 0.2, 0.05);
    const double tol = 1e-10;
    const auto r = first_weighted_eigenvalue(op, f);
    const double h = g.spacing();
    double mean = 0.0, mass = 0.0, norm = 0.0;
    for (std::size_t k = 0; k < f.values().size(); ++k) {
        mean += r.eigenfunction[k] * f[k] * f[k];
        mass += r.eigenfunction[k] * r.eigenfunction[k] * f[k] * f[k];
        norm += r.eigenfunction[k] * r.eigenfunction[k];
    }
    CHECK(std::abs(mean * h * h) <= 10 * tol * std::sqrt(norm * h * h));
    CHECK(mass * h * h == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rayleigh_quotient_I(r.eigenfunction, f) == doctest::Approx(r.eigenvalue).epsilon(tol));
    CHECK(r.h1_norm > 0.0);
    CHECK(r.iterations > 0);
}

TEST_CASE("variational upper bound on random constrained fields") {
    const TorusGrid g(1.0, 32);
    const auto f = bump_factor(g, 0.2, 0.05);
    const double mu = first_weighted_eigenvalue(LaplaceOperator(g), f).eigenvalue;
    std::mt19937_64 rng(9);
    double f2 = 0.0;
    for (double v : f.values().values()) f2 += v * v;
    for (int t = 0; t < 100; ++t) {
        auto u = testing::random_band_limited(g, 8, rng);
        double m = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k) m += u[k] * f[k] * f[k];
        for (double& v : u.values()) v -= m / f2;
        CHECK(mu <= rayleigh_quotient_I(u, f) * (1.0 + 1e-10));
    }
}

TEST_CASE("scale invariance of mu1 Vol") {
    const TorusGrid g(1.0, 32);
    const LaplaceOperator op(g);
    const auto f = bump_factor(g, 0.2, 0.05);
    const double base = first_weighted_eigenvalue(op, f).eigenvalue * generalized_volume(f);
    for (double c : {0.1, 3.0, 10.0}) {
        const auto fc = f.scaled(c);
        CHECK(first_weighted_eigenvalue(op, fc).eigenvalue * generalized_volume(fc) == doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("second-order convergence under refinement on a bump factor") {
    const double alpha = 0.125, eps = 0.0625;
    std::vector<double> mu;
    for (int n : {32, 64, 128}) {
        const TorusGrid g(1.0, n);
        mu.push_back(first_weighted_eigenvalue(LaplaceOperator(g), bump_factor(g, alpha, eps)).eigenvalue);
    }
    const double d1 = std::abs(mu[1] - mu[0]), d2 = std::abs(mu[2] - mu[1]);
    MESSAGE("refinement differences " << d1 << " " << d2);
    CHECK(d2 <= d1 / 4.0);
}

TEST_CASE("weighted eigenvalue errors") {
    const TorusGrid g(1.0, 16);
    const LaplaceOperator op(g);
    SolveOptions o;
    o.tolerance = 0.0;
    CHECK_THROWS_AS(first_weighted_eigenvalue(op, constant_factor(g, 1.0), o), ConfigurationError);
    CHECK_THROWS_AS(first_weighted_eigenvalue(op, constant_factor(TorusGrid(1.0, 32), 1.0)), PreconditionError);
    o.tolerance = 1e-10;
    o.max_matvecs = 3;
    CHECK_THROWS_AS(first_weighted_eigenvalue(op, bump_factor(g, 0.2, 0.1), o), ConvergenceError);
}

}  // TEST_SUITE
