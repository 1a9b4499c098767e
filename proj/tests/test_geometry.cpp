#include <doctest.h>

#include "support.hpp"
#include "torus/errors.hpp"
#include "torus/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace torus;
using std::numbers::pi;

namespace {

// Composite Simpson on [a, b] with m (even) panels.
template <class Fn>
double simpson(Fn&& fn, double a, double b, int m) {
    const double h = (b - a) / m;
    double s = fn(a) + fn(b);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * fn(a + i * h);
    return s * h / 3.0;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("grid spacing and validation") {
    CHECK(make_grid(1.0, 8).spacing() == doctest::Approx(0.125));
    CHECK(make_grid(2 * pi, 64).spacing() == doctest::Approx(2 * pi / 64));
    CHECK_THROWS_AS(make_grid(1.0, 7), ConfigurationError);
    CHECK_THROWS_AS(make_grid(1.0, 6), ConfigurationError);
    CHECK_THROWS_AS(make_grid(0.0, 8), ConfigurationError);

    const TorusGrid g(3.0, 12);
    CHECK(std::abs(g.spacing() * g.nodes() - g.period()) <= 1e-15 * g.period());
    CHECK(g.index(13, -1) == g.index(1, 11));
    CHECK(g.origin_index() == std::array<int, 2>{0, 0});
    CHECK(g.distance_to_origin(0, 0) == 0.0);
}

TEST_CASE("minimum-image distance obeys the triangle inequality") {
    const TorusGrid g(1.0, 16);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> pick(0, 15);
    for (int t = 0; t < 500; ++t) {
        const int a[2] = {pick(rng), pick(rng)}, b[2] = {pick(rng), pick(rng)}, c[2] = {pick(rng), pick(rng)};
        const double ab = g.distance(a[0], a[1], b[0], b[1]);
        const double bc = g.distance(b[0], b[1], c[0], c[1]);
        const double ac = g.distance(a[0], a[1], c[0], c[1]);
        CHECK(ac <= ab + bc + 1e-14);
        CHECK(ab <= std::sqrt(0.5) * g.period() + 1e-14);
    }
}

TEST_CASE("bump factor values") {
    const TorusGrid g(1.0, 64);
    const double eps = 1.0 / 32;
    CHECK(bump_profile(eps, eps, 0.0) == doctest::Approx(1.0));
    CHECK(bump_profile(eps, eps, eps) == doctest::Approx(0.5));
    CHECK(bump_profile(2 * eps, eps, 0.3) == doctest::Approx(0.2));

    const auto f = bump_factor(g, 2 * eps, eps);
    CHECK(f.kind() == FactorKind::bump);
    CHECK(f[0] == 1.0);
    CHECK(f.max() <= 1.0);
    CHECK(f.min() == doctest::Approx(0.2));
    CHECK(*f.alpha() == 2 * eps);
}

TEST_CASE("bump factor parameter chain") {
    const TorusGrid g(1.0, 64);
    CHECK_THROWS_AS(bump_factor(g, 0.1, 0.2), ConfigurationError);
    CHECK_THROWS_AS(bump_factor(g, 0.25, 0.1), ConfigurationError);
    CHECK_THROWS_AS(bump_factor(g, 0.1, 0.0), ConfigurationError);
    try {
        bump_factor(g, 0.1, 0.2);
    } catch (const ConfigurationError& e) {
        CHECK(std::string(e.what()).find("eps <= alpha <= delta <= period/4") != std::string::npos);
    }
}

TEST_CASE("bump factor is continuous across r = alpha") {
    const TorusGrid g(1.0, 128);
    const double alpha = 0.1, eps = 0.05;
    const auto f = bump_factor(g, alpha, eps);
    // |f'| <= 2 eps^2 r / (eps^2 + r^2)^2 <= 0.65 / eps; neighbours differ by at most that times h.
    const double bound = 0.65 / eps * g.spacing() * std::sqrt(2.0);
    for (int i = 0; i < g.nodes(); ++i) {
        for (int j = 0; j < g.nodes(); ++j) {
            CHECK(std::abs(f.values()(i, j) - f.values()(i + 1, j)) <= bound);
            CHECK(std::abs(f.values()(i, j) - f.values()(i, j + 1)) <= bound);
        }
    }
}

TEST_CASE("constant and custom factors") {
    const TorusGrid g(1.0, 8);
    CHECK_THROWS_AS(constant_factor(g, 0.0), PreconditionError);
    CHECK_THROWS_AS(custom_factor(ScalarField(g, -1.0)), PreconditionError);
    CHECK(constant_factor(g, 2.0).kind() == FactorKind::constant);
}

TEST_CASE("smoothstep cutoff profile") {
    const TorusGrid g(1.0, 64);
    for (int order : {3, 5, 7}) {
        const CutoffProfile p{0.125, order};
        CHECK(p.value(0.0625) == 1.0);
        CHECK(p.value(0.25) == 0.0);
        CHECK(p.value(0.3) == 0.0);
        CHECK(p.value(1.5 * 0.125) == doctest::Approx(0.5));
        // Derivative against a central difference.
        for (double r : {0.14, 0.17, 0.2, 0.23}) {
            const double d = 1e-6;
            CHECK(p.radial_derivative(r) == doctest::Approx((p.value(r + d) - p.value(r - d)) / (2 * d)).epsilon(1e-6));
        }
    }
    // cubic 3t^2 - 2t^3, quintic 6t^5 - 15t^4 + 10t^3
    CHECK(smoothstep(3, 0.3) == doctest::Approx(3 * 0.09 - 2 * 0.027));
    CHECK(smoothstep(5, 0.3) == doctest::Approx(6 * std::pow(0.3, 5) - 15 * std::pow(0.3, 4) + 10 * 0.027));

    const auto eta = cutoff_field(g, CutoffProfile{});
    for (int i = 0; i < g.nodes(); ++i) {
        for (int j = 0; j < g.nodes(); ++j) {
            const double r = g.distance_to_origin(i, j);
            const double v = eta(i, j);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            if (r <= 0.125) CHECK(v == 1.0);
            if (r >= 0.25) CHECK(v == 0.0);
        }
    }
    CHECK_THROWS_AS(cutoff_field(g, CutoffProfile{0.25, 5}), ConfigurationError);
    CHECK_THROWS_AS(cutoff_field(g, CutoffProfile{0.1, 4}), ConfigurationError);
}

TEST_CASE("integrate") {
    const TorusGrid g(1.0, 32);
    CHECK(integrate(ScalarField(g, 1.0)) == doctest::Approx(1.0));
    CHECK(std::abs(integrate(sample(g, [](double x, double) { return std::cos(2 * pi * x); }))) < 1e-15);

    // exact for every Fourier mode of degree < n/2 (each nonconstant mode integrates to 0)
    for (int k1 = -15; k1 < 16; ++k1) {
        for (int k2 = -15; k2 < 16; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            const auto c = sample(g, [&](double x, double y) { return std::cos(2 * pi * (k1 * x + k2 * y)); });
            const auto s = sample(g, [&](double x, double y) { return std::sin(2 * pi * (k1 * x + k2 * y)); });
            CHECK(std::abs(integrate(c)) < 1e-14);
            CHECK(std::abs(integrate(s)) < 1e-14);
        }
    }
}

TEST_CASE("closed-form bump volume against radial quadrature") {
    for (double L : {1.0, 2.0}) {
        for (double alpha : {1.0 / 32, 0.1, 0.2}) {
            for (double ratio : {0.5, 0.125, 1.0 / 16}) {
                const double eps = alpha * ratio;
                auto f = [&](double r) { return eps * eps / (eps * eps + r * r); };
                const double inside = simpson([&](double r) { return 2 * pi * r * f(r) * f(r); }, 0.0, alpha, 20000);
                const double outside = f(alpha) * f(alpha) * (L * L - pi * alpha * alpha);
                CHECK(bump_volume_exact(L, alpha, eps) == doctest::Approx(inside + outside).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("generalized volume") {
    const TorusGrid g(1.0, 32);
    CHECK(generalized_volume(constant_factor(g, 3.0)) == doctest::Approx(9.0));

    const TorusGrid g2(2.0, 32);
    CHECK(generalized_volume(constant_factor(g2, 0.5)) == doctest::Approx(1.0));

    const auto f = bump_factor(g, 0.2, 0.1);
    for (double c : {0.1, 3.0, 10.0})
        CHECK(generalized_volume(f.scaled(c)) == doctest::Approx(c * c * generalized_volume(f)).epsilon(1e-13));
    // powers of two scale without rounding
    for (double c : {0.5, 4.0}) CHECK(generalized_volume(f.scaled(c)) == c * c * generalized_volume(f));
}

TEST_CASE("nodal volume converges to the closed form on resolved bumps") {
    const double alpha = 0.125, eps = 0.0625;
    const double exact = bump_volume_exact(1.0, alpha, eps);
    double previous = INFINITY;
    for (int n : {64, 128, 256, 512}) {
        const double err = std::abs(generalized_volume(bump_factor(TorusGrid(1.0, n), alpha, eps)) / exact - 1.0);
        CHECK(err < previous);
        previous = err;
    }
    CHECK(previous < 1e-3);
}

TEST_CASE("volume over pi eps^2 tends to one as eps / alpha -> 0") {
    // closed form only; at fixed alpha the outside term is (eps/alpha)^4 L^2, so alpha near L/4
    // and eps small make the limit visible.
    const double alpha = 0.24;
    double previous = INFINITY;
    for (double ratio : {0.5, 0.25, 0.125, 1.0 / 16, 1.0 / 64, 1.0 / 256}) {
        const double eps = alpha * ratio;
        const double v = bump_volume_exact(1.0, alpha, eps) / (pi * eps * eps);
        CHECK(std::abs(v - 1.0) < previous);
        previous = std::abs(v - 1.0);
    }
    CHECK(previous < 1e-3);
}

TEST_CASE("mollification") {
    const TorusGrid g(1.0, 128);
    const auto c = mollify_factor(constant_factor(g, 2.0), 0.02);
    CHECK(c.kind() == FactorKind::mollified);
    for (double v : c.values().values()) CHECK(v == doctest::Approx(2.0).epsilon(1e-12));

    const auto f = bump_factor(g, 0.125, 0.0625);
    double previous = INFINITY;
    for (double width : {4 * g.spacing(), 2 * g.spacing(), g.spacing(), 0.5 * g.spacing()}) {
        const auto m = mollify_factor(f, width);
        CHECK(m.min() >= f.min() - 1e-12);
        const double dist = max_abs_difference(m.values(), f.values());
        CHECK(dist < previous);
        CHECK(dist < 10.0 * std::pow(width, 0.9));
        previous = dist;
    }
    CHECK_THROWS_AS(mollify_factor(f, 0.0), PreconditionError);
}

}  // TEST_SUITE
