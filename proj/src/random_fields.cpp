#include "torus/random_fields.hpp"

#include <cmath>
#include <numbers>

namespace torus {
ScalarField random_band_limited(const TorusGrid& grid, int max_mode, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    ScalarField out(grid);
    const double w = 2.0 * std::numbers::pi / grid.period();
    const int n = grid.nodes();
    for (int k1 = -max_mode + 1; k1 < max_mode; ++k1) {
        for (int k2 = 0; k2 < max_mode; ++k2) {
            if (k2 == 0 && k1 < 0) continue;
            const double a = normal(rng) / (1.0 + k1 * k1 + k2 * k2);
            const double b = normal(rng) / (1.0 + k1 * k1 + k2 * k2);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    const double phase = w * (k1 * i + k2 * j) * grid.spacing();
                    out(i, j) += a * std::cos(phase) + b * std::sin(phase);
                }
            }
        }
    }
    return out;
}

SpinorField random_band_limited_spinor(const TorusGrid& grid, SpinStructure spin, int max_mode,
                                              std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    SpinorField out(grid, spin);
    const double w = 2.0 * std::numbers::pi / grid.period();
    const int n = grid.nodes();
    for (int k1 = -max_mode; k1 < max_mode; ++k1) {
        for (int k2 = -max_mode; k2 < max_mode; ++k2) {
            const double decay = 1.0 / (1.0 + k1 * k1 + k2 * k2);
            const complex a(normal(rng) * decay, normal(rng) * decay);
            const complex b(normal(rng) * decay, normal(rng) * decay);
            const double q1 = w * (k1 + spin.phase_x()), q2 = w * (k2 + spin.phase_y());
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    const complex e = std::polar(1.0, (q1 * i + q2 * j) * grid.spacing());
                    out.upper()[grid.index(i, j)] += a * e;
                    out.lower()[grid.index(i, j)] += b * e;
                }
            }
        }
    }
    return out;
}

}  // namespace torus
