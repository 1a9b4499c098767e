#pragma once

#include "torus/fields.hpp"

#include <random>

namespace torus {

/// Random real trigonometric polynomial with all |k_i| < max_mode (so degree < n/2 when
/// max_mode <= n/2), built directly in physical space. Coefficients decay like 1 / (1 + |k|^2).
ScalarField random_band_limited(const TorusGrid& grid, int max_mode, std::mt19937_64& rng);

/// Random spinor sum_k c_k exp(i kappa_k . x) with kappa_k = 2 pi (k + phase) / L and
/// -max_mode <= k_i < max_mode, evaluated at the nodal positions (i h, j h).
SpinorField random_band_limited_spinor(const TorusGrid& grid, SpinStructure spin, int max_mode, std::mt19937_64& rng);

}  // namespace torus
