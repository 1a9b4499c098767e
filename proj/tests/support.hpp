#pragma once

#include "torus/random_fields.hpp"

namespace torus::testing {

using torus::random_band_limited;
using torus::random_band_limited_spinor;

}  // namespace torus::testing
