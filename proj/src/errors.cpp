#include "torus/errors.hpp"

#include <sstream>

namespace torus {

namespace {

std::string describe(const std::string& what, double residual, int iterations) {
    std::ostringstream m;
    m << what << " (last residual " << residual << " after " << iterations << " iterations)";
    return m.str();
}

}  // namespace

ConvergenceError::ConvergenceError(const std::string& what, double last_residual, int iterations)
    : std::runtime_error(describe(what, last_residual, iterations)),
      last_residual_(last_residual),
      iterations_(iterations) {}

}  // namespace torus
