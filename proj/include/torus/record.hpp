#pragma once

#include <string>

namespace torus {

/// Outcome of one (alpha, eps) experiment. Numeric fields of a failed record are NaN
/// (kernel_dim -1) and `error` says why.
struct SweepRecord {
    double alpha = 0.0;
    double epsilon = 0.0;
    double mu1 = 0.0;
    double lambda1 = 0.0;
    double volume = 0.0;
    double mu1_vol = 0.0;
    double lambda1sq_vol = 0.0;
    double ratio = 0.0;  ///< lambda1sq_vol / mu1_vol
    double witness_bound = 0.0;
    double I1 = 0.0;
    double I2 = 0.0;
    double denominator = 0.0;
    int kernel_dim = 0;
    double residual_mu = 0.0;
    double residual_lambda = 0.0;
    double wall_time = 0.0;  ///< seconds; not part of the CSV schema

    bool ok = true;
    std::string error_kind;  ///< "convergence", "resolution", ... empty when ok
    std::string error;

    bool operator==(const SweepRecord&) const = default;
};

}  // namespace torus
