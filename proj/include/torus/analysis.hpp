#pragma once

#include "torus/dirac.hpp"
#include "torus/laplace.hpp"
#include "torus/record.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace torus {

struct ContinuityPoint {
    double width;
    double value;             ///< mu1 or lambda1 of the mollified factor
    double gap;               ///< |value - reference|
    double uniform_distance;  ///< max |f_w - f|
    std::optional<int> kernel_dim;  ///< Dirac only
};

struct ContinuityReport {
    double reference;  ///< eigenvalue of the unmollified factor
    std::optional<int> reference_kernel_dim;
    std::vector<ContinuityPoint> points;

    /// Gaps strictly decreasing along the widths.
    bool gaps_decreasing() const noexcept;
    /// max over points of gap / uniform_distance (0 when the distance vanishes).
    double max_gap_ratio() const noexcept;
};

/// mu1 of the factor mollified at each width. Widths must be positive and strictly decreasing;
/// PreconditionError otherwise.
ContinuityReport continuity_experiment_laplace(const ConformalFactor& factor, std::span<const double> widths,
                                               const SolveOptions& options = {});

/// lambda1 and the weighted kernel dimension at each width.
ContinuityReport continuity_experiment_dirac(const ConformalFactor& factor, std::span<const double> widths,
                                             SpinStructure spin, const DiracSolveOptions& options = {});

/// Integral of (Delta u) u v^2 against the integral of |grad(uv)|^2 - u^2 |grad v|^2, both by
/// spectral derivatives; returns |LHS - RHS| / (1 + |LHS|). Exact quadrature needs u, v of
/// degree below n / 4.
double check_integration_identity(const ScalarField& u, const ScalarField& v);

/// Relative nodal leakage tolerated outside B_p(alpha).
inline constexpr double support_tolerance = 1e-10;

/// eps^2 / 8 integral |grad u|^2 + (integral u f^2)^2 / (pi eps^2) - integral u^2 f^2 with
/// f = f_{alpha, eps}. u must vanish outside B_p(alpha); PreconditionError otherwise.
double check_poincare_bump(const ScalarField& u, double alpha, double epsilon);

struct LiminfRow {
    double epsilon;
    double eps2_mu1;
    double mu1_vol_over_8pi;
    double volume_over_pi_eps2;
    double consistency;  ///< |mu1 Vol / (eps^2 mu1 pi) - Vol / (pi eps^2)| relative
};

struct LiminfReport {
    double alpha;
    std::vector<LiminfRow> rows;
    bool tail_in_band;  ///< eps^2 mu1 at the last record within [6.4, 8.4]
    bool increasing;    ///< eps^2 mu1 nondecreasing along the records up to the noise band
    bool passed() const noexcept { return tail_in_band && increasing; }
    std::string diagnostics;
};

/// Default relative noise band for the monotone-trend check.
inline constexpr double trend_noise = 0.02;

/// Records must be ok, share alpha and have strictly decreasing eps (PreconditionError).
LiminfReport liminf_product_check(std::span<const SweepRecord> records, double noise = trend_noise);

}  // namespace torus
