#pragma once

#include "torus/dirac.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace torus {

struct CheckConfig {
    double tolerance = 1e-10;  ///< solver residual tolerance
    std::uint64_t seed = 1;
    GammaConvention gamma = GammaConvention::standard;  ///< corrupted: negative control
    std::vector<std::string> suites;                    ///< empty runs every suite
};

/// Relative residuals below this cannot be certified in double precision.
inline constexpr double tolerance_floor = 1e-13;

enum class SuiteStatus { passed, failed, tolerance_infeasible };
std::string_view to_string(SuiteStatus status);

struct SuiteResult {
    std::string name;
    SuiteStatus status;
    std::string details;
};

struct CheckReport {
    std::vector<SuiteResult> suites;
    /// 0 all passed, 1 any failure, 2 tolerance-infeasible with no failure.
    int exit_code() const noexcept;
};

/// Suite names in execution order.
const std::vector<std::string>& check_suites();

/// Runs the invariant suites (flat oracle, symmetry, identities, covariance, imaginarity,
/// oracle equivalence). Throws ConfigurationError for unknown suite names.
CheckReport run_checks(const CheckConfig& config);

/// run_checks plus one line per suite on `out`; returns the exit code.
int check_command(const CheckConfig& config, std::ostream& out);

}  // namespace torus
