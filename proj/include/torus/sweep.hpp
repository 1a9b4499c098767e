#pragma once

#include "torus/config.hpp"
#include "torus/record.hpp"

#include <vector>

namespace torus {

/// One record for an (alpha, eps) pair: mu1, lambda1, volume, the witness integrals and the
/// weighted kernel dimension. Solver failures are caught and recorded, never thrown.
SweepRecord run_pair(const SweepConfig& config, double alpha, double epsilon);

/// All alpha x ratio pairs, computed on config.threads workers and sorted by alpha then eps,
/// both descending. Throws ConfigurationError for an invalid config.
std::vector<SweepRecord> run_sweep(const SweepConfig& config);

/// Marks the record failed and sets every numeric column except alpha, eps to NaN.
void mark_failed(SweepRecord& record, std::string kind, std::string message);

}  // namespace torus
