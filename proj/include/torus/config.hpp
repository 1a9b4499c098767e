#pragma once

#include "torus/fields.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace torus {

enum class FactorChoice { bump, constant };

struct SweepConfig {
    double period = 1.0;
    int nodes = 128;
    double delta = 0.125;
    std::vector<double> alphas{0.0625, 0.03125};
    std::vector<double> epsilon_ratios{0.5, 0.25, 0.125, 0.0625};
    SpinStructure spin{};
    int cutoff_order = 5;
    /// `constant` forces f = 1 (flat-torus control); witness columns are then NaN.
    FactorChoice factor = FactorChoice::bump;
    double tolerance = 1e-10;
    double kernel_tolerance = 1e-8;
    int max_matvecs = 20000;
    int threads = 1;  ///< 0 means one per hardware thread
    std::uint64_t seed = 1;
    std::string csv_path;
    std::string json_path;
    std::string gnuplot_path;

    bool operator==(const SweepConfig&) const = default;
};

/// Keys accepted by the config file and as --key flags.
const std::vector<std::string>& config_keys();

/// Sets one key from its text value. Lists are comma separated. Throws ConfigurationError on
/// unknown keys or unparsable values.
void apply_setting(SweepConfig& config, std::string_view key, std::string_view value);

/// Text value of one key, in the format apply_setting reads back.
std::string get_setting(const SweepConfig& config, std::string_view key);

/// `key = value` lines; '#' starts a comment, blank lines are skipped.
SweepConfig parse_config(std::string_view text, SweepConfig base = {});
SweepConfig load_config(const std::filesystem::path& path, SweepConfig base = {});

/// Throws ConfigurationError unless n is even and at least 8, every generated pair satisfies
/// eps <= alpha <= delta <= L / 4, and the remaining numeric fields are in range.
void validate(const SweepConfig& config);

std::string_view to_string(FactorChoice factor);

}  // namespace torus
