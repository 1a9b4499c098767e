#pragma once

#include "torus/config.hpp"
#include "torus/record.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace torus {

/// Version string written into JSON reports.
std::string_view software_version() noexcept;

/// The fixed CSV header (15 columns).
std::string_view csv_header() noexcept;

enum class ReportFormat { csv, json, gnuplot };
ReportFormat parse_report_format(std::string_view tag);

void write_csv(std::span<const SweepRecord> records, std::ostream& out);
/// {"software": {...}, "config": {...}, "records": [...]}; NaN columns become null.
void write_json(std::span<const SweepRecord> records, const SweepConfig& config, std::ostream& out);
/// One whitespace-separated block per alpha, blocks separated by two blank lines.
void write_gnuplot(std::span<const SweepRecord> records, std::ostream& out);

struct ParsedReport {
    SweepConfig config;
    std::vector<SweepRecord> records;
};
/// Inverse of write_json. Throws ConfigurationError on malformed input.
ParsedReport parse_json_report(std::string_view text);

/// Writes the records to `path` in `format`. Throws PreconditionError for empty records and
/// IoError if the file cannot be written.
void emit_report(std::span<const SweepRecord> records, const SweepConfig& config, ReportFormat format,
                 const std::filesystem::path& path);

/// Equality treating NaN as equal to NaN in every numeric column.
bool same_record(const SweepRecord& a, const SweepRecord& b) noexcept;

}  // namespace torus
