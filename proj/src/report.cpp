#include "torus/report.hpp"

#include "torus/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#ifndef TORUS_SPECTRA_VERSION
#define TORUS_SPECTRA_VERSION "0.0.0"
#endif

namespace torus {

namespace {

using nlohmann::json;

struct Column {
    const char* name;
    double SweepRecord::*member;
};

// CSV order; kernel_dim is handled separately because it is an integer.
constexpr Column leading[] = {
    {"alpha", &SweepRecord::alpha},           {"epsilon", &SweepRecord::epsilon},
    {"mu1", &SweepRecord::mu1},               {"lambda1", &SweepRecord::lambda1},
    {"volume", &SweepRecord::volume},         {"mu1_vol", &SweepRecord::mu1_vol},
    {"lambda1sq_vol", &SweepRecord::lambda1sq_vol}, {"ratio", &SweepRecord::ratio},
    {"witness_bound", &SweepRecord::witness_bound}, {"I1", &SweepRecord::I1},
    {"I2", &SweepRecord::I2},                 {"denominator", &SweepRecord::denominator},
};
constexpr Column trailing[] = {{"residual_mu", &SweepRecord::residual_mu},
                               {"residual_lambda", &SweepRecord::residual_lambda}};

std::string number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_row(const SweepRecord& r, std::ostream& out, char sep) {
    for (const auto& c : leading) out << number(r.*c.member) << sep;
    out << r.kernel_dim;
    for (const auto& c : trailing) out << sep << number(r.*c.member);
    out << '\n';
}

json real(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

double read_real(const json& j, const char* key) {
    const json& v = j.at(key);
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

json record_to_json(const SweepRecord& r) {
    json j;
    for (const auto& c : leading) j[c.name] = real(r.*c.member);
    j["kernel_dim"] = r.kernel_dim;
    for (const auto& c : trailing) j[c.name] = real(r.*c.member);
    j["wall_time"] = r.wall_time;
    j["ok"] = r.ok;
    j["error_kind"] = r.error_kind;
    j["error"] = r.error;
    return j;
}

SweepRecord record_from_json(const json& j) {
    SweepRecord r;
    for (const auto& c : leading) r.*c.member = read_real(j, c.name);
    r.kernel_dim = j.at("kernel_dim").get<int>();
    for (const auto& c : trailing) r.*c.member = read_real(j, c.name);
    r.wall_time = read_real(j, "wall_time");
    r.ok = j.at("ok").get<bool>();
    r.error_kind = j.at("error_kind").get<std::string>();
    r.error = j.at("error").get<std::string>();
    return r;
}

bool same_double(double a, double b) noexcept { return a == b || (std::isnan(a) && std::isnan(b)); }

}  // namespace

std::string_view software_version() noexcept { return TORUS_SPECTRA_VERSION; }

std::string_view csv_header() noexcept {
    return "alpha,epsilon,mu1,lambda1,volume,mu1_vol,lambda1sq_vol,ratio,witness_bound,I1,I2,denominator,kernel_dim,"
           "residual_mu,residual_lambda";
}

ReportFormat parse_report_format(std::string_view tag) {
    if (tag == "csv") return ReportFormat::csv;
    if (tag == "json") return ReportFormat::json;
    if (tag == "gnuplot") return ReportFormat::gnuplot;
    throw ConfigurationError("unknown report format '" + std::string(tag) + "' (csv, json, gnuplot)");
}

void write_csv(std::span<const SweepRecord> records, std::ostream& out) {
    out << csv_header() << '\n';
    for (const auto& r : records) write_row(r, out, ',');
}

void write_json(std::span<const SweepRecord> records, const SweepConfig& config, std::ostream& out) {
    json doc;
    doc["software"] = {{"name", "torus-spectra"}, {"version", std::string(software_version())}};
    json cfg = json::object();
    for (const auto& key : config_keys()) cfg[key] = get_setting(config, key);
    doc["config"] = cfg;
    doc["records"] = json::array();
    for (const auto& r : records) doc["records"].push_back(record_to_json(r));
    out << doc.dump(2) << '\n';
}

void write_gnuplot(std::span<const SweepRecord> records, std::ostream& out) {
    std::string header(csv_header());
    for (char& c : header)
        if (c == ',') c = ' ';
    for (std::size_t k = 0; k < records.size(); ++k) {
        if (k == 0 || records[k].alpha != records[k - 1].alpha) {
            if (k > 0) out << "\n\n";
            out << "# alpha = " << number(records[k].alpha) << '\n' << "# " << header << '\n';
        }
        write_row(records[k], out, ' ');
    }
}

ParsedReport parse_json_report(std::string_view text) {
    try {
        const json doc = json::parse(text);
        ParsedReport out;
        for (const auto& [key, value] : doc.at("config").items()) apply_setting(out.config, key, value.get<std::string>());
        for (const auto& r : doc.at("records")) out.records.push_back(record_from_json(r));
        return out;
    } catch (const json::exception& e) {
        throw ConfigurationError(std::string("malformed JSON report: ") + e.what());
    }
}

void emit_report(std::span<const SweepRecord> records, const SweepConfig& config, ReportFormat format,
                 const std::filesystem::path& path) {
    if (records.empty()) throw PreconditionError("refusing to write an empty report");
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    switch (format) {
        case ReportFormat::csv: write_csv(records, out); break;
        case ReportFormat::json: write_json(records, config, out); break;
        case ReportFormat::gnuplot: write_gnuplot(records, out); break;
    }
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

bool same_record(const SweepRecord& a, const SweepRecord& b) noexcept {
    for (const auto& c : leading)
        if (!same_double(a.*c.member, b.*c.member)) return false;
    for (const auto& c : trailing)
        if (!same_double(a.*c.member, b.*c.member)) return false;
    return a.kernel_dim == b.kernel_dim && same_double(a.wall_time, b.wall_time) && a.ok == b.ok &&
           a.error_kind == b.error_kind && a.error == b.error;
}

}  // namespace torus
