#include "torus/config.hpp"

#include "torus/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace torus {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
    throw ConfigurationError("cannot parse value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

double parse_double(std::string_view key, std::string_view text) {
    const std::string t = trim(text);
    // accept simple fractions like 1/8
    if (const auto slash = t.find('/'); slash != std::string::npos)
        return parse_double(key, t.substr(0, slash)) / parse_double(key, t.substr(slash + 1));
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) bad_value(key, text);
    return v;
}

template <class Int>
Int parse_int(std::string_view key, std::string_view text) {
    const std::string t = trim(text);
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) bad_value(key, text);
    return v;
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
    std::vector<double> out;
    std::string item;
    std::istringstream in{std::string(text)};
    while (std::getline(in, item, ',')) out.push_back(parse_double(key, item));
    if (out.empty()) bad_value(key, text);
    return out;
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_list(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t k = 0; k < xs.size(); ++k) out += (k ? "," : "") + format_double(xs[k]);
    return out;
}

struct Accessor {
    std::function<void(SweepConfig&, std::string_view)> set;
    std::function<std::string(const SweepConfig&)> get;
};

const std::map<std::string, Accessor, std::less<>>& accessors() {
    static const std::map<std::string, Accessor, std::less<>> table = [] {
        std::map<std::string, Accessor, std::less<>> t;
        auto real = [&t](const std::string& key, double SweepConfig::*m) {
            t[key] = {[key, m](SweepConfig& c, std::string_view v) { c.*m = parse_double(key, v); },
                      [m](const SweepConfig& c) { return format_double(c.*m); }};
        };
        auto integer = [&t](const std::string& key, int SweepConfig::*m) {
            t[key] = {[key, m](SweepConfig& c, std::string_view v) { c.*m = parse_int<int>(key, v); },
                      [m](const SweepConfig& c) { return std::to_string(c.*m); }};
        };
        auto list = [&t](const std::string& key, std::vector<double> SweepConfig::*m) {
            t[key] = {[key, m](SweepConfig& c, std::string_view v) { c.*m = parse_list(key, v); },
                      [m](const SweepConfig& c) { return format_list(c.*m); }};
        };
        auto text = [&t](const std::string& key, std::string SweepConfig::*m) {
            t[key] = {[m](SweepConfig& c, std::string_view v) { c.*m = trim(v); },
                      [m](const SweepConfig& c) { return c.*m; }};
        };
        real("period", &SweepConfig::period);
        integer("nodes", &SweepConfig::nodes);
        real("delta", &SweepConfig::delta);
        list("alphas", &SweepConfig::alphas);
        list("epsilon_ratios", &SweepConfig::epsilon_ratios);
        t["spin"] = {[](SweepConfig& c, std::string_view v) {
                         try {
                             c.spin = parse_spin_structure(trim(v));
                         } catch (const std::exception&) {
                             bad_value("spin", v);
                         }
                     },
                     [](const SweepConfig& c) { return to_string(c.spin); }};
        integer("cutoff_order", &SweepConfig::cutoff_order);
        t["factor"] = {[](SweepConfig& c, std::string_view v) {
                           const std::string s = trim(v);
                           if (s == "bump") c.factor = FactorChoice::bump;
                           else if (s == "constant") c.factor = FactorChoice::constant;
                           else bad_value("factor", v);
                       },
                       [](const SweepConfig& c) { return std::string(to_string(c.factor)); }};
        real("tolerance", &SweepConfig::tolerance);
        real("kernel_tolerance", &SweepConfig::kernel_tolerance);
        integer("max_matvecs", &SweepConfig::max_matvecs);
        integer("threads", &SweepConfig::threads);
        t["seed"] = {[](SweepConfig& c, std::string_view v) { c.seed = parse_int<std::uint64_t>("seed", v); },
                     [](const SweepConfig& c) { return std::to_string(c.seed); }};
        text("csv", &SweepConfig::csv_path);
        text("json", &SweepConfig::json_path);
        text("gnuplot", &SweepConfig::gnuplot_path);
        return t;
    }();
    return table;
}

const Accessor& accessor(std::string_view key) {
    const auto it = accessors().find(key);
    if (it == accessors().end()) throw ConfigurationError("unknown config key '" + std::string(key) + "'");
    return it->second;
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, _] : accessors()) k.push_back(name);
        return k;
    }();
    return keys;
}

void apply_setting(SweepConfig& config, std::string_view key, std::string_view value) {
    accessor(key).set(config, value);
}

std::string get_setting(const SweepConfig& config, std::string_view key) { return accessor(key).get(config); }

SweepConfig parse_config(std::string_view text, SweepConfig base) {
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigurationError("config line " + std::to_string(number) + " is not 'key = value'");
        apply_setting(base, trim(std::string_view(line).substr(0, eq)), std::string_view(line).substr(eq + 1));
    }
    return base;
}

SweepConfig load_config(const std::filesystem::path& path, SweepConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot read config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), std::move(base));
}

void validate(const SweepConfig& c) {
    auto fail = [](const std::string& what) { throw ConfigurationError(what); };
    if (!(c.period > 0.0) || !std::isfinite(c.period)) fail("period must be positive");
    if (c.nodes < 8 || c.nodes % 2 != 0) fail("nodes must be even and at least 8");
    if (c.alphas.empty() || c.epsilon_ratios.empty()) fail("alphas and epsilon_ratios must be nonempty");
    if (c.cutoff_order < 3 || c.cutoff_order > 15 || c.cutoff_order % 2 == 0)
        fail("cutoff_order must be odd in [3, 15]");
    if (!(c.tolerance > 0.0)) fail("tolerance must be positive");
    if (!(c.kernel_tolerance > 0.0)) fail("kernel_tolerance must be positive");
    if (c.max_matvecs < 1) fail("max_matvecs must be positive");
    if (c.threads < 0) fail("threads must be >= 0");
    if (!(c.delta > 0.0) || !(c.delta <= c.period / 4)) {
        std::ostringstream m;
        m << "delta=" << c.delta << " violates eps <= alpha <= delta <= period/4 (period=" << c.period << ")";
        fail(m.str());
    }
    for (double a : c.alphas) {
        for (double r : c.epsilon_ratios) {
            const double eps = a * r;
            if (!(eps > 0.0) || !(eps <= a) || !(a <= c.delta)) {
                std::ostringstream m;
                m << "pair (alpha=" << a << ", eps=" << eps << ") violates eps <= alpha <= delta <= period/4 (delta="
                  << c.delta << ", period=" << c.period << ")";
                fail(m.str());
            }
        }
    }
}

std::string_view to_string(FactorChoice factor) { return factor == FactorChoice::bump ? "bump" : "constant"; }

}  // namespace torus
