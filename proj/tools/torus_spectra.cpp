#include "torus/check.hpp"
#include "torus/config.hpp"
#include "torus/errors.hpp"
#include "torus/report.hpp"
#include "torus/sweep.hpp"
#include "torus/witness.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <map>
#include <optional>

using namespace torus;

namespace {

enum Exit { ok = 0, check_failed = 1, configuration = 2, nonconvergence = 3 };

// --config FILE plus one --<key> flag per config key; flags are applied after the file.
struct ConfigFlags {
    std::string file;
    std::map<std::string, std::string> values;

    void attach(CLI::App* app) {
        app->add_option("--config", file, "key = value config file");
        for (const auto& key : config_keys()) app->add_option("--" + key, values[key], "override '" + key + "'");
    }

    SweepConfig resolve(const CLI::App* app) const {
        SweepConfig c = file.empty() ? SweepConfig{} : load_config(file);
        for (const auto& [key, value] : values)
            if (app->count("--" + key) > 0) apply_setting(c, key, value);
        return c;
    }
};

// One (alpha, eps) pair, validated against the config's chain.
std::pair<double, double> single_pair(SweepConfig& c, std::optional<double> alpha, std::optional<double> eps) {
    const double a = alpha.value_or(c.alphas.front());
    const double e = eps.value_or(a * c.epsilon_ratios.front());
    c.alphas = {a};
    c.epsilon_ratios = {e / a};
    validate(c);
    return {a, e};
}

int run_sweep_command(const SweepConfig& c) {
    const auto records = run_sweep(c);
    bool wrote = false;
    for (auto [path, format] : {std::pair{c.csv_path, ReportFormat::csv}, std::pair{c.json_path, ReportFormat::json},
                                std::pair{c.gnuplot_path, ReportFormat::gnuplot}}) {
        if (path.empty()) continue;
        emit_report(records, c, format, path);
        wrote = true;
    }
    if (!wrote) write_csv(records, std::cout);
    int failed = 0;
    for (const auto& r : records) {
        if (r.ok) continue;
        ++failed;
        std::cerr << "record alpha=" << r.alpha << " eps=" << r.epsilon << " failed (" << r.error_kind
                  << "): " << r.error << '\n';
    }
    return failed ? nonconvergence : ok;
}

int run_spectrum_command(SweepConfig c, std::optional<double> alpha, std::optional<double> eps, int count,
                         const std::string& which) {
    const auto [a, e] = single_pair(c, alpha, eps);
    const TorusGrid grid(c.period, c.nodes);
    const ConformalFactor f = c.factor == FactorChoice::bump ? bump_factor(grid, a, e) : constant_factor(grid, 1.0);
    std::cout << std::setprecision(17);
    if (which == "laplace" || which == "both") {
        SolveOptions o;
        o.tolerance = c.tolerance;
        o.seed = c.seed;
        o.max_matvecs = c.max_matvecs;
        for (double mu : weighted_eigenvalues(LaplaceOperator(grid), f, count, o)) std::cout << "mu " << mu << '\n';
    }
    if (which == "dirac" || which == "both") {
        DiracSolveOptions o;
        o.tolerance = c.tolerance;
        o.seed = c.seed;
        o.max_matvecs = c.max_matvecs;
        o.kernel_tolerance = c.kernel_tolerance;
        const DiracOperator op(grid, c.spin);
        std::cout << "kernel_dim " << kernel_dimension(op, f, c.kernel_tolerance, o) << '\n';
        for (double l : weighted_dirac_eigenvalues(op, f, count, o)) std::cout << "lambda " << l << '\n';
    }
    return ok;
}

int run_witness_command(SweepConfig c, std::optional<double> alpha, std::optional<double> eps) {
    const auto [a, e] = single_pair(c, alpha, eps);
    const TorusGrid grid(c.period, c.nodes);
    const WitnessBound w = witness_bound(grid, CutoffProfile{c.delta, c.cutoff_order}, bump_factor(grid, a, e), e);
    std::cout << std::setprecision(17) << "alpha " << a << "\nepsilon " << e << "\nI1 " << w.I1 << "\nI2 " << w.I2
              << "\ndenominator " << w.denominator << "\nquotient " << w.quotient << "\nvolume " << w.volume
              << "\nbound " << w.product << '\n';
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted Laplace and Dirac spectra on the flat 2-torus"};
    app.require_subcommand(1);

    ConfigFlags sweep_flags, spectrum_flags, witness_flags;
    auto* sweep = app.add_subcommand("sweep", "run the (alpha, eps) sweep and write reports");
    sweep_flags.attach(sweep);

    CheckConfig check_config;
    std::string gamma = "standard";
    auto* check = app.add_subcommand("check", "run the invariant suites");
    check->add_option("--tolerance", check_config.tolerance, "solver residual tolerance");
    check->add_option("--seed", check_config.seed, "random seed");
    check->add_option("--gamma", gamma, "Clifford convention (negative control: corrupted)")
        ->check(CLI::IsMember({"standard", "corrupted"}));
    check->add_option("--suite", check_config.suites, "restrict to these suites");

    std::optional<double> alpha, eps;
    int count = 6;
    std::string which = "both";
    auto* spectrum = app.add_subcommand("spectrum", "first weighted eigenvalues for one (alpha, eps)");
    spectrum_flags.attach(spectrum);
    spectrum->add_option("--alpha", alpha, "bump radius (default: first of alphas)");
    spectrum->add_option("--epsilon", eps, "bump scale (default: alpha times first ratio)");
    spectrum->add_option("--count", count, "number of eigenvalues")->check(CLI::PositiveNumber);
    spectrum->add_option("--operator", which, "laplace, dirac or both")->check(CLI::IsMember({"laplace", "dirac", "both"}));

    auto* witness = app.add_subcommand("witness", "witness integrals and bound for one (alpha, eps)");
    witness_flags.attach(witness);
    witness->add_option("--alpha", alpha, "bump radius (default: first of alphas)");
    witness->add_option("--epsilon", eps, "bump scale (default: alpha times first ratio)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : configuration;
    }

    try {
        if (*sweep) return run_sweep_command(sweep_flags.resolve(sweep));
        if (*check) {
            check_config.gamma = gamma == "corrupted" ? GammaConvention::corrupted : GammaConvention::standard;
            return check_command(check_config, std::cout);
        }
        if (*spectrum) return run_spectrum_command(spectrum_flags.resolve(spectrum), alpha, eps, count, which);
        if (*witness) return run_witness_command(witness_flags.resolve(witness), alpha, eps);
    } catch (const ConfigurationError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return configuration;
    } catch (const PreconditionError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return configuration;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return configuration;
    } catch (const ConvergenceError& e) {
        std::cerr << "solver did not converge: " << e.what() << '\n';
        return nonconvergence;
    } catch (const ResolutionError& e) {
        std::cerr << "solver failed: " << e.what() << '\n';
        return nonconvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return check_failed;
    }
    return ok;
}
