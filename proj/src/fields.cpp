#include "torus/fields.hpp"

#include "torus/errors.hpp"

#include <algorithm>
#include <cmath>

namespace torus {

TorusGrid::TorusGrid(double period, int nodes_per_axis)
    : period_(period), n_(nodes_per_axis), h_(period / nodes_per_axis) {
    if (!(period > 0.0) || !std::isfinite(period))
        throw ConfigurationError("grid period must be positive and finite");
    if (nodes_per_axis < 8)
        throw ConfigurationError("grid needs at least 8 nodes per axis, got " + std::to_string(nodes_per_axis));
    if (nodes_per_axis % 2 != 0)
        throw ConfigurationError("nodes per axis must be even (the Dirac Fourier shift needs a symmetric mode set), got "
                                 + std::to_string(nodes_per_axis));
}

double TorusGrid::distance_to_origin(int i, int j) const noexcept {
    return h_ * std::hypot(static_cast<double>(signed_offset(i)), static_cast<double>(signed_offset(j)));
}

double TorusGrid::distance(int i1, int j1, int i2, int j2) const noexcept {
    return h_ * std::hypot(static_cast<double>(signed_offset(i1 - i2)), static_cast<double>(signed_offset(j1 - j2)));
}

TorusGrid make_grid(double period, int nodes_per_axis) { return TorusGrid(period, nodes_per_axis); }

ScalarField::ScalarField(const TorusGrid& grid, double value) : grid_(grid), values_(grid.size(), value) {}

ScalarField::ScalarField(const TorusGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw PreconditionError("scalar field size does not match its grid");
}

bool ScalarField::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double max_abs_difference(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid() == b.grid())) throw PreconditionError("fields live on different grids");
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

std::vector<SpinStructure> all_spin_structures() {
    return {{false, false}, {true, false}, {false, true}, {true, true}};
}

std::string to_string(SpinStructure spin) {
    auto one = [](bool anti) { return anti ? std::string("1/2") : std::string("0"); };
    return "(" + one(spin.antiperiodic_x) + "," + one(spin.antiperiodic_y) + ")";
}

SpinStructure parse_spin_structure(const std::string& text) {
    std::string cleaned;
    for (char c : text)
        if (c != '(' && c != ')' && c != ' ') cleaned += c;
    const auto comma = cleaned.find(',');
    if (comma == std::string::npos) throw ConfigurationError("spin structure must look like '0,1/2', got '" + text + "'");
    auto parse_one = [&](const std::string& token) {
        if (token == "0" || token == "0.0" || token == "periodic") return false;
        if (token == "1/2" || token == "0.5" || token == "antiperiodic") return true;
        throw ConfigurationError("spin phase must be 0 or 1/2, got '" + token + "'");
    };
    return {parse_one(cleaned.substr(0, comma)), parse_one(cleaned.substr(comma + 1))};
}

SpinorField::SpinorField(const TorusGrid& grid, SpinStructure spin)
    : grid_(grid), spin_(spin), upper_(grid.size()), lower_(grid.size()) {}

bool SpinorField::all_finite() const noexcept {
    auto finite = [](const complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
    return std::all_of(upper_.begin(), upper_.end(), finite) && std::all_of(lower_.begin(), lower_.end(), finite);
}

std::vector<complex> SpinorField::flatten() const {
    std::vector<complex> out;
    out.reserve(2 * upper_.size());
    out.insert(out.end(), upper_.begin(), upper_.end());
    out.insert(out.end(), lower_.begin(), lower_.end());
    return out;
}

SpinorField SpinorField::unflatten(const TorusGrid& grid, SpinStructure spin, std::span<const complex> data) {
    SpinorField out(grid, spin);
    const std::size_t m = grid.size();
    if (data.size() != 2 * m) throw PreconditionError("spinor data has the wrong length");
    std::copy(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(m), out.upper_.begin());
    std::copy(data.begin() + static_cast<std::ptrdiff_t>(m), data.end(), out.lower_.begin());
    return out;
}

}  // namespace torus
