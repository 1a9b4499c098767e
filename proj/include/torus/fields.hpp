#pragma once

#include "torus/grid.hpp"

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace torus {

using complex = std::complex<double>;

/// Real values at every node of a grid, stored row-major: flat index i * n + j.
class ScalarField {
public:
    explicit ScalarField(const TorusGrid& grid, double value = 0.0);
    ScalarField(const TorusGrid& grid, std::vector<double> values);

    const TorusGrid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    double& operator[](std::size_t k) noexcept { return values_[k]; }
    double operator[](std::size_t k) const noexcept { return values_[k]; }
    double& operator()(int i, int j) noexcept { return values_[grid_.index(i, j)]; }
    double operator()(int i, int j) const noexcept { return values_[grid_.index(i, j)]; }

    bool all_finite() const noexcept;

private:
    TorusGrid grid_;
    std::vector<double> values_;
};

/// Sample fn(x, y) at every node, (x, y) the minimum-image offset from the origin.
template <class Fn>
ScalarField sample(const TorusGrid& grid, Fn&& fn) {
    ScalarField out(grid);
    const int n = grid.nodes();
    for (int i = 0; i < n; ++i) {
        const double x = grid.coordinate(i);
        for (int j = 0; j < n; ++j) out(i, j) = fn(x, grid.coordinate(j));
    }
    return out;
}

double max_abs_difference(const ScalarField& a, const ScalarField& b);

/// One of the four spin structures of the torus, realised as a periodic (phase 0)
/// or antiperiodic (phase 1/2) boundary condition per axis.
struct SpinStructure {
    bool antiperiodic_x = false;
    bool antiperiodic_y = false;

    double phase_x() const noexcept { return antiperiodic_x ? 0.5 : 0.0; }
    double phase_y() const noexcept { return antiperiodic_y ? 0.5 : 0.0; }
    bool is_trivial() const noexcept { return !antiperiodic_x && !antiperiodic_y; }

    static constexpr SpinStructure trivial() noexcept { return {false, false}; }

    bool operator==(const SpinStructure&) const noexcept = default;
};

std::vector<SpinStructure> all_spin_structures();
std::string to_string(SpinStructure spin);
/// Accepts "0,0", "1/2,0", "0.5,0.5", ... Throws ConfigurationError otherwise.
SpinStructure parse_spin_structure(const std::string& text);

/// Two complex components per node. Fields are tagged with the spin structure whose
/// boundary conditions they obey; operators reject fields of a different structure.
class SpinorField {
public:
    SpinorField(const TorusGrid& grid, SpinStructure spin);

    const TorusGrid& grid() const noexcept { return grid_; }
    SpinStructure spin() const noexcept { return spin_; }
    std::size_t nodes() const noexcept { return upper_.size(); }

    std::span<complex> component(int c) noexcept { return c == 0 ? std::span<complex>(upper_) : lower_; }
    std::span<const complex> component(int c) const noexcept {
        return c == 0 ? std::span<const complex>(upper_) : lower_;
    }
    std::span<complex> upper() noexcept { return upper_; }
    std::span<complex> lower() noexcept { return lower_; }
    std::span<const complex> upper() const noexcept { return upper_; }
    std::span<const complex> lower() const noexcept { return lower_; }

    /// |phi|^2 at flat node k.
    double norm2_at(std::size_t k) const noexcept { return std::norm(upper_[k]) + std::norm(lower_[k]); }
    /// <a, b> at node k, linear in the first slot.
    static complex inner_at(const SpinorField& a, const SpinorField& b, std::size_t k) noexcept {
        return a.upper_[k] * std::conj(b.upper_[k]) + a.lower_[k] * std::conj(b.lower_[k]);
    }

    bool all_finite() const noexcept;

    /// Packs (upper, lower) into one vector of length 2 n^2 and back.
    std::vector<complex> flatten() const;
    static SpinorField unflatten(const TorusGrid& grid, SpinStructure spin, std::span<const complex> data);

private:
    TorusGrid grid_;
    SpinStructure spin_;
    std::vector<complex> upper_;
    std::vector<complex> lower_;
};

}  // namespace torus
