#pragma once

#include <array>
#include <cstddef>

namespace torus {

/// Uniform n x n sampling of the flat square torus R^2 / (L Z)^2.
///
/// Node (i, j) sits at (i h, j h) with h = L / n. The distinguished point p is
/// node (0, 0); positions are reported as minimum-image offsets from p, so the
/// coordinate of axis index i lies in [-L/2, L/2).
class TorusGrid {
public:
    /// Throws ConfigurationError unless period > 0 and nodes_per_axis is even and >= 8.
    TorusGrid(double period, int nodes_per_axis);

    double period() const noexcept { return period_; }
    int nodes() const noexcept { return n_; }
    double spacing() const noexcept { return h_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_; }
    std::array<int, 2> origin_index() const noexcept { return {0, 0}; }

    /// Flat index with periodic wrap in both axes.
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(wrap(i)) * n_ + static_cast<std::size_t>(wrap(j));
    }
    int wrap(int i) const noexcept {
        const int r = i % n_;
        return r < 0 ? r + n_ : r;
    }

    /// Signed minimum-image integer offset of axis index i from the origin, in [-n/2, n/2).
    int signed_offset(int i) const noexcept {
        const int w = wrap(i);
        return w < n_ / 2 ? w : w - n_;
    }
    double coordinate(int i) const noexcept { return signed_offset(i) * h_; }
    std::array<double, 2> position(int i, int j) const noexcept { return {coordinate(i), coordinate(j)}; }

    double distance_to_origin(int i, int j) const noexcept;
    double distance(int i1, int j1, int i2, int j2) const noexcept;

    bool operator==(const TorusGrid& other) const noexcept {
        return n_ == other.n_ && period_ == other.period_;
    }

private:
    double period_;
    int n_;
    double h_;
};

TorusGrid make_grid(double period, int nodes_per_axis);

}  // namespace torus
