#include "torus/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace torus {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

struct Fft2d::Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    ~Plans() {
        std::lock_guard lock(planner_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
    }
};

Fft2d::Fft2d(int n) : n_(n), plans_(std::make_unique<Plans>()) {
    if (n <= 0) throw std::invalid_argument("Fft2d: n must be positive");
    std::vector<std::complex<double>> scratch(static_cast<std::size_t>(n) * n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    // Unaligned so the plans can run on arbitrary caller-owned buffers.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard lock(planner_mutex());
    plans_->forward = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, flags);
    plans_->backward = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, flags);
    if (!plans_->forward || !plans_->backward) throw std::runtime_error("Fft2d: FFTW planning failed");
}

Fft2d::~Fft2d() = default;
Fft2d::Fft2d(Fft2d&&) noexcept = default;
Fft2d& Fft2d::operator=(Fft2d&&) noexcept = default;

void Fft2d::forward(std::span<std::complex<double>> data) const {
    if (data.size() != static_cast<std::size_t>(n_) * n_) throw std::invalid_argument("Fft2d: size mismatch");
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plans_->forward, buf, buf);
}

void Fft2d::backward(std::span<std::complex<double>> data) const {
    if (data.size() != static_cast<std::size_t>(n_) * n_) throw std::invalid_argument("Fft2d: size mismatch");
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plans_->backward, buf, buf);
    const double scale = 1.0 / (static_cast<double>(n_) * n_);
    for (auto& z : data) z *= scale;
}

std::vector<double> wavenumbers(int n, double period, double phase) {
    std::vector<double> k(n);
    const double base = 2.0 * std::numbers::pi / period;
    for (int m = 0; m < n; ++m) {
        const int integer = m < n / 2 ? m : m - n;
        k[m] = base * (integer + phase);
    }
    return k;
}

}  // namespace torus
