#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace torus {

/// In-place 2D complex FFT on n x n row-major arrays.
///
/// Plans are created once (under a process-wide planner lock, FFTW's planner is not
/// reentrant) and executed on caller buffers, so one instance may be shared by threads.
class Fft2d {
public:
    explicit Fft2d(int n);
    ~Fft2d();
    Fft2d(const Fft2d&) = delete;
    Fft2d& operator=(const Fft2d&) = delete;
    Fft2d(Fft2d&&) noexcept;
    Fft2d& operator=(Fft2d&&) noexcept;

    int n() const noexcept { return n_; }

    /// Unnormalised forward transform, exponent sign -1.
    void forward(std::span<std::complex<double>> data) const;
    /// Inverse transform including the 1 / n^2 normalisation.
    void backward(std::span<std::complex<double>> data) const;

private:
    struct Plans;
    int n_;
    std::unique_ptr<Plans> plans_;
};

/// Angular wavenumbers 2 pi (k + phase) / L for FFT index m, with k = m for m < n/2
/// and k = m - n otherwise (the Nyquist index maps to k = -n/2).
std::vector<double> wavenumbers(int n, double period, double phase = 0.0);

}  // namespace torus
