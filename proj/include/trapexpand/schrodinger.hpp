#pragma once

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "trapexpand/synthesis.hpp"

namespace trapexpand {

/// Uniform spatial grid, symmetric about 0, with a power-of-two point count
/// for the FFT-based propagator. Units are hbar = m = omega0 = 1.
struct SpatialGrid {
    int n_points;
    double x_min;
    double x_max;

    SpatialGrid(int n, double half_span)
        : n_points(n), x_min(-half_span), x_max(half_span) {
        if (n < 4 || (n & (n - 1)) != 0) {
            throw std::invalid_argument("SpatialGrid: n_points must be a power of two >= 4");
        }
        if (!(half_span > 0.0)) throw std::invalid_argument("SpatialGrid: span must be positive");
    }

    double dx() const { return (x_max - x_min) / n_points; }
    double x(int i) const { return x_min + i * dx(); }
    /// FFT wavenumber for bin i (standard positive-then-negative ordering).
    double k(int i) const {
        const double dk = 2.0 * M_PI / (x_max - x_min);
        return (i <= n_points / 2 ? i : i - n_points) * dk;
    }
    bool operator==(const SpatialGrid&) const = default;
};

/// Complex wavefunction on a grid at rescaled time t.
struct WaveState {
    SpatialGrid grid;
    std::vector<std::complex<double>> amplitudes;
    double t = 0.0;

    double norm_sq() const {
        double s = 0.0;
        for (const auto& a : amplitudes) s += std::norm(a);
        return s * grid.dx();
    }
};

namespace detail {

inline void normalize(WaveState& psi) {
    const double n = std::sqrt(psi.norm_sq());
    if (!(n > 0.0)) throw std::runtime_error("normalize: zero wavefunction");
    for (auto& a : psi.amplitudes) a /= n;
}

inline void require_same_grid(const WaveState& a, const WaveState& b, const char* who) {
    if (!(a.grid == b.grid)) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

}  // namespace detail

/// Harmonic-oscillator eigenstate n of frequency omega, via the Hermite
/// three-term recurrence, normalized on the grid.
inline WaveState eigenstate(int n, double omega, const SpatialGrid& grid) {
    if (!(omega > 0.0)) throw std::invalid_argument("eigenstate: omega must be positive");
    if (n < 0) throw std::invalid_argument("eigenstate: n must be nonnegative");
    if (0.5 * omega * grid.x_max * grid.x_max < 27.6) {  // exp(-27.6) ~ 1e-12
        throw std::invalid_argument("eigenstate: grid span too small for the Gaussian tail");
    }

    WaveState psi{grid, std::vector<std::complex<double>>(grid.n_points), 0.0};
    for (int i = 0; i < grid.n_points; ++i) {
        const double xi = std::sqrt(omega) * grid.x(i);
        double h_prev = 0.0, h = 1.0;
        for (int m = 0; m < n; ++m) {
            const double h_next = 2.0 * xi * h - 2.0 * m * h_prev;
            h_prev = h;
            h = h_next;
        }
        psi.amplitudes[i] = h * std::exp(-0.5 * xi * xi);
    }
    detail::normalize(psi);
    return psi;
}

/// Gaussian ground state of frequency omega.
inline WaveState ground_state(double omega, const SpatialGrid& grid) {
    return eigenstate(0, omega, grid);
}

/// Ground-state wavefunction along the trap-width trajectory: the static
/// omega0 = 1 Gaussian dilated by b with quadratic phase bdot/(2b) x^2. At
/// b = gamma, bdot = 0 this equals ground_state(1/gamma^2) up to global phase.
inline WaveState scaling_solution(double b, double bdot, const SpatialGrid& grid) {
    if (!(b > 0.0)) throw std::invalid_argument("scaling_solution: b must be positive");
    WaveState psi{grid, std::vector<std::complex<double>>(grid.n_points), 0.0};
    for (int i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        const std::complex<double> phase{0.0, bdot * x * x / (2.0 * b)};
        psi.amplitudes[i] = std::exp(-x * x / (2.0 * b * b)) * std::exp(phase) / std::sqrt(b);
    }
    detail::normalize(psi);
    return psi;
}

/// Squared overlap |<a|b>|^2; insensitive to global phase.
inline double fidelity(const WaveState& a, const WaveState& b) {
    detail::require_same_grid(a, b, "fidelity");
    std::complex<double> overlap{0.0, 0.0};
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i) {
        overlap += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    }
    overlap *= a.grid.dx();
    return std::norm(overlap);
}

/// Strang split-operator propagation through a piecewise-constant schedule:
/// per step, half potential kick exp(-i u x^2/2 dt/2), full kinetic step
/// exp(-i k^2/2 dt) in momentum space, half potential kick. The control may
/// be negative (expulsive potential); a boundary-leak monitor throws if more
/// than 1e-8 probability reaches the outer 2% of the grid.
inline WaveState split_step_propagate(const WaveState& psi0, const Schedule& sched, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("split_step_propagate: dt must be positive");

    const SpatialGrid& grid = psi0.grid;
    const int n = grid.n_points;
    WaveState psi = psi0;

    fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(n));
    fftw_plan fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_plan bwd = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    auto* amps = reinterpret_cast<std::complex<double>*>(buf);
    for (int i = 0; i < n; ++i) amps[i] = psi.amplitudes[i];

    std::vector<std::complex<double>> kin(n);
    const auto check_leak = [&] {
        const int edge = std::max(1, n / 50);
        double leak = 0.0;
        for (int i = 0; i < edge; ++i) {
            leak += std::norm(amps[i]) + std::norm(amps[n - 1 - i]);
        }
        if (leak * grid.dx() > 1e-8) {
            fftw_destroy_plan(fwd);
            fftw_destroy_plan(bwd);
            fftw_free(buf);
            throw std::runtime_error("split_step_propagate: wavepacket reached grid boundary");
        }
    };

    for (const auto& seg : sched.segments) {
        const auto steps = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(seg.duration / dt - 1e-12)));
        const double h = seg.duration / static_cast<double>(steps);

        std::vector<std::complex<double>> pot(n);
        for (int i = 0; i < n; ++i) {
            const double x = grid.x(i);
            pot[i] = std::exp(std::complex<double>(0.0, -seg.control.value * x * x * h / 4.0));
            const double k = grid.k(i);
            kin[i] = std::exp(std::complex<double>(0.0, -k * k * h / 2.0)) / double(n);
        }

        for (std::size_t step = 0; step < steps; ++step) {
            for (int i = 0; i < n; ++i) amps[i] *= pot[i];
            fftw_execute(fwd);
            for (int i = 0; i < n; ++i) amps[i] *= kin[i];
            fftw_execute(bwd);
            for (int i = 0; i < n; ++i) amps[i] *= pot[i];
        }
        check_leak();
        psi.t += seg.duration;
    }

    for (int i = 0; i < n; ++i) psi.amplitudes[i] = amps[i];
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(buf);
    return psi;
}

}  // namespace trapexpand
