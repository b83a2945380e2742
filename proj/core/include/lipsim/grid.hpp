#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace lipsim {

// Uniform spatial grid over [r_min, r_max) with the spectral wavenumbers of
// the periodic Fourier basis. All quantities in atomic units (bohr).
// Immutable after construction.
struct SpatialGrid {
    double r_min = 0.0;
    double r_max = 0.0;
    std::size_t n = 0;
    double dr = 0.0;
    std::vector<double> k; // FFT ordering: k[0]=0, k[m] = 2*pi*m/(n*dr) for m<n/2, negative branch after

    double r(std::size_t j) const { return r_min + static_cast<double>(j) * dr; }
    std::vector<double> points() const;
};

// n must be a power of two (>= 2) and r_max > r_min. The >=64 floor for
// production scenarios is enforced at the config layer so toy grids remain
// available to tests.
SpatialGrid make_grid(double r_min, double r_max, std::size_t n);

bool is_power_of_two(std::size_t n);

// exp(-i k^2 dt / (2 mass)) per wavenumber; the kinetic full-step factors of
// the split propagator. mass > 0; dt may be negative (time reversal).
std::vector<std::complex<double>> kinetic_phase(const SpatialGrid& grid, double mass, double dt);

} // namespace lipsim
