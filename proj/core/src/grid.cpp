#include "lipsim/grid.hpp"

#include <cmath>
#include <numbers>

#include "lipsim/errors.hpp"

namespace lipsim {

bool is_power_of_two(std::size_t n) {
    return n >= 1 && (n & (n - 1)) == 0;
}

std::vector<double> SpatialGrid::points() const {
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = r(j);
    return out;
}

SpatialGrid make_grid(double r_min, double r_max, std::size_t n) {
    if (!(r_max > r_min))
        throw ConfigError("make_grid: r_max must exceed r_min");
    if (n < 2 || !is_power_of_two(n))
        throw ConfigError("make_grid: n must be a power of two, got " + std::to_string(n));

    SpatialGrid g;
    g.r_min = r_min;
    g.r_max = r_max;
    g.n = n;
    g.dr = (r_max - r_min) / static_cast<double>(n);
    g.k.resize(n);
    const double dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * g.dr);
    const std::size_t half = n / 2;
    for (std::size_t m = 0; m < n; ++m) {
        const double idx = (m < half) ? static_cast<double>(m)
                                      : static_cast<double>(m) - static_cast<double>(n);
        g.k[m] = dk * idx;
    }
    return g;
}

std::vector<std::complex<double>> kinetic_phase(const SpatialGrid& grid, double mass, double dt) {
    if (!(mass > 0.0))
        throw ConfigError("kinetic_phase: mass must be positive");
    std::vector<std::complex<double>> phases(grid.n);
    for (std::size_t m = 0; m < grid.n; ++m) {
        const double phi = -grid.k[m] * grid.k[m] * dt / (2.0 * mass);
        phases[m] = std::polar(1.0, phi);
    }
    return phases;
}

} // namespace lipsim
