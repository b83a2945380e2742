#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lipsim/errors.hpp"
#include "lipsim/grid.hpp"
#include "lipsim/units.hpp"

using namespace lipsim;
namespace u = lipsim::units;

TEST_CASE("unit conversions pin the CODATA anchors") {
    CHECK(u::to_internal(0.0, u::Unit::WaveNumber) == 0.0);
    // 1 hartree in cm^-1
    CHECK(u::to_internal(219474.6313632, u::Unit::WaveNumber) == doctest::Approx(1.0).epsilon(1e-14));
    // 1 ps in atomic time units
    CHECK(u::to_internal(1.0, u::Unit::Picosecond) ==
          doctest::Approx(1.0 / 2.4188843265857e-5).epsilon(1e-14));
    // half the sodium standard atomic mass, in electron masses
    CHECK(u::to_internal(11.49488464, u::Unit::Amu) ==
          doctest::Approx(11.49488464 * 1822.888486209).epsilon(1e-14));
    CHECK(u::to_internal(5.0, u::Unit::Internal) == 5.0);
}

TEST_CASE("unit round trips are identity to 1e-12 relative") {
    std::mt19937 rng(20260808);
    std::uniform_real_distribution<double> mag(-6.0, 6.0);
    const u::Unit units[] = {u::Unit::WaveNumber, u::Unit::Picosecond, u::Unit::Angstrom,
                             u::Unit::Amu};
    for (u::Unit unit : units) {
        for (int i = 0; i < 200; ++i) {
            const double x = std::pow(10.0, mag(rng));
            const double back = u::from_internal(u::to_internal(x, unit), unit);
            CHECK(std::abs(back - x) <= 1e-12 * x);
        }
    }
    // hbar*Omega given in cm^-1 -> internal angular frequency -> back
    const double w = 733.0;
    CHECK(u::hartree_to_cm1(u::cm1_to_hartree(w)) == doctest::Approx(w).epsilon(1e-14));
}

TEST_CASE("parse_unit accepts the documented tags only") {
    CHECK(u::parse_unit("cm-1") == u::Unit::WaveNumber);
    CHECK(u::parse_unit("ps") == u::Unit::Picosecond);
    CHECK(u::parse_unit("A") == u::Unit::Angstrom);
    CHECK(u::parse_unit("amu") == u::Unit::Amu);
    CHECK(u::parse_unit("internal") == u::Unit::Internal);
    CHECK_THROWS_AS(u::parse_unit("eV"), ConfigError);
}

TEST_CASE("make_grid: toy grid arithmetic") {
    const SpatialGrid g = make_grid(0.0, 1.0, 4);
    CHECK(g.dr == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.r(0) == 0.0);
    CHECK(g.r(1) == doctest::Approx(0.25));
    CHECK(g.r(3) == doctest::Approx(0.75));
    CHECK(g.k[0] == 0.0);
}

TEST_CASE("make_grid: production-sized grid and Nyquist wavenumber") {
    const double r_min = u::angstrom_to_bohr(2.0);
    const double r_max = u::angstrom_to_bohr(10.0);
    const SpatialGrid g = make_grid(r_min, r_max, 1024);
    CHECK(g.dr == doctest::Approx(u::angstrom_to_bohr(8.0) / 1024.0).epsilon(1e-15));
    // n*dr recovers the box length to ~n ulps
    CHECK(std::abs(static_cast<double>(g.n) * g.dr - (r_max - r_min)) <=
          1024.0 * std::numeric_limits<double>::epsilon() * (r_max - r_min));
    double kmax = 0.0;
    for (double k : g.k) kmax = std::max(kmax, std::abs(k));
    CHECK(kmax == doctest::Approx(M_PI / g.dr).epsilon(1e-13));

    // dr = 0.01 bohr -> max |k| = 100 pi
    const SpatialGrid g2 = make_grid(0.0, 0.01 * 256, 256);
    double kmax2 = 0.0;
    for (double k : g2.k) kmax2 = std::max(kmax2, std::abs(k));
    CHECK(kmax2 == doctest::Approx(100.0 * M_PI).epsilon(1e-13));
}

TEST_CASE("make_grid rejects bad input") {
    CHECK_THROWS_AS(make_grid(0.0, 1.0, 100), ConfigError); // not a power of two
    CHECK_THROWS_AS(make_grid(1.0, 1.0, 64), ConfigError);  // empty range
    CHECK_THROWS_AS(make_grid(2.0, 1.0, 64), ConfigError);  // reversed range
}

TEST_CASE("kinetic_phase: unit modulus, k=0 entry is exactly 1") {
    const SpatialGrid g = make_grid(0.0, 10.0, 128);
    const double mass = u::amu_to_me(11.49488464);
    const auto phases = kinetic_phase(g, mass, u::ps_to_au(0.00025));
    CHECK(phases[0] == std::complex<double>(1.0, 0.0));
    for (const auto& p : phases) CHECK(std::abs(std::abs(p) - 1.0) < 1e-14);
    CHECK_THROWS_AS(kinetic_phase(g, -1.0, 0.1), ConfigError);
}
