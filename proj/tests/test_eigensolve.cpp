#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lipsim/bound_states.hpp"
#include "lipsim/curves.hpp"
#include "lipsim/eig3.hpp"
#include "lipsim/eigenfield.hpp"
#include "lipsim/errors.hpp"
#include "lipsim/units.hpp"
#include "support/oracles.hpp"

using namespace lipsim;
namespace u = lipsim::units;

namespace {

Sym3 random_sym3(std::mt19937& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> d(-scale, scale);
    Sym3 m;
    m.xx = d(rng); m.yy = d(rng); m.zz = d(rng);
    m.xy = d(rng); m.yz = d(rng); m.xz = d(rng);
    return m;
}

double frob(const Sym3& a) {
    return std::sqrt(a.xx * a.xx + a.yy * a.yy + a.zz * a.zz +
                     2.0 * (a.xy * a.xy + a.yz * a.yz + a.xz * a.xz));
}

double residual(const Sym3& a, const Eig3& e) {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        const auto& v = e.vectors[i];
        const double av[3] = {a.xx * v[0] + a.xy * v[1] + a.xz * v[2],
                              a.xy * v[0] + a.yy * v[1] + a.yz * v[2],
                              a.xz * v[0] + a.yz * v[1] + a.zz * v[2]};
        for (int c = 0; c < 3; ++c)
            worst = std::max(worst, std::abs(av[c] - e.values[i] * v[c]));
    }
    return worst;
}

double orthogonality_defect(const Eig3& e) {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double dot = 0.0;
            for (int c = 0; c < 3; ++c) dot += e.vectors[i][c] * e.vectors[j][c];
            worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

} // namespace

TEST_CASE("eig3: diagonal input") {
    Sym3 m;
    m.xx = 2.0; m.yy = 1.0; m.zz = 3.0;
    const Eig3 e = eig3_symmetric(m);
    CHECK(e.values[0] == 1.0);
    CHECK(e.values[1] == 2.0);
    CHECK(e.values[2] == 3.0);
    CHECK(std::abs(e.vectors[0][1]) == 1.0);
    CHECK(std::abs(e.vectors[1][0]) == 1.0);
    CHECK(std::abs(e.vectors[2][2]) == 1.0);
}

TEST_CASE("eig3: analytic lambda-ladder with equal couplings") {
    // [[a, w, 0], [w, b, w], [0, w, a]] has eigenvalues
    // a and (a+b)/2 +- sqrt((a-b)^2/4 + 2 w^2)
    const double a = 0.3, b = -0.1, w = 0.05;
    Sym3 m;
    m.xx = a; m.yy = b; m.zz = a;
    m.xy = w; m.yz = w; m.xz = 0.0;
    const Eig3 e = eig3_symmetric(m);
    const double s = std::sqrt((a - b) * (a - b) / 4.0 + 2.0 * w * w);
    const double lo = (a + b) / 2.0 - s;
    const double hi = (a + b) / 2.0 + s;
    CHECK(e.values[0] == doctest::Approx(lo).epsilon(1e-13));
    CHECK(e.values[1] == doctest::Approx(a).epsilon(1e-13));
    CHECK(e.values[2] == doctest::Approx(hi).epsilon(1e-13));
}

TEST_CASE("eig3: random matrices meet the residual and orthogonality contract") {
    std::mt19937 rng(20260808);
    for (int i = 0; i < 5000; ++i) {
        const Sym3 m = random_sym3(rng, (i % 3 == 0) ? 1e-4 : 1.0);
        const Eig3 e = eig3_symmetric(m);
        CHECK(e.values[0] <= e.values[1]);
        CHECK(e.values[1] <= e.values[2]);
        CHECK(residual(m, e) <= 1e-13 * frob(m));
        CHECK(orthogonality_defect(e) <= 1e-12);
        // trace invariance
        CHECK(e.values[0] + e.values[1] + e.values[2] ==
              doctest::Approx(m.trace()).epsilon(1e-12));
    }
}

TEST_CASE("eig3: near-degenerate and exactly degenerate input") {
    Sym3 m;
    m.xx = 1.0; m.yy = 1.0; m.zz = 1.0;
    m.xy = 1e-15; m.yz = 0.0; m.xz = 0.0;
    const Eig3 e = eig3_symmetric(m);
    CHECK(orthogonality_defect(e) <= 1e-12);
    CHECK(residual(m, e) <= 1e-13 * frob(m));

    // coupling-matrix-like: two equal diagonals, tiny coupling
    Sym3 m2;
    m2.xx = 0.5; m2.yy = 0.5; m2.zz = 0.9;
    m2.xy = 1e-12; m2.yz = 1e-12; m2.xz = 0.0;
    const Eig3 e2 = eig3_symmetric(m2);
    CHECK(orthogonality_defect(e2) <= 1e-12);
    CHECK(residual(m2, e2) <= 1e-13 * frob(m2));
}

TEST_CASE("eig3: eigenvalues invariant under permutation similarity") {
    std::mt19937 rng(99);
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int trial = 0; trial < 200; ++trial) {
        const Sym3 m = random_sym3(rng);
        const Eig3 base = eig3_symmetric(m);
        double a[3][3] = {{m.xx, m.xy, m.xz}, {m.xy, m.yy, m.yz}, {m.xz, m.yz, m.zz}};
        for (const auto& p : perms) {
            Sym3 q;
            q.xx = a[p[0]][p[0]]; q.yy = a[p[1]][p[1]]; q.zz = a[p[2]][p[2]];
            q.xy = a[p[0]][p[1]]; q.yz = a[p[1]][p[2]]; q.xz = a[p[0]][p[2]];
            const Eig3 e = eig3_symmetric(q);
            for (int i = 0; i < 3; ++i)
                CHECK(e.values[i] == doctest::Approx(base.values[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("eig3: reconstruction A = V diag(L) V^T and NaN rejection") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        const Sym3 m = random_sym3(rng);
        const Eig3 e = eig3_symmetric(m);
        double rec[3][3] = {{0}};
        for (int i = 0; i < 3; ++i)
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                    rec[r][c] += e.values[i] * e.vectors[i][r] * e.vectors[i][c];
        const double f = frob(m);
        CHECK(std::abs(rec[0][0] - m.xx) <= 1e-12 * f);
        CHECK(std::abs(rec[1][1] - m.yy) <= 1e-12 * f);
        CHECK(std::abs(rec[2][2] - m.zz) <= 1e-12 * f);
        CHECK(std::abs(rec[0][1] - m.xy) <= 1e-12 * f);
        CHECK(std::abs(rec[1][2] - m.yz) <= 1e-12 * f);
        CHECK(std::abs(rec[0][2] - m.xz) <= 1e-12 * f);
    }
    Sym3 bad;
    bad.xx = std::nan("");
    CHECK_THROWS_AS(eig3_symmetric(bad), NumericalError);
}

TEST_CASE("eigenfield: constant field, diagonal field, continuity") {
    std::vector<Sym3> field(32);
    Sym3 m;
    m.xx = 0.2; m.yy = -0.1; m.zz = 0.4; m.xy = 0.05; m.yz = 0.02; m.xz = 0.0;
    for (auto& f : field) f = m;
    const auto frames = eigenfield(field);
    for (std::size_t j = 1; j < frames.size(); ++j)
        for (int i = 0; i < 3; ++i)
            for (int c = 0; c < 3; ++c)
                CHECK(frames.frames[j].vectors[i][c] ==
                      doctest::Approx(frames.frames[0].vectors[i][c]).epsilon(1e-14));

    // varying field: consecutive same-index overlaps positive after fixing
    std::vector<Sym3> vary(128);
    for (std::size_t j = 0; j < vary.size(); ++j) {
        const double x = static_cast<double>(j) / 127.0;
        vary[j].xx = x;
        vary[j].yy = 1.0 - x;
        vary[j].zz = 0.5 + 0.2 * x;
        vary[j].xy = 0.08;
        vary[j].yz = 0.05;
        vary[j].xz = 0.0;
    }
    const auto vf = eigenfield(vary);
    for (std::size_t j = 1; j < vf.frames.size(); ++j) {
        for (int i = 0; i < 3; ++i) {
            double dot = 0.0;
            for (int c = 0; c < 3; ++c)
                dot += vf.frames[j - 1].vectors[i][c] * vf.frames[j].vectors[i][c];
            CHECK(dot > 0.0);
        }
    }

    // diagonal field: eigenvalues are the sorted diagonals
    std::vector<Sym3> diag(8);
    for (std::size_t j = 0; j < diag.size(); ++j) {
        diag[j].xx = 3.0 - static_cast<double>(j);
        diag[j].yy = 0.0;
        diag[j].zz = static_cast<double>(j);
    }
    const auto df = eigenfield(diag);
    for (std::size_t j = 0; j < diag.size(); ++j) {
        std::array<double, 3> want = {diag[j].xx, diag[j].yy, diag[j].zz};
        std::sort(want.begin(), want.end());
        for (int i = 0; i < 3; ++i) CHECK(df.frames[j].values[i] == want[i]);
    }
}

TEST_CASE("bound_states: harmonic oscillator matches the analytic spectrum") {
    // hbar*omega = 100 cm^-1 with the Na2-like reduced mass
    const double mass = u::amu_to_me(11.49488464);
    const double omega = u::cm1_to_hartree(100.0);
    const double k = mass * omega * omega;
    const SpatialGrid g = make_grid(u::angstrom_to_bohr(1.0), u::angstrom_to_bohr(7.0), 512);
    const PotentialCurve curve = HarmonicCurve{k, u::angstrom_to_bohr(4.0), 0.0};
    const auto v = sample_curve(curve, g.points());
    const auto set = bound_states(v, g, mass, 11);
    for (std::size_t n = 0; n <= 10; ++n) {
        const double want = oracles::harmonic_level(n, k, mass);
        CHECK(std::abs(set.energies[n] - want) <= 1e-6 * want);
    }
}

TEST_CASE("bound_states: Morse matches the analytic spectrum for low n") {
    const double mass = u::amu_to_me(11.49488464);
    const double de = u::cm1_to_hartree(6022.0);
    const double a = 0.448;
    const SpatialGrid g = make_grid(u::angstrom_to_bohr(1.8), u::angstrom_to_bohr(9.0), 512);
    const PotentialCurve curve = MorseCurve{de, a, u::angstrom_to_bohr(3.0789), 0.0};
    const auto v = sample_curve(curve, g.points());
    const auto set = bound_states(v, g, mass, 8);
    for (std::size_t n = 0; n < 8; ++n) {
        const double want = oracles::morse_level(n, de, a, mass);
        CHECK(std::abs(set.energies[n] - want) <= 1e-6 * want);
    }
}

TEST_CASE("bound_states: orthonormality, residuals, and normalization") {
    const double mass = u::amu_to_me(11.49488464);
    const double de = u::cm1_to_hartree(3000.0);
    const SpatialGrid g = make_grid(u::angstrom_to_bohr(2.0), u::angstrom_to_bohr(9.0), 256);
    const PotentialCurve curve = MorseCurve{de, 0.5, u::angstrom_to_bohr(3.5), 0.0};
    const auto v = sample_curve(curve, g.points());
    const auto set = bound_states(v, g, mass, 6);

    CHECK(set.energies.size() == 6);
    for (std::size_t i = 1; i < 6; ++i) CHECK(set.energies[i] > set.energies[i - 1]);

    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
            double dot = 0.0;
            for (std::size_t p = 0; p < g.n; ++p) dot += set.states[i][p] * set.states[j][p];
            dot *= g.dr;
            CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) <= (i == j ? 1e-12 : 1e-10));
        }
        // residual against the operator definition
        const auto hphi = apply_grid_hamiltonian(v, g, mass, set.states[i]);
        double num = 0.0, den = 0.0;
        for (std::size_t p = 0; p < g.n; ++p) {
            const double d = hphi[p] - set.energies[i] * set.states[i][p];
            num += d * d;
            den += hphi[p] * hphi[p];
        }
        CHECK(std::sqrt(num) <= 1e-8 * std::sqrt(den));
    }
}

TEST_CASE("bound_states: unbound request reports the bound count") {
    const double mass = u::amu_to_me(11.49488464);
    const double de = u::cm1_to_hartree(300.0); // shallow well, few states
    const SpatialGrid g = make_grid(u::angstrom_to_bohr(2.0), u::angstrom_to_bohr(10.0), 256);
    const PotentialCurve curve = MorseCurve{de, 0.45, u::angstrom_to_bohr(3.5), 0.0};
    const auto v = sample_curve(curve, g.points());
    try {
        bound_states(v, g, mass, 50);
        FAIL("expected UnboundRequestError");
    } catch (const UnboundRequestError& e) {
        CHECK(e.requested == 50);
        CHECK(e.available < 50);
        CHECK(e.available >= 1);
        CHECK(std::string(e.what()).find(std::to_string(e.available)) != std::string::npos);
    }
}

TEST_CASE("bound_states: symmetric double well shows tunneling pairs") {
    const double mass = 2000.0;
    const SpatialGrid g = make_grid(-6.0, 6.0, 256);
    auto make_v = [&](double barrier) {
        std::vector<double> v(g.n);
        for (std::size_t j = 0; j < g.n; ++j) {
            const double x = g.r(j);
            v[j] = barrier * std::pow(x * x - 4.0, 2) / 16.0; // minima at x = +-2
        }
        return v;
    };
    const auto low = bound_states(make_v(0.02), g, mass, 4);
    const auto high = bound_states(make_v(0.08), g, mass, 4);
    const double split_low = low.energies[1] - low.energies[0];
    const double split_high = high.energies[1] - high.energies[0];
    CHECK(split_low > 0.0);
    CHECK(split_high > 0.0);
    // pair splitting shrinks as the barrier grows
    CHECK(split_high < split_low);
    // near-degenerate pair: splitting far below the well spacing
    CHECK(split_high < 0.2 * (high.energies[2] - high.energies[0]));
}

TEST_CASE("bound_states: grid refinement leaves energies stable to 1e-8") {
    const double mass = u::amu_to_me(11.49488464);
    const double de = u::cm1_to_hartree(6022.0);
    const PotentialCurve curve = MorseCurve{de, 0.448, u::angstrom_to_bohr(3.0789), 0.0};
    const SpatialGrid g1 = make_grid(u::angstrom_to_bohr(2.0), u::angstrom_to_bohr(10.0), 512);
    const SpatialGrid g2 = make_grid(u::angstrom_to_bohr(2.0), u::angstrom_to_bohr(10.0), 1024);
    const auto s1 = bound_states(sample_curve(curve, g1.points()), g1, mass, 5);
    const auto s2 = bound_states(sample_curve(curve, g2.points()), g2, mass, 5);
    for (std::size_t n = 0; n < 5; ++n)
        CHECK(std::abs(s1.energies[n] - s2.energies[n]) <= 1e-8 * std::abs(s2.energies[n]));
}

TEST_CASE("bound_states agrees with an independent finite-difference solver") {
    const double mass = u::amu_to_me(11.49488464);
    const double omega = u::cm1_to_hartree(150.0);
    const double k = mass * omega * omega;
    const PotentialCurve curve = HarmonicCurve{k, u::angstrom_to_bohr(4.0), 0.0};

    const SpatialGrid g1 = make_grid(u::angstrom_to_bohr(1.5), u::angstrom_to_bohr(6.5), 256);
    const SpatialGrid g2 = make_grid(u::angstrom_to_bohr(1.5), u::angstrom_to_bohr(6.5), 512);
    const auto fd1 = oracles::fd_bound_energies(sample_curve(curve, g1.points()), g1, mass, 4);
    const auto fd2 = oracles::fd_bound_energies(sample_curve(curve, g2.points()), g2, mass, 4);

    const auto spectral = bound_states(sample_curve(curve, g2.points()), g2, mass, 4);
    for (std::size_t n = 0; n < 4; ++n) {
        // Richardson-extrapolate the O(dr^2) finite-difference energies.
        const double fd_extrap = (4.0 * fd2[n] - fd1[n]) / 3.0;
        CHECK(std::abs(spectral.energies[n] - fd_extrap) <= 1e-4 * std::abs(spectral.energies[n]));
    }
}
