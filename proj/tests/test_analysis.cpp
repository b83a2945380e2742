#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "lipsim/analysis.hpp"
#include "lipsim/errors.hpp"
#include "lipsim/units.hpp"
#include "support/systems.hpp"

using namespace lipsim;
namespace u = lipsim::units;
using cd = std::complex<double>;

TEST_CASE("channel_populations: pure initial state, equal split, random norm") {
    const auto cp = systems::na2_like(2010.0, -2010.0, 733.0);
    const auto grid = systems::na2_grid(256);
    const double mass = systems::na2_mass();

    const auto psi = initial_state(cp, grid, mass, Well::Left, 0);
    const auto p = channel_populations(psi, grid);
    CHECK(p[ChannelX] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p[ChannelA] == 0.0);
    CHECK(p[ChannelPi] == 0.0);

    // engineered equal split
    ChannelWavefunction split = ChannelWavefunction::zero(grid);
    for (std::size_t j = 0; j < grid.n; ++j)
        for (std::size_t c = 0; c < 3; ++c)
            split.channels[c][j] = psi.channels[ChannelX][j] / std::sqrt(3.0);
    const auto q = channel_populations(split, grid);
    for (int c = 0; c < 3; ++c) CHECK(q[c] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // sum equals total norm for a random state
    std::mt19937 rng(3);
    std::normal_distribution<double> nrm;
    ChannelWavefunction rnd = ChannelWavefunction::zero(grid);
    for (auto& ch : rnd.channels)
        for (auto& z : ch) z = cd(nrm(rng), nrm(rng));
    const auto rp = channel_populations(rnd, grid);
    CHECK(rp[0] + rp[1] + rp[2] == doctest::Approx(total_norm(rnd, grid)).epsilon(1e-14));
}

TEST_CASE("vibrational_projection: orthonormal basis bookkeeping") {
    const auto cp = systems::na2_like(2010.0, -2010.0, 733.0);
    const auto grid = systems::na2_grid(256);
    const double mass = systems::na2_mass();

    const auto basis = bound_states(channel_potential(cp, grid, ChannelX), grid, mass, 5);
    const auto psi = initial_state(cp, grid, mass, Well::Left, 1);
    const auto w = vibrational_projection(psi, basis, ChannelX, grid);
    CHECK(w[1] == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t nu = 0; nu < w.size(); ++nu)
        if (nu != 1) CHECK(w[nu] <= 1e-12);

    // Bessel: weights sum below the channel population
    std::mt19937 rng(11);
    std::normal_distribution<double> nrm;
    ChannelWavefunction rnd = ChannelWavefunction::zero(grid);
    for (auto& z : rnd.channels[ChannelX]) z = cd(nrm(rng), nrm(rng));
    const auto rw = vibrational_projection(rnd, basis, ChannelX, grid);
    double sum = 0.0;
    for (double x : rw) sum += x;
    CHECK(sum <= channel_populations(rnd, grid)[ChannelX] + 1e-10);

    // completeness on a full bound basis when all density is in the well
    const auto full = bound_states(channel_potential(cp, grid, ChannelX), grid, mass, 20);
    const auto psi0 = initial_state(cp, grid, mass, Well::Left, 0);
    const auto cw = vibrational_projection(psi0, full, ChannelX, grid);
    double csum = 0.0;
    for (double x : cw) csum += x;
    CHECK(csum >= 0.999);

    const SpatialGrid other = systems::na2_grid(128);
    CHECK_THROWS_AS(vibrational_projection(psi, basis, ChannelX, other), DomainError);
}

TEST_CASE("density_snapshot: integrates to the norm, ground state single-peaked") {
    const auto cp = systems::na2_like(2010.0, -2010.0, 733.0);
    const auto grid = systems::na2_grid(256);
    const auto psi = initial_state(cp, grid, systems::na2_mass(), Well::Left, 0);
    const auto snap = density_snapshot(psi, grid);
    double total = 0.0;
    for (double d : snap.total) total += d;
    CHECK(total * grid.dr == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(count_peaks(snap.total, 0.05) == 1);
}

TEST_CASE("count_peaks: synthetic four-peak profile with prominence floor") {
    std::vector<double> v(400, 0.0);
    auto bump = [&](double center, double height, double width) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            const double x = (static_cast<double>(j) - center) / width;
            v[j] += height * std::exp(-x * x);
        }
    };
    bump(60, 1.0, 8.0);
    bump(140, 0.75, 8.0);
    bump(220, 0.6, 8.0);
    bump(300, 0.8, 8.0);
    CHECK(count_peaks(v, 0.05) == 4);
    // sub-prominence ripple is ignored
    bump(350, 0.02, 3.0);
    CHECK(count_peaks(v, 0.05) == 4);
}

TEST_CASE("lip_following matches the diabatic projection when pulses are off") {
    const auto cp = systems::na2_like(2010.0, -2010.0, 733.0);
    const auto grid = systems::na2_grid(512);
    const double mass = systems::na2_mass();
    const auto psi = initial_state(cp, grid, mass, Well::Left, 0, u::ps_to_au(0.0));

    // Paper setup: before the pulses the left-well ground state is the
    // second-lowest state of the active light-induced potential. The weight
    // falls short of 1 by the inter-well hybridization through the shipped
    // barrier (~240 cm^-1), a few percent here.
    const auto w = lip_following(psi, cp, grid, mass, u::ps_to_au(0.0), 4);
    CHECK(w[1] >= 0.95);
    CHECK(w[0] <= 0.02);
    CHECK(w[2] <= 0.02);

    double sum = 0.0;
    for (double x : w) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0 + 1e-10);
        sum += x;
    }
    CHECK(sum <= 1.0 + 1e-10);

    // With the drive fully off the adiabatic frame is the channel frame:
    // projecting the rotated state equals projecting the X channel directly
    // onto the same active-surface basis. The residual is the X-channel
    // tunneling tail inside the Pi-character region, which the rotation
    // zeroes but the direct projection keeps; for the shipped barrier it
    // reaches the percent scale and bounds how closely the two can agree.
    const double t_quiet = u::ps_to_au(-50.0);
    const auto w_adiabatic = lip_following(psi, cp, grid, mass, t_quiet, 4);
    const LipSurface lip = lip_at(cp, grid, t_quiet);
    const auto basis = bound_states(lip.active_potential(), grid, mass, 4);
    const auto w_diabatic = vibrational_projection(psi, basis, ChannelX, grid);
    for (std::size_t nu = 0; nu < 4; ++nu)
        CHECK(std::abs(w_adiabatic[nu] - w_diabatic[nu]) <= 0.025);
}

TEST_CASE("transfer_report: no-pulse run stays on the initial label") {
    auto cp = systems::na2_like(2010.0, -2010.0, 733.0);
    cp.pulse1.omega0 = 0.0;
    cp.pulse2.omega0 = 0.0;
    const auto grid = systems::na2_grid(256);
    const double mass = systems::na2_mass();

    PropagationSettings settings;
    settings.dt = u::ps_to_au(0.001);
    settings.t_start = 0.0;
    settings.t_end = u::ps_to_au(1.0);
    settings.record_stride = 100;

    ScenarioResult result;
    Observers obs;
    obs.on_record = [&](double t, const ChannelWavefunction& psi) {
        result.times.push_back(t);
        const auto p = channel_populations(psi, grid);
        result.populations.push_back(p);
        result.norms.push_back(p[0] + p[1] + p[2]);
    };
    auto outcome = propagate(initial_state(cp, grid, mass, Well::Left, 0), cp, grid, mass,
                             settings, obs);
    result.final_state = std::move(outcome.psi);

    TransferOptions topts;
    topts.oscillation_window = u::ps_to_au(0.5);
    const auto report = transfer_report(result, cp, grid, mass, Well::Left, 0, topts);
    CHECK(report.final_well == Well::Left);
    CHECK(report.final_nu == 0);
    CHECK(report.final_weight == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(report.residual_oscillation <= 1e-10);

    // invariance under a global phase of the final state
    ScenarioResult rotated = result;
    rotated.final_state = *result.final_state;
    const cd phase = std::polar(1.0, 1.234);
    for (auto& ch : rotated.final_state->channels)
        for (auto& z : ch) z *= phase;
    const auto report2 = transfer_report(rotated, cp, grid, mass, Well::Left, 0, topts);
    CHECK(report2.final_well == report.final_well);
    CHECK(report2.final_nu == report.final_nu);
    CHECK(report2.final_weight == doctest::Approx(report.final_weight).epsilon(1e-12));

    // missing final snapshot is an error
    ScenarioResult empty = result;
    empty.final_state.reset();
    CHECK_THROWS_AS(transfer_report(empty, cp, grid, mass, Well::Left, 0, topts), DomainError);
}

TEST_CASE("population conservation holds along a driven run") {
    const auto cp = systems::na2_like(2010.0, -2010.0, 733.0);
    const auto grid = systems::na2_grid(256);
    const double mass = systems::na2_mass();

    PropagationSettings settings;
    settings.dt = u::ps_to_au(0.0005);
    // a short window around the pulse overlap where the drive is strongest
    settings.t_start = u::ps_to_au(20.0);
    settings.t_end = u::ps_to_au(20.5);
    settings.record_stride = 50;

    std::size_t checks = 0;
    Observers obs;
    obs.on_record = [&](double, const ChannelWavefunction& psi) {
        const auto p = channel_populations(psi, grid);
        CHECK(std::abs(p[0] + p[1] + p[2] - 1.0) <= 1e-10);
        ++checks;
    };
    propagate(initial_state(cp, grid, mass, Well::Left, 0, settings.t_start), cp, grid, mass,
              settings, obs);
    CHECK(checks > 10);
}
