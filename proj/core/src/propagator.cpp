#include "lipsim/propagator.hpp"

#include <algorithm>
#include <cmath>

#include "lipsim/errors.hpp"

namespace lipsim {

using cd = std::complex<double>;

ChannelWavefunction ChannelWavefunction::zero(const SpatialGrid& grid, double t) {
    ChannelWavefunction psi;
    for (auto& ch : psi.channels) ch.assign(grid.n, cd(0.0, 0.0));
    psi.t = t;
    return psi;
}

std::array<double, 3> channel_norms(const ChannelWavefunction& psi, const SpatialGrid& grid) {
    std::array<double, 3> out{};
    for (std::size_t c = 0; c < 3; ++c) {
        // Kahan summation: populations feed conservation checks at 1e-12.
        double sum = 0.0, comp = 0.0;
        for (const cd& z : psi.channels[c]) {
            const double term = std::norm(z);
            const double y = term - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        out[c] = sum * grid.dr;
    }
    return out;
}

ChannelWavefunction initial_state(const CoupledPotential& cp, const SpatialGrid& grid, double mass,
                                  Well well, std::size_t nu, double t) {
    const Channel channel = (well == Well::Left) ? ChannelX : ChannelPi;
    const auto v = channel_potential(cp, grid, channel);
    const auto set = bound_states(v, grid, mass, nu + 1);
    ChannelWavefunction psi = ChannelWavefunction::zero(grid, t);
    for (std::size_t j = 0; j < grid.n; ++j) psi.channels[channel][j] = set.states[nu][j];
    return psi;
}

Propagator::Propagator(const CoupledPotential& cp, const SpatialGrid& grid, double mass)
    : cp_(cp), grid_(grid), mass_(mass), fft_(grid.n) {
    if (!(mass > 0.0)) throw ConfigError("Propagator: mass must be positive");
    diag_[ChannelX] = channel_potential(cp, grid_, ChannelX);
    diag_[ChannelA] = channel_potential(cp, grid_, ChannelA);
    diag_[ChannelPi] = channel_potential(cp, grid_, ChannelPi);
    eig_.resize(grid_.n);
    phase_.resize(grid_.n);
}

void Propagator::refresh_eig_cache(double t_mid, double dt) {
    const double w1 = cp_.pulse1(t_mid);
    const double w2 = cp_.pulse2(t_mid);
    const double half_dt = 0.5 * dt;
    if (w1 == 0.0 && w2 == 0.0) {
        // Uncoupled: the matrix is diagonal, the exponential is three phases.
        for (std::size_t j = 0; j < grid_.n; ++j) {
            auto& e = eig_[j];
            e.values = {diag_[0][j], diag_[1][j], diag_[2][j]};
            e.vectors = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
            auto& p = phase_[j];
            for (int i = 0; i < 3; ++i) p[i] = std::polar(1.0, -e.values[i] * half_dt);
        }
        return;
    }
    Sym3 m;
    m.xy = w1;
    m.yz = w2;
    m.xz = 0.0;
    for (std::size_t j = 0; j < grid_.n; ++j) {
        m.xx = diag_[0][j];
        m.yy = diag_[1][j];
        m.zz = diag_[2][j];
        eig_[j] = eig3_symmetric(m);
        auto& p = phase_[j];
        for (int i = 0; i < 3; ++i) p[i] = std::polar(1.0, -eig_[j].values[i] * half_dt);
    }
}

void Propagator::apply_potential_half(ChannelWavefunction& psi) const {
    cd* x = psi.channels[0].data();
    cd* a = psi.channels[1].data();
    cd* pi = psi.channels[2].data();
    for (std::size_t j = 0; j < grid_.n; ++j) {
        const auto& v = eig_[j].vectors;
        const auto& p = phase_[j];
        const cd c0 = x[j], c1 = a[j], c2 = pi[j];
        // rotate into the adiabatic frame, phase, rotate back
        const cd a0 = (v[0][0] * c0 + v[0][1] * c1 + v[0][2] * c2) * p[0];
        const cd a1 = (v[1][0] * c0 + v[1][1] * c1 + v[1][2] * c2) * p[1];
        const cd a2 = (v[2][0] * c0 + v[2][1] * c1 + v[2][2] * c2) * p[2];
        x[j] = v[0][0] * a0 + v[1][0] * a1 + v[2][0] * a2;
        a[j] = v[0][1] * a0 + v[1][1] * a1 + v[2][1] * a2;
        pi[j] = v[0][2] * a0 + v[1][2] * a1 + v[2][2] * a2;
    }
}

void Propagator::step(ChannelWavefunction& psi, double dt) {
    if (dt == 0.0) return;
    refresh_eig_cache(psi.t + 0.5 * dt, dt);
    if (!kin_valid_ || kin_dt_ != dt) {
        kin_phase_ = kinetic_phase(grid_, mass_, dt);
        kin_dt_ = dt;
        kin_valid_ = true;
    }

    apply_potential_half(psi);
    for (std::size_t c = 0; c < 3; ++c) {
        auto& ch = psi.channels[c];
        fft_.forward(ch);
        for (std::size_t m = 0; m < grid_.n; ++m) ch[m] *= kin_phase_[m];
        fft_.inverse(ch);
    }
    apply_potential_half(psi);

    psi.t += dt;
    ++steps_;
    // One step after any NaN appears it has spread to every point of every
    // channel, so probing one amplitude per channel is a complete check.
    for (std::size_t c = 0; c < 3; ++c) {
        const cd z = psi.channels[c][0];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw NumericalError("propagation failure: non-finite amplitude at step " +
                                 std::to_string(steps_));
    }
}

namespace {

bool edge_density_exceeds(const ChannelWavefunction& psi, const SpatialGrid& grid,
                          double threshold) {
    const std::size_t margin = std::min<std::size_t>(5, grid.n / 2);
    double acc = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t j = 0; j < margin; ++j) acc += std::norm(psi.channels[c][j]);
        for (std::size_t j = grid.n - margin; j < grid.n; ++j)
            acc += std::norm(psi.channels[c][j]);
    }
    return acc * grid.dr > threshold;
}

} // namespace

PropagationOutcome propagate(ChannelWavefunction psi, const CoupledPotential& cp,
                             const SpatialGrid& grid, double mass,
                             const PropagationSettings& settings, const Observers& observers) {
    if (!(settings.dt > 0.0)) throw ConfigError("propagate: dt must be positive");
    if (settings.t_end < settings.t_start)
        throw ConfigError("propagate: t_end must be >= t_start");

    const double span = settings.t_end - settings.t_start;
    const std::size_t full_steps = static_cast<std::size_t>(std::floor(span / settings.dt + 1e-9));
    const double remainder = span - static_cast<double>(full_steps) * settings.dt;
    const bool partial = remainder > 1e-9 * std::max(1.0, span);
    const std::size_t total_steps = full_steps + (partial ? 1 : 0);

    // Snapshot times -> step indices (nearest boundary), deduplicated.
    std::vector<std::size_t> snap_steps;
    for (double ts : settings.snapshot_times) {
        double idx = (ts - settings.t_start) / settings.dt;
        idx = std::clamp(idx, 0.0, static_cast<double>(total_steps));
        snap_steps.push_back(static_cast<std::size_t>(std::llround(idx)));
    }
    std::sort(snap_steps.begin(), snap_steps.end());
    snap_steps.erase(std::unique(snap_steps.begin(), snap_steps.end()), snap_steps.end());

    psi.t = settings.t_start;
    Propagator prop(cp, grid, mass);
    PropagationOutcome outcome;

    const std::size_t stride = std::max<std::size_t>(1, settings.record_stride);
    auto at_step = [&](std::size_t s) {
        if (observers.on_record && (s % stride == 0 || s == total_steps))
            observers.on_record(psi.t, psi);
        if (observers.on_snapshot &&
            std::binary_search(snap_steps.begin(), snap_steps.end(), s))
            observers.on_snapshot(psi.t, psi);
        if (s % stride == 0 || s == total_steps)
            if (edge_density_exceeds(psi, grid, 1e-6)) outcome.boundary_contaminated = true;
    };

    at_step(0);
    for (std::size_t s = 1; s <= total_steps; ++s) {
        const bool last_partial = partial && s == total_steps;
        prop.step(psi, last_partial ? remainder : settings.dt);
        // Recompute the clock from the step count so record times carry no
        // accumulated rounding.
        psi.t = last_partial ? settings.t_end
                             : settings.t_start + static_cast<double>(s) * settings.dt;
        at_step(s);
    }

    outcome.steps = total_steps;
    outcome.psi = std::move(psi);
    return outcome;
}

} // namespace lipsim
