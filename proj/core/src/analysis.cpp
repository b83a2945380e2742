#include "lipsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "lipsim/errors.hpp"
#include "lipsim/units.hpp"

namespace lipsim {

using cd = std::complex<double>;

DensitySnapshot density_snapshot(const ChannelWavefunction& psi, const SpatialGrid& grid) {
    DensitySnapshot snap;
    snap.t = psi.t;
    snap.total.assign(grid.n, 0.0);
    for (std::size_t c = 0; c < 3; ++c) {
        snap.channel[c].resize(grid.n);
        for (std::size_t j = 0; j < grid.n; ++j) {
            const double d = std::norm(psi.channels[c][j]);
            snap.channel[c][j] = d;
            snap.total[j] += d;
        }
    }
    return snap;
}

std::size_t count_peaks(const std::vector<double>& values, double prominence_fraction) {
    if (values.size() < 3) return 0;
    const double vmax = *std::max_element(values.begin(), values.end());
    const double floor = prominence_fraction * vmax;
    std::size_t peaks = 0;
    for (std::size_t j = 1; j + 1 < values.size(); ++j) {
        if (values[j] < floor) continue;
        if (values[j] <= values[j - 1] || values[j] < values[j + 1]) continue;
        // Prominence: the peak must rise by `floor` above the highest saddle
        // separating it from a larger value on each side.
        double left_min = values[j];
        bool left_ok = false;
        for (std::size_t l = j; l-- > 0;) {
            left_min = std::min(left_min, values[l]);
            if (values[l] > values[j]) break;
            if (l == 0) break;
        }
        left_ok = (values[j] - left_min) >= floor;
        double right_min = values[j];
        bool right_ok = false;
        for (std::size_t r = j + 1; r < values.size(); ++r) {
            right_min = std::min(right_min, values[r]);
            if (values[r] > values[j]) break;
        }
        right_ok = (values[j] - right_min) >= floor;
        if (left_ok && right_ok) ++peaks;
    }
    return peaks;
}

std::array<double, 3> channel_populations(const ChannelWavefunction& psi,
                                          const SpatialGrid& grid) {
    return channel_norms(psi, grid);
}

std::vector<double> vibrational_projection(const ChannelWavefunction& psi,
                                           const BoundStateSet& basis, Channel channel,
                                           const SpatialGrid& grid) {
    std::vector<double> weights(basis.states.size(), 0.0);
    const auto& amp = psi.channels[channel];
    if (amp.size() != grid.n) throw DomainError("vibrational_projection: state/grid mismatch");
    for (std::size_t nu = 0; nu < basis.states.size(); ++nu) {
        const auto& phi = basis.states[nu];
        if (phi.size() != grid.n)
            throw DomainError("vibrational_projection: basis lives on a different grid");
        cd acc(0.0, 0.0);
        for (std::size_t j = 0; j < grid.n; ++j) acc += phi[j] * amp[j];
        weights[nu] = std::norm(acc * grid.dr);
    }
    return weights;
}

std::vector<double> lip_following(const ChannelWavefunction& psi, const CoupledPotential& cp,
                                  const SpatialGrid& grid, double mass, double t,
                                  std::size_t count) {
    const LipSurface lip = lip_at(cp, grid, t);
    const auto set = bound_states(lip.active_potential(), grid, mass, count);

    // Amplitude on the active adiabatic surface at each point.
    std::vector<cd> chi(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const auto& v = lip.frames.frames[j].vectors[static_cast<std::size_t>(lip.active_index[j])];
        chi[j] = v[0] * psi.channels[0][j] + v[1] * psi.channels[1][j] + v[2] * psi.channels[2][j];
    }
    std::vector<double> weights(count, 0.0);
    for (std::size_t nu = 0; nu < count; ++nu) {
        cd acc(0.0, 0.0);
        for (std::size_t j = 0; j < grid.n; ++j) acc += set.states[nu][j] * chi[j];
        weights[nu] = std::norm(acc * grid.dr);
    }
    return weights;
}

TransferReport transfer_report(const ScenarioResult& result, const CoupledPotential& cp,
                               const SpatialGrid& grid, double mass, Well initial_well,
                               std::size_t initial_nu, const TransferOptions& opts) {
    if (!result.final_state.has_value())
        throw DomainError("transfer_report: missing final-state snapshot");
    if (result.times.empty()) throw DomainError("transfer_report: empty result");

    const ChannelWavefunction& psi = *result.final_state;

    TransferReport report;
    report.initial_well = initial_well;
    report.initial_nu = initial_nu;
    report.final_populations = channel_populations(psi, grid);

    auto basis_for = [&](Channel ch) {
        const auto v = channel_potential(cp, grid, ch);
        // Clamp to what the well actually supports.
        BoundStateSet probe = bound_states(v, grid, mass, 1);
        const std::size_t count = std::min(opts.basis_count, probe.bound_count);
        return bound_states(v, grid, mass, count);
    };
    const auto left_basis = basis_for(ChannelX);
    const auto right_basis = basis_for(ChannelPi);
    const auto left_w = vibrational_projection(psi, left_basis, ChannelX, grid);
    const auto right_w = vibrational_projection(psi, right_basis, ChannelPi, grid);

    report.final_well = Well::Left;
    report.final_nu = 0;
    report.final_weight = -1.0;
    for (std::size_t nu = 0; nu < left_w.size(); ++nu) {
        if (left_w[nu] > report.final_weight) {
            report.final_weight = left_w[nu];
            report.final_well = Well::Left;
            report.final_nu = nu;
        }
    }
    for (std::size_t nu = 0; nu < right_w.size(); ++nu) {
        if (right_w[nu] > report.final_weight) {
            report.final_weight = right_w[nu];
            report.final_well = Well::Right;
            report.final_nu = nu;
        }
    }

    // Peak-to-peak variation of the target-channel population over the final
    // window (default 5 ps).
    const double window =
        opts.oscillation_window > 0.0 ? opts.oscillation_window : units::ps_to_au(5.0);
    const double t_end = result.times.back();
    const Channel target = (report.final_well == Well::Left) ? ChannelX : ChannelPi;
    double lo = 1.0, hi = 0.0;
    for (std::size_t s = 0; s < result.times.size(); ++s) {
        if (result.times[s] < t_end - window) continue;
        const double p = result.populations[s][target];
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    report.residual_oscillation = std::max(0.0, hi - lo);
    return report;
}

} // namespace lipsim
