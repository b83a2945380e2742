#include "lipsim/lip.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "lipsim/errors.hpp"
#include "lipsim/parallel.hpp"

namespace lipsim {

std::vector<double> LipSurface::active_potential() const {
    std::vector<double> v(active_index.size());
    for (std::size_t j = 0; j < active_index.size(); ++j)
        v[j] = surfaces[static_cast<std::size_t>(active_index[j])][j];
    return v;
}

LipSurface lip_at(const CoupledPotential& cp, const SpatialGrid& grid, double t) {
    LipSurface lip;
    lip.t = t;
    lip.frames = eigenfield(matrix_field(cp, grid, t));
    for (auto& s : lip.surfaces) s.resize(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j)
        for (int i = 0; i < 3; ++i) lip.surfaces[static_cast<std::size_t>(i)][j] = lip.frames.frames[j].values[static_cast<std::size_t>(i)];

    // Active branch per point: discard the most-A-like eigenvector and keep
    // the lower of the remaining (X/Pi-character) pair. With the pulses off
    // this is exactly the piecewise-lower of the shifted X and Pi curves --
    // including where the detuned A diagonal dips below the double well --
    // and with the pulses on it deforms continuously through the avoided
    // crossings the way the adiabatic passage narrative requires.
    lip.active_index.assign(grid.n, 0);
    for (std::size_t j = 0; j < grid.n; ++j) {
        int a_like = 0;
        double wa_best = -1.0;
        for (int i = 0; i < 3; ++i) {
            const double wa = lip.frames.frames[j].vectors[static_cast<std::size_t>(i)][ChannelA];
            if (wa * wa > wa_best) {
                wa_best = wa * wa;
                a_like = i;
            }
        }
        lip.active_index[j] = (a_like == 0) ? 1 : 0;
    }
    return lip;
}

BoundStateSet active_spectrum(const CoupledPotential& cp, const SpatialGrid& grid, double mass,
                              double t, std::size_t count) {
    const LipSurface lip = lip_at(cp, grid, t);
    return bound_states(lip.active_potential(), grid, mass, count);
}

EigenTrajectorySet track_trajectories(const CoupledPotential& cp, const SpatialGrid& grid,
                                      double mass, const std::vector<double>& times,
                                      std::size_t count, const TrackingOptions& opts) {
    if (times.empty()) throw ConfigError("track_trajectories: empty time list");
    for (std::size_t s = 1; s < times.size(); ++s)
        if (!(times[s] > times[s - 1]))
            throw ConfigError("track_trajectories: times must be strictly ascending");

    // Every sample's spectrum is independent; only the transport below is
    // sequential, so the observable output cannot depend on the worker count.
    std::vector<BoundStateSet> spectra(times.size());
    parallel_for_index(times.size(), opts.threads, [&](std::size_t s) {
        spectra[s] = active_spectrum(cp, grid, mass, times[s], count);
    });

    EigenTrajectorySet out;
    out.times = times;
    out.energies.assign(count, std::vector<double>(times.size(), 0.0));
    out.sorted_index.assign(count, std::vector<int>(times.size(), 0));

    // Reduced nonadiabatic transport: each trajectory carries a complex
    // amplitude vector over the tracked eigenstates, advanced by the dynamical
    // phases and the signed overlap matrix between consecutive frames. A
    // trajectory is labeled by the sorted index its amplitude dominantly
    // occupies; a change of that index is an avoided crossing the state
    // passed diabatically and is recorded as an event. Narrow crossings
    // reduce to plain overlap-swap tracking; wide ones are followed
    // adiabatically, matching the path a propagated wavepacket takes.
    using cd = std::complex<double>;
    std::vector<std::vector<cd>> amp(count, std::vector<cd>(count, cd(0.0, 0.0)));
    for (std::size_t tr = 0; tr < count; ++tr) {
        amp[tr][tr] = 1.0;
        out.energies[tr][0] = spectra[0].energies[tr];
        out.sorted_index[tr][0] = static_cast<int>(tr);
    }
    std::vector<int> dominant(count);
    for (std::size_t tr = 0; tr < count; ++tr) dominant[tr] = static_cast<int>(tr);

    std::vector<std::vector<double>> overlap(count, std::vector<double>(count, 0.0));
    for (std::size_t s = 1; s < times.size(); ++s) {
        const auto& prev = spectra[s - 1];
        const auto& cur = spectra[s];
        const double dt = times[s] - times[s - 1];
        for (std::size_t a = 0; a < count; ++a)
            for (std::size_t b = 0; b < count; ++b) {
                double acc = 0.0;
                for (std::size_t j = 0; j < grid.n; ++j)
                    acc += prev.states[a][j] * cur.states[b][j];
                overlap[a][b] = acc * grid.dr;
            }

        for (std::size_t tr = 0; tr < count; ++tr) {
            auto& c = amp[tr];
            // dynamical phases over the step (midpoint energies)
            std::vector<cd> evolved(count);
            for (std::size_t a = 0; a < count; ++a) {
                const double e_mid = 0.5 * (prev.energies[a] + cur.energies[a]);
                evolved[a] = c[a] * std::polar(1.0, -e_mid * dt);
            }
            // project onto the new frame and renormalize (the tracked set is
            // not complete, so a little amplitude leaks each step)
            double norm = 0.0;
            for (std::size_t b = 0; b < count; ++b) {
                cd acc(0.0, 0.0);
                for (std::size_t a = 0; a < count; ++a) acc += overlap[a][b] * evolved[a];
                c[b] = acc;
                norm += std::norm(acc);
            }
            if (norm > 0.0) {
                const double inv = 1.0 / std::sqrt(norm);
                for (auto& z : c) z *= inv;
            }

            int top = 0, second = -1;
            for (std::size_t b = 1; b < count; ++b)
                if (std::norm(c[b]) > std::norm(c[static_cast<std::size_t>(top)]))
                    top = static_cast<int>(b);
            for (std::size_t b = 0; b < count; ++b)
                if (static_cast<int>(b) != top &&
                    (second < 0 || std::norm(c[b]) > std::norm(c[static_cast<std::size_t>(second)])))
                    second = static_cast<int>(b);

            const int prev_dom = dominant[tr];
            if (top != prev_dom) {
                const std::size_t ia = static_cast<std::size_t>(prev_dom);
                const std::size_t ib = static_cast<std::size_t>(top);
                const double gap_prev = std::abs(prev.energies[ia] - prev.energies[ib]);
                const double gap_cur = std::abs(cur.energies[ia] - cur.energies[ib]);
                const bool ambiguous =
                    second >= 0 && std::norm(c[static_cast<std::size_t>(top)]) -
                                           std::norm(c[static_cast<std::size_t>(second)]) <
                                       1e-3;
                out.events.push_back({times[s], prev_dom, top, std::min(gap_prev, gap_cur),
                                      ambiguous});
                dominant[tr] = top;
            } else if (std::abs(overlap[static_cast<std::size_t>(prev_dom)]
                                       [static_cast<std::size_t>(prev_dom)]) <
                       opts.overlap_threshold) {
                // continuity of the occupied state could not be established
                const std::size_t ia = static_cast<std::size_t>(prev_dom);
                out.events.push_back(
                    {times[s], prev_dom, prev_dom,
                     std::abs(cur.energies[std::min<std::size_t>(ia + 1, count - 1)] -
                              cur.energies[ia]),
                     true});
            }
            out.energies[tr][s] = cur.energies[static_cast<std::size_t>(dominant[tr])];
            out.sorted_index[tr][s] = dominant[tr];
        }
    }
    std::sort(out.events.begin(), out.events.end(),
              [](const TrackedEvent& a, const TrackedEvent& b) { return a.t < b.t; });

    // Eigenfunction snapshots at the nearest sample times (tracked order).
    for (double ts : opts.snapshot_times) {
        std::size_t best_s = 0;
        for (std::size_t s = 1; s < times.size(); ++s)
            if (std::abs(times[s] - ts) < std::abs(times[best_s] - ts)) best_s = s;
        out.snapshot_times.push_back(times[best_s]);
        std::vector<std::vector<double>> snap(count);
        for (std::size_t tr = 0; tr < count; ++tr)
            snap[tr] = spectra[best_s].states[static_cast<std::size_t>(out.sorted_index[tr][best_s])];
        out.snapshots.push_back(std::move(snap));
    }
    return out;
}

} // namespace lipsim
