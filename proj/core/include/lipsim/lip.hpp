#pragma once

#include <cstddef>
#include <vector>

#include "lipsim/bound_states.hpp"
#include "lipsim/coupled.hpp"
#include "lipsim/eigenfield.hpp"
#include "lipsim/grid.hpp"

namespace lipsim {

// Light-induced potentials at a fixed time: the three adiabatic surfaces
// (sorted eigenvalues of the coupling matrix at each R), the eigenvector
// frames, and the per-point index of the active surface.
//
// The active surface carries the X/Pi double-well structure: at each R the
// most-A-like eigenvector is discarded and the lower of the remaining pair
// is taken. When the pulses vanish this reduces exactly to the
// piecewise-lower of the shifted X and Pi curves, independent of where the
// detuned A curve sits.
struct LipSurface {
    double t = 0.0;                                // atomic time units
    std::array<std::vector<double>, 3> surfaces;   // sorted ascending per point
    PointwiseEigenFrame frames;
    std::vector<int> active_index;                 // 0..2 per grid point

    std::vector<double> active_potential() const;
};

LipSurface lip_at(const CoupledPotential& cp, const SpatialGrid& grid, double t);

// Bound states of the active LIP surface treated as a single-channel
// potential. Throws UnboundRequestError when fewer than `count` states lie
// below the surface's edge values.
BoundStateSet active_spectrum(const CoupledPotential& cp, const SpatialGrid& grid, double mass,
                              double t, std::size_t count);

struct TrackedEvent {
    double t = 0.0;      // atomic time units
    int state_a = 0;     // sorted index before the event
    int state_b = 0;     // sorted index after (or competing candidate if ambiguous)
    double min_gap = 0.0; // smallest |E_a - E_b| seen around the event
    bool ambiguous = false; // two assignment overlaps within 1e-3 of each other
};

// Vibrational eigenenergies of the active surface followed through time by
// wavefunction-overlap continuity rather than by sorted index. Close
// approaches between adjacent levels are classified by the Landau-Zener
// probability computed from the tracked gap minimum and sweep rate; a
// crossing traversed diabatically (P >= 1/2) swaps the trajectory labels and
// is recorded as an event, so trajectories follow the path a wavepacket
// takes rather than the strictly adiabatic branches.
struct EigenTrajectorySet {
    std::vector<double> times;                      // atomic time units
    std::vector<std::vector<double>> energies;      // [trajectory][time], hartree
    std::vector<std::vector<int>> sorted_index;     // [trajectory][time]
    std::vector<TrackedEvent> events;
    std::vector<double> snapshot_times;             // actual sample times used
    // snapshots[s][trajectory] = grid function at snapshot s
    std::vector<std::vector<std::vector<double>>> snapshots;
};

struct TrackingOptions {
    double overlap_threshold = 0.5;     // below this the step is flagged as an event
    std::vector<double> snapshot_times; // matched to the nearest sample
    unsigned threads = 1;               // sample spectra solve in parallel
};

// times must be ascending and sampled finely enough that same-state overlaps
// between consecutive samples stay above the threshold away from crossings.
EigenTrajectorySet track_trajectories(const CoupledPotential& cp, const SpatialGrid& grid,
                                      double mass, const std::vector<double>& times,
                                      std::size_t count, const TrackingOptions& opts = {});

} // namespace lipsim
