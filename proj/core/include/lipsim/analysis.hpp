#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lipsim/bound_states.hpp"
#include "lipsim/coupled.hpp"
#include "lipsim/grid.hpp"
#include "lipsim/lip.hpp"
#include "lipsim/propagator.hpp"

namespace lipsim {

// Per-channel and total probability densities |psi_i(R_j)|^2 (units 1/bohr).
struct DensitySnapshot {
    double t = 0.0;
    std::array<std::vector<double>, 3> channel;
    std::vector<double> total;
};

DensitySnapshot density_snapshot(const ChannelWavefunction& psi, const SpatialGrid& grid);

// Local maxima of `values` with prominence >= prominence_fraction * max.
std::size_t count_peaks(const std::vector<double>& values, double prominence_fraction);

// P_i = sum_j |psi_i(R_j)|^2 dr.
std::array<double, 3> channel_populations(const ChannelWavefunction& psi, const SpatialGrid& grid);

// w_nu = |<phi_nu, psi_channel> dr|^2 against a bound-state basis living on
// the same grid. Throws DomainError on a grid-size mismatch.
std::vector<double> vibrational_projection(const ChannelWavefunction& psi,
                                           const BoundStateSet& basis, Channel channel,
                                           const SpatialGrid& grid);

// Projection of the full three-channel state, rotated pointwise into the
// adiabatic frame, onto the active LIP surface's bound states at time t.
std::vector<double> lip_following(const ChannelWavefunction& psi, const CoupledPotential& cp,
                                  const SpatialGrid& grid, double mass, double t,
                                  std::size_t count);

// Time series gathered while a scenario runs, plus everything the reporting
// layer needs afterwards.
struct ScenarioResult {
    std::vector<double> times;                    // atomic time units
    std::vector<std::array<double, 3>> populations;
    std::vector<double> norms;
    std::vector<DensitySnapshot> snapshots;
    std::optional<ChannelWavefunction> final_state;
    bool boundary_contaminated = false;
    std::size_t steps = 0;
};

struct TransferReport {
    Well initial_well = Well::Left;
    std::size_t initial_nu = 0;
    Well final_well = Well::Left;
    std::size_t final_nu = 0;
    double final_weight = 0.0;            // projection probability on the dominant label
    std::array<double, 3> final_populations{};
    double residual_oscillation = 0.0;    // peak-to-peak of the target channel, final window
};

struct TransferOptions {
    std::size_t basis_count = 8;       // clamped to the number of bound states per well
    double oscillation_window = 0.0;   // atomic time units; 5 ps when 0
};

// Dominant final (well, nu) by maximum projection weight over the left- and
// right-well bases; requires the final-state snapshot.
TransferReport transfer_report(const ScenarioResult& result, const CoupledPotential& cp,
                               const SpatialGrid& grid, double mass, Well initial_well,
                               std::size_t initial_nu, const TransferOptions& opts = {});

} // namespace lipsim
