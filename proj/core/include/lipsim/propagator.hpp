#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "lipsim/bound_states.hpp"
#include "lipsim/coupled.hpp"
#include "lipsim/eig3.hpp"
#include "lipsim/fft.hpp"
#include "lipsim/grid.hpp"

namespace lipsim {

// Three complex channel amplitudes over the grid. Normalization convention:
// norm = sum_i sum_j |psi_i(R_j)|^2 dr.
struct ChannelWavefunction {
    std::array<std::vector<std::complex<double>>, 3> channels;
    double t = 0.0; // atomic time units

    static ChannelWavefunction zero(const SpatialGrid& grid, double t = 0.0);
};

// Per-channel populations P_i = sum_j |psi_i(R_j)|^2 dr (fixed summation
// order, so results are bitwise reproducible).
std::array<double, 3> channel_norms(const ChannelWavefunction& psi, const SpatialGrid& grid);

inline double total_norm(const ChannelWavefunction& psi, const SpatialGrid& grid) {
    const auto p = channel_norms(psi, grid);
    return p[0] + p[1] + p[2];
}

enum class Well { Left, Right };

// The nu-th bound state of the chosen well's zero-field channel potential
// (X for left, detuning-shifted Pi for right), placed in that channel.
ChannelWavefunction initial_state(const CoupledPotential& cp, const SpatialGrid& grid, double mass,
                                  Well well, std::size_t nu, double t = 0.0);

struct PropagationSettings {
    double dt = 0.0;      // atomic time units, > 0
    double t_start = 0.0;
    double t_end = 0.0;
    std::size_t record_stride = 1;
    std::vector<double> snapshot_times; // rounded to the nearest step boundary
};

struct Observers {
    std::function<void(double t, const ChannelWavefunction&)> on_record;
    std::function<void(double t, const ChannelWavefunction&)> on_snapshot;
};

struct PropagationOutcome {
    ChannelWavefunction psi;
    std::size_t steps = 0;
    bool boundary_contaminated = false; // edge-density watchdog tripped
};

// Strang-split propagator for the three-channel Schroedinger equation:
// exp(-i V dt/2) exp(-i T dt) exp(-i V dt/2) per step, V frozen at the step
// midpoint time. The potential half-steps use the exact 3x3 matrix
// exponential from the pointwise symmetric eigensolver; the kinetic step is
// exact in k-space.
class Propagator {
  public:
    Propagator(const CoupledPotential& cp, const SpatialGrid& grid, double mass);

    // Advances psi by one step of size dt (dt may be negative). Throws
    // NumericalError on non-finite amplitudes, reporting the step index.
    void step(ChannelWavefunction& psi, double dt);

    const SpatialGrid& grid() const { return grid_; }
    double mass() const { return mass_; }
    std::size_t steps_taken() const { return steps_; }

  private:
    void apply_potential_half(ChannelWavefunction& psi) const;
    void refresh_eig_cache(double t_mid, double dt);

    const CoupledPotential& cp_;
    SpatialGrid grid_;
    double mass_;
    Fft1d fft_;
    std::array<std::vector<double>, 3> diag_; // time-independent diagonal of the coupling matrix
    std::vector<std::complex<double>> kin_phase_;
    double kin_dt_ = 0.0;
    bool kin_valid_ = false;
    // per-point eigenframes and half-step phases for the current step
    std::vector<Eig3> eig_;
    std::vector<std::array<std::complex<double>, 3>> phase_;
    std::size_t steps_ = 0;
};

// Runs settings.t_start -> settings.t_end, invoking observers every
// record_stride steps (always at the first and last step) and at the
// snapshot times. A final partial step is taken when the interval is not an
// integer number of steps.
PropagationOutcome propagate(ChannelWavefunction psi, const CoupledPotential& cp,
                             const SpatialGrid& grid, double mass,
                             const PropagationSettings& settings, const Observers& observers);

} // namespace lipsim
