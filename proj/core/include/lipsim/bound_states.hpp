#pragma once

#include <cstddef>
#include <vector>

#include "lipsim/grid.hpp"

namespace lipsim {

// Bound states of a single-channel potential sampled on the grid.
// Kinetic energy is exact in the spectral (periodic Fourier) basis; the
// discretized Hamiltonian is diagonalized densely.
struct BoundStateSet {
    std::vector<double> energies;            // ascending, hartree
    std::vector<std::vector<double>> states; // real grid functions, sum(phi^2) dr = 1
    std::size_t bound_count = 0;             // states below min(V[0], V[n-1])
};

struct BoundStateOptions {
    // When true (default), a truncated low-|k| spectral basis is tried first
    // and verified against the full-grid Hamiltonian residual; on any gate
    // failure the solver redoes the computation with the full dense matrix.
    bool allow_truncated_basis = true;
    // Residual gate for the truncated path: |H phi - E phi| <= gate * |H phi|.
    double residual_gate = 1e-9;
};

// Returns the `count` lowest bound eigenpairs. Throws UnboundRequestError if
// fewer than `count` states lie below the potential's edge values.
BoundStateSet bound_states(const std::vector<double>& potential, const SpatialGrid& grid,
                           double mass, std::size_t count, const BoundStateOptions& opts = {});

// H phi with the same spectral kinetic operator the solver uses (one FFT
// round trip). Exposed so residual checks can be written against the
// operator definition rather than the solver internals.
std::vector<double> apply_grid_hamiltonian(const std::vector<double>& potential,
                                           const SpatialGrid& grid, double mass,
                                           const std::vector<double>& phi);

} // namespace lipsim
