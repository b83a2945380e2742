#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "lipsim/curves.hpp"
#include "lipsim/grid.hpp"

namespace lipsim {

// Gaussian pulse envelope: omega(t) = omega0 * exp(-((t - t_center)/width)^2).
// omega0 is the peak Rabi frequency (energy/hbar, i.e. hartree in a.u.);
// t_center and width are in atomic time units.
struct PulseEnvelope {
    double omega0 = 0.0;
    double t_center = 0.0;
    double width = 1.0;

    double operator()(double t) const {
        const double x = (t - t_center) / width;
        return omega0 * std::exp(-x * x);
    }
};

inline double envelope(const PulseEnvelope& pulse, double t) { return pulse(t); }

// Real symmetric 3x3 matrix with the zero (X,Pi) entry of the three-channel
// coupling structure made explicit.
struct Sym3 {
    double xx = 0.0, yy = 0.0, zz = 0.0; // diagonal
    double xy = 0.0, yz = 0.0, xz = 0.0; // off-diagonal

    double trace() const { return xx + yy + zz; }
    double operator()(std::size_t i, std::size_t j) const {
        static constexpr int map[3][3] = {{0, 3, 5}, {3, 1, 4}, {5, 4, 2}};
        const double* p[6] = {&xx, &yy, &zz, &xy, &yz, &xz};
        return *p[map[i][j]];
    }
};

enum Channel : std::size_t { ChannelX = 0, ChannelA = 1, ChannelPi = 2 };

// The three diabatic curves, two detunings, and two pulses of the coupled
// three-channel problem. Detunings are measured from the curve minima; the
// shipped curve files set every minimum to zero so the detuning terms below
// shift the A and Pi channels exactly as intended.
struct CoupledPotential {
    std::array<PotentialCurve, 3> curves; // X, A, Pi
    double delta1 = 0.0;                  // energy/hbar (hartree in a.u.)
    double delta2 = 0.0;
    PulseEnvelope pulse1; // couples X <-> A
    PulseEnvelope pulse2; // couples A <-> Pi
};

// The coupling matrix at (R, t):
//   [ U_X(R)        W1(t)                0        ]
//   [ W1(t)         U_A(R) + d1          W2(t)    ]
//   [ 0             W2(t)                U_Pi(R) + d1 + d2 ]
// Exactly symmetric with an exact zero (X,Pi) entry by construction.
Sym3 coupling_matrix(const CoupledPotential& cp, double r, double t);

// coupling_matrix evaluated on every grid point at fixed t.
std::vector<Sym3> matrix_field(const CoupledPotential& cp, const SpatialGrid& grid, double t);

// Diagonal entries sampled over the grid (diabatic channel potentials,
// detuning shifts included).
std::vector<double> channel_potential(const CoupledPotential& cp, const SpatialGrid& grid,
                                      Channel channel);

} // namespace lipsim
