#pragma once

#include <array>
#include <cstddef>

#include "lipsim/coupled.hpp"

namespace lipsim {

struct Eig3 {
    std::array<double, 3> values;                // ascending
    std::array<std::array<double, 3>, 3> vectors; // vectors[i][c]: component c of eigenvector i
};

// Eigendecomposition of a real symmetric 3x3 matrix. Eigenvalues ascending,
// eigenvectors orthonormal, residual |A v - lambda v| <= 1e-13 * |A|_F.
//
// Uses the closed-form characteristic-cubic solution with cross-product
// eigenvectors, verified against the residual bound per call; degenerate or
// ill-conditioned cases fall back to cyclic Jacobi rotations, which converge
// unconditionally for symmetric input. NaN input throws NumericalError.
Eig3 eig3_symmetric(const Sym3& a);

// Jacobi-only path, exposed for tests (reference for the hybrid).
Eig3 eig3_jacobi(const Sym3& a);

} // namespace lipsim
