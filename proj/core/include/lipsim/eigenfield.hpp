#pragma once

#include <cstddef>
#include <vector>

#include "lipsim/eig3.hpp"

namespace lipsim {

// Pointwise eigendecomposition of a matrix field over the grid, with
// eigenvector signs fixed by continuity along R: the overlap between the
// same-index vectors at neighboring points is kept positive.
struct PointwiseEigenFrame {
    // frames[j].values ascending at each point; frames[j].vectors[i] is the
    // i-th (sign-fixed) eigenvector at grid point j.
    std::vector<Eig3> frames;

    std::size_t size() const { return frames.size(); }
};

PointwiseEigenFrame eigenfield(const std::vector<Sym3>& field);

} // namespace lipsim
