#include "lipsim/eigenfield.hpp"

#include <cmath>

namespace lipsim {

namespace {

inline double overlap(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// Canonical sign for the first point: largest-magnitude component positive.
void canonical_sign(std::array<double, 3>& v) {
    int imax = 0;
    for (int c = 1; c < 3; ++c)
        if (std::abs(v[c]) > std::abs(v[imax])) imax = c;
    if (v[imax] < 0.0)
        for (double& x : v) x = -x;
}

} // namespace

PointwiseEigenFrame eigenfield(const std::vector<Sym3>& field) {
    PointwiseEigenFrame out;
    out.frames.resize(field.size());
    for (std::size_t j = 0; j < field.size(); ++j)
        out.frames[j] = eig3_symmetric(field[j]);

    if (out.frames.empty()) return out;
    for (int i = 0; i < 3; ++i) canonical_sign(out.frames[0].vectors[i]);
    for (std::size_t j = 1; j < out.frames.size(); ++j) {
        for (int i = 0; i < 3; ++i) {
            auto& v = out.frames[j].vectors[i];
            if (overlap(out.frames[j - 1].vectors[i], v) < 0.0)
                for (double& x : v) x = -x;
        }
    }
    return out;
}

} // namespace lipsim
