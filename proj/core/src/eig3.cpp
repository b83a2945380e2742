#include "lipsim/eig3.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lipsim/errors.hpp"

namespace lipsim {

namespace {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline double frobenius(const Sym3& a) {
    return std::sqrt(a.xx * a.xx + a.yy * a.yy + a.zz * a.zz +
                     2.0 * (a.xy * a.xy + a.yz * a.yz + a.xz * a.xz));
}

inline Vec3 apply(const Sym3& a, const Vec3& v) {
    return {a.xx * v[0] + a.xy * v[1] + a.xz * v[2],
            a.xy * v[0] + a.yy * v[1] + a.yz * v[2],
            a.xz * v[0] + a.yz * v[1] + a.zz * v[2]};
}

inline double residual_inf(const Sym3& a, double lambda, const Vec3& v) {
    const Vec3 av = apply(a, v);
    double r = 0.0;
    for (int c = 0; c < 3; ++c) r = std::max(r, std::abs(av[c] - lambda * v[c]));
    return r;
}

void sort_ascending(Eig3& e) {
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return e.values[i] < e.values[j]; });
    Eig3 out;
    for (int i = 0; i < 3; ++i) {
        out.values[i] = e.values[idx[i]];
        out.vectors[i] = e.vectors[idx[i]];
    }
    e = out;
}

// Closed-form eigenvalues via the trigonometric solution of the
// characteristic cubic (shifted by trace/3 for conditioning).
std::array<double, 3> eigenvalues_analytic(const Sym3& a) {
    const double q = a.trace() / 3.0;
    const double bxx = a.xx - q, byy = a.yy - q, bzz = a.zz - q;
    const double p2 = bxx * bxx + byy * byy + bzz * bzz +
                      2.0 * (a.xy * a.xy + a.yz * a.yz + a.xz * a.xz);
    const double p = std::sqrt(p2 / 6.0);
    if (p == 0.0) return {q, q, q}; // scalar matrix
    const double inv_p = 1.0 / p;
    // det(B)/2 with B = (A - q I) / p
    const double cxx = bxx * inv_p, cyy = byy * inv_p, czz = bzz * inv_p;
    const double cxy = a.xy * inv_p, cyz = a.yz * inv_p, cxz = a.xz * inv_p;
    const double half_det = 0.5 * (cxx * (cyy * czz - cyz * cyz) - cxy * (cxy * czz - cyz * cxz) +
                                   cxz * (cxy * cyz - cyy * cxz));
    const double r = std::clamp(half_det, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double two_pi_3 = 2.0943951023931953;
    const double e0 = q + 2.0 * p * std::cos(phi + two_pi_3); // smallest
    const double e2 = q + 2.0 * p * std::cos(phi);            // largest
    const double e1 = 3.0 * q - e0 - e2;                      // trace identity
    return {e0, e1, e2};
}

// Eigenvector for a given eigenvalue: the largest cross product of two rows
// of (A - lambda I). Returns false when all cross products are too small
// (degenerate subspace).
bool eigenvector_for(const Sym3& a, double lambda, double scale, Vec3& out) {
    const Vec3 row0 = {a.xx - lambda, a.xy, a.xz};
    const Vec3 row1 = {a.xy, a.yy - lambda, a.yz};
    const Vec3 row2 = {a.xz, a.yz, a.zz - lambda};
    const Vec3 c01 = cross(row0, row1);
    const Vec3 c02 = cross(row0, row2);
    const Vec3 c12 = cross(row1, row2);
    const double n01 = dot(c01, c01), n02 = dot(c02, c02), n12 = dot(c12, c12);
    const Vec3* best = &c01;
    double best_n = n01;
    if (n02 > best_n) { best = &c02; best_n = n02; }
    if (n12 > best_n) { best = &c12; best_n = n12; }
    const double floor2 = 1e-24 * scale * scale * scale * scale;
    if (!(best_n > floor2)) return false;
    const double inv = 1.0 / std::sqrt(best_n);
    out = {(*best)[0] * inv, (*best)[1] * inv, (*best)[2] * inv};
    return true;
}

} // namespace

Eig3 eig3_jacobi(const Sym3& a) {
    double m[3][3] = {{a.xx, a.xy, a.xz}, {a.xy, a.yy, a.yz}, {a.xz, a.yz, a.zz}};
    double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    for (int sweep = 0; sweep < 32; ++sweep) {
        double off = std::abs(m[0][1]) + std::abs(m[0][2]) + std::abs(m[1][2]);
        if (off == 0.0) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                const double apq = m[p][q];
                if (apq == 0.0) continue;
                const double diff = m[q][q] - m[p][p];
                double t;
                if (std::abs(apq) < 1e-300 * std::abs(diff)) {
                    t = apq / diff;
                } else {
                    const double theta = 0.5 * diff / apq;
                    t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                const double h = t * apq;
                m[p][p] -= h;
                m[q][q] += h;
                m[p][q] = 0.0;
                m[q][p] = 0.0;
                for (int r = 0; r < 3; ++r) {
                    if (r != p && r != q) {
                        const double mrp = m[r][p], mrq = m[r][q];
                        m[r][p] = mrp - s * (mrq + tau * mrp);
                        m[p][r] = m[r][p];
                        m[r][q] = mrq + s * (mrp - tau * mrq);
                        m[q][r] = m[r][q];
                    }
                    const double vrp = v[r][p], vrq = v[r][q];
                    v[r][p] = vrp - s * (vrq + tau * vrp);
                    v[r][q] = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    Eig3 e;
    for (int i = 0; i < 3; ++i) {
        e.values[i] = m[i][i];
        e.vectors[i] = {v[0][i], v[1][i], v[2][i]};
    }
    sort_ascending(e);
    return e;
}

Eig3 eig3_symmetric(const Sym3& a) {
    const double entries[6] = {a.xx, a.yy, a.zz, a.xy, a.yz, a.xz};
    for (double x : entries)
        if (std::isnan(x)) throw NumericalError("eig3_symmetric: NaN input");

    const double scale = frobenius(a);

    // Fast path: already diagonal (exact zeros appear whenever the pulses are
    // off or have underflowed).
    if (a.xy == 0.0 && a.yz == 0.0 && a.xz == 0.0) {
        Eig3 e;
        e.values = {a.xx, a.yy, a.zz};
        e.vectors = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
        sort_ascending(e);
        return e;
    }

    const auto vals = eigenvalues_analytic(a);
    Eig3 e;
    e.values = vals;
    const double tol = 1e-13 * scale;

    // Extreme eigenvalues are the best conditioned for the cross-product
    // construction; the middle vector completes the right-handed frame.
    Vec3 v0, v2;
    bool ok = eigenvector_for(a, vals[0], scale, v0) && eigenvector_for(a, vals[2], scale, v2);
    if (ok) {
        // Re-orthogonalize the pair (guards close eigenvalues), then verify.
        const double d = dot(v0, v2);
        if (std::abs(d) > 1e-8) {
            for (int c = 0; c < 3; ++c) v2[c] -= d * v0[c];
            const double nv = norm(v2);
            ok = nv > 1e-6;
            if (ok)
                for (int c = 0; c < 3; ++c) v2[c] /= nv;
        }
    }
    if (ok) {
        const Vec3 v1 = cross(v2, v0);
        e.vectors = {v0, v1, v2};
        if (residual_inf(a, vals[0], v0) <= tol && residual_inf(a, vals[1], v1) <= tol &&
            residual_inf(a, vals[2], v2) <= tol) {
            return e;
        }
    }
    return eig3_jacobi(a);
}

} // namespace lipsim
