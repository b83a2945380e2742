#include "lipsim/curves.hpp"

#include <cmath>
#include <string>

#include "lipsim/errors.hpp"

namespace lipsim {

TabulatedCurve::TabulatedCurve(std::vector<double> r, std::vector<double> v)
    : r_(std::move(r)), v_(std::move(v)) {
    if (r_.size() < 3)
        throw ConfigError("tabulated curve needs at least 3 nodes, got " + std::to_string(r_.size()));
    if (r_.size() != v_.size())
        throw ConfigError("tabulated curve: R and V arrays differ in length");
    for (std::size_t i = 1; i < r_.size(); ++i)
        if (!(r_[i] > r_[i - 1]))
            throw ConfigError("tabulated curve: R nodes must be strictly ascending");

    // Natural cubic spline: solve the tridiagonal system for node curvatures.
    const std::size_t n = r_.size();
    m_.assign(n, 0.0);
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), sub(n, 0.0);
    diag[0] = 1.0;
    diag[n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = r_[i] - r_[i - 1];
        const double h1 = r_[i + 1] - r_[i];
        sub[i] = h0;
        diag[i] = 2.0 * (h0 + h1);
        rhs[i] = 6.0 * ((v_[i + 1] - v_[i]) / h1 - (v_[i] - v_[i - 1]) / h0);
    }
    // Thomas algorithm; the natural boundary rows are identity.
    std::vector<double> c(n, 0.0);
    c[0] = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h1 = r_[i + 1] - r_[i];
        const double denom = diag[i] - sub[i] * c[i - 1];
        c[i] = h1 / denom;
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / denom;
    }
    m_[n - 1] = 0.0;
    for (std::size_t i = n - 1; i-- > 1;)
        m_[i] = rhs[i] - c[i] * m_[i + 1];
    m_[0] = 0.0;
}

double TabulatedCurve::evaluate(double r) const {
    if (r < r_.front() || r > r_.back())
        throw DomainError("tabulated curve evaluated at R=" + std::to_string(r) +
                          " outside [" + std::to_string(r_.front()) + ", " +
                          std::to_string(r_.back()) + "]");
    // Binary search for the containing interval.
    std::size_t lo = 0, hi = r_.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (r_[mid] <= r) lo = mid;
        else hi = mid;
    }
    const double h = r_[hi] - r_[lo];
    const double t = (r - r_[lo]) / h;
    const double a = 1.0 - t;
    return a * v_[lo] + t * v_[hi] +
           h * h / 6.0 * ((a * a * a - a) * m_[lo] + (t * t * t - t) * m_[hi]);
}

double evaluate_curve(const PotentialCurve& curve, double r) {
    return std::visit(
        [r](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, MorseCurve>) {
                const double e = 1.0 - std::exp(-c.a * (r - c.re));
                return c.v0 + c.de * e * e;
            } else if constexpr (std::is_same_v<T, HarmonicCurve>) {
                const double d = r - c.re;
                return c.v0 + 0.5 * c.k * d * d;
            } else {
                return c.evaluate(r);
            }
        },
        curve);
}

std::vector<double> sample_curve(const PotentialCurve& curve, const std::vector<double>& points) {
    std::vector<double> out(points.size());
    for (std::size_t j = 0; j < points.size(); ++j) out[j] = evaluate_curve(curve, points[j]);
    return out;
}

} // namespace lipsim
