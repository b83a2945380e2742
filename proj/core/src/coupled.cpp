#include "lipsim/coupled.hpp"

namespace lipsim {

Sym3 coupling_matrix(const CoupledPotential& cp, double r, double t) {
    Sym3 m;
    m.xx = evaluate_curve(cp.curves[ChannelX], r);
    m.yy = evaluate_curve(cp.curves[ChannelA], r) + cp.delta1;
    m.zz = evaluate_curve(cp.curves[ChannelPi], r) + cp.delta1 + cp.delta2;
    m.xy = cp.pulse1(t);
    m.yz = cp.pulse2(t);
    m.xz = 0.0;
    return m;
}

std::vector<Sym3> matrix_field(const CoupledPotential& cp, const SpatialGrid& grid, double t) {
    std::vector<Sym3> out(grid.n);
    // Pulses are R-independent: evaluate once.
    const double w1 = cp.pulse1(t);
    const double w2 = cp.pulse2(t);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double r = grid.r(j);
        Sym3& m = out[j];
        m.xx = evaluate_curve(cp.curves[ChannelX], r);
        m.yy = evaluate_curve(cp.curves[ChannelA], r) + cp.delta1;
        m.zz = evaluate_curve(cp.curves[ChannelPi], r) + cp.delta1 + cp.delta2;
        m.xy = w1;
        m.yz = w2;
        m.xz = 0.0;
    }
    return out;
}

std::vector<double> channel_potential(const CoupledPotential& cp, const SpatialGrid& grid,
                                      Channel channel) {
    std::vector<double> v(grid.n);
    double shift = 0.0;
    if (channel == ChannelA) shift = cp.delta1;
    if (channel == ChannelPi) shift = cp.delta1 + cp.delta2;
    for (std::size_t j = 0; j < grid.n; ++j)
        v[j] = evaluate_curve(cp.curves[channel], grid.r(j)) + shift;
    return v;
}

} // namespace lipsim
