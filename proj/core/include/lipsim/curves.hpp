#pragma once

#include <cstddef>
#include <variant>
#include <vector>

namespace lipsim {

// All curve parameters are stored in atomic units (energies in hartree,
// lengths in bohr); the config layer converts from spectroscopic units.

struct MorseCurve {
    double de = 0.0; // well depth
    double a = 0.0;  // inverse range parameter
    double re = 0.0; // equilibrium distance
    double v0 = 0.0; // energy offset: V(re) = v0, V(inf) = v0 + de
};

struct HarmonicCurve {
    double k = 0.0;  // force constant (energy / length^2); k = 0 gives a flat curve
    double re = 0.0;
    double v0 = 0.0;
};

// Natural cubic spline through (r, v) nodes; exact at the nodes.
// Evaluation outside [r.front(), r.back()] is a DomainError.
class TabulatedCurve {
  public:
    TabulatedCurve(std::vector<double> r, std::vector<double> v);

    double evaluate(double r) const;
    double r_min() const { return r_.front(); }
    double r_max() const { return r_.back(); }
    const std::vector<double>& nodes_r() const { return r_; }
    const std::vector<double>& nodes_v() const { return v_; }

  private:
    std::vector<double> r_;
    std::vector<double> v_;
    std::vector<double> m_; // second derivatives at nodes
};

using PotentialCurve = std::variant<MorseCurve, HarmonicCurve, TabulatedCurve>;

// Potential energy at separation r. Morse/Harmonic accept any r; Tabulated
// throws DomainError outside its node range.
double evaluate_curve(const PotentialCurve& curve, double r);

// Curve sampled on every grid point (helper for the bound-state solver and
// the LIP builder).
std::vector<double> sample_curve(const PotentialCurve& curve, const std::vector<double>& points);

} // namespace lipsim
