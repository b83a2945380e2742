#pragma once

#include <string_view>

namespace lipsim::units {

// Internal unit system is Hartree atomic units (hbar = m_e = e = a0 = 1).
// All conversion constants are CODATA-2018 derived and fixed at compile time
// so that runs are bit-reproducible.

// 1 hartree expressed in cm^-1 (hartree-inverse meter relationship / 100).
inline constexpr double kHartreeInCm1 = 219474.6313632;

// 1 atomic unit of time expressed in ps (2.4188843265857e-17 s).
inline constexpr double kAtomicTimeInPs = 2.4188843265857e-5;

// 1 bohr expressed in Angstrom.
inline constexpr double kBohrInAngstrom = 0.529177210903;

// 1 unified atomic mass unit expressed in electron masses.
inline constexpr double kAmuInElectronMass = 1822.888486209;

enum class Unit {
    Internal,   // already atomic units
    WaveNumber, // cm^-1, for energies and hbar*omega quantities
    Picosecond, // times
    Angstrom,   // lengths
    Amu,        // masses
};

// Value in `unit` -> atomic units. Throws ConfigError on an unknown tag
// (reachable only via the config layer, which maps strings to Unit).
double to_internal(double value, Unit unit);

// Atomic units -> value in `unit`.
double from_internal(double value, Unit unit);

// Convenience wrappers used throughout the scenario plumbing.
inline double cm1_to_hartree(double v) { return v / kHartreeInCm1; }
inline double hartree_to_cm1(double v) { return v * kHartreeInCm1; }
inline double ps_to_au(double v) { return v / kAtomicTimeInPs; }
inline double au_to_ps(double v) { return v * kAtomicTimeInPs; }
inline double angstrom_to_bohr(double v) { return v / kBohrInAngstrom; }
inline double bohr_to_angstrom(double v) { return v * kBohrInAngstrom; }
inline double amu_to_me(double v) { return v * kAmuInElectronMass; }
inline double me_to_amu(double v) { return v / kAmuInElectronMass; }

// Parses the unit tags used in config files ("cm-1", "ps", "A", "amu",
// "internal"); throws ConfigError otherwise.
Unit parse_unit(std::string_view tag);

} // namespace lipsim::units
