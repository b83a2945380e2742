#include "lipsim/units.hpp"

#include "lipsim/errors.hpp"

namespace lipsim::units {

double to_internal(double value, Unit unit) {
    switch (unit) {
        case Unit::Internal: return value;
        case Unit::WaveNumber: return cm1_to_hartree(value);
        case Unit::Picosecond: return ps_to_au(value);
        case Unit::Angstrom: return angstrom_to_bohr(value);
        case Unit::Amu: return amu_to_me(value);
    }
    throw ConfigError("to_internal: unknown unit tag");
}

double from_internal(double value, Unit unit) {
    switch (unit) {
        case Unit::Internal: return value;
        case Unit::WaveNumber: return hartree_to_cm1(value);
        case Unit::Picosecond: return au_to_ps(value);
        case Unit::Angstrom: return bohr_to_angstrom(value);
        case Unit::Amu: return me_to_amu(value);
    }
    throw ConfigError("from_internal: unknown unit tag");
}

Unit parse_unit(std::string_view tag) {
    if (tag == "internal") return Unit::Internal;
    if (tag == "cm-1" || tag == "cm^-1" || tag == "cm1") return Unit::WaveNumber;
    if (tag == "ps") return Unit::Picosecond;
    if (tag == "A" || tag == "angstrom") return Unit::Angstrom;
    if (tag == "amu") return Unit::Amu;
    throw ConfigError("unknown unit tag: '" + std::string(tag) +
                      "' (expected one of: cm-1, ps, A, amu, internal)");
}

} // namespace lipsim::units
