#include "lipsim/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "lipsim/errors.hpp"
#include "lipsim/toml.hpp"
#include "lipsim/units.hpp"

namespace lipsim {

namespace fs = std::filesystem;

namespace {

// Tracks which keys the schema consumed so leftovers can be rejected.
struct Reader {
    const toml::Document& doc;
    std::set<std::string> consumed;

    const toml::Value* find(const std::string& key) {
        auto it = doc.values.find(key);
        if (it == doc.values.end()) return nullptr;
        consumed.insert(key);
        return &it->second;
    }
    const toml::Value& require(const std::string& key) {
        const toml::Value* v = find(key);
        if (!v) throw ConfigError("missing required key '" + key + "'");
        return *v;
    }
    double number(const std::string& key) {
        const toml::Value& v = require(key);
        if (!v.is_number())
            throw ConfigError("key '" + key + "' (line " + std::to_string(v.line) +
                              ") must be a number");
        return v.as_number();
    }
    double number_or(const std::string& key, double fallback) {
        const toml::Value* v = find(key);
        if (!v) return fallback;
        if (!v->is_number())
            throw ConfigError("key '" + key + "' (line " + std::to_string(v->line) +
                              ") must be a number");
        return v->as_number();
    }
    std::size_t index(const std::string& key) {
        const toml::Value& v = require(key);
        if (v.kind != toml::Value::Kind::Integer || v.integer < 0)
            throw ConfigError("key '" + key + "' (line " + std::to_string(v.line) +
                              ") must be a non-negative integer");
        return static_cast<std::size_t>(v.integer);
    }
    std::size_t index_or(const std::string& key, std::size_t fallback) {
        if (!doc.has(key)) return fallback;
        return index(key);
    }
    std::string string(const std::string& key) {
        const toml::Value& v = require(key);
        if (v.kind != toml::Value::Kind::String)
            throw ConfigError("key '" + key + "' (line " + std::to_string(v.line) +
                              ") must be a string");
        return v.str;
    }
    std::string string_or(const std::string& key, const std::string& fallback) {
        if (!doc.has(key)) return fallback;
        return string(key);
    }
    bool flag_or(const std::string& key, bool fallback) {
        const toml::Value* v = find(key);
        if (!v) return fallback;
        if (v->kind != toml::Value::Kind::Boolean)
            throw ConfigError("key '" + key + "' (line " + std::to_string(v->line) +
                              ") must be true or false");
        return v->boolean;
    }
    std::vector<double> number_array_or(const std::string& key) {
        const toml::Value* v = find(key);
        if (!v) return {};
        if (v->kind != toml::Value::Kind::Array)
            throw ConfigError("key '" + key + "' (line " + std::to_string(v->line) +
                              ") must be an array");
        std::vector<double> out;
        for (const auto& e : v->array) {
            if (!e.is_number())
                throw ConfigError("array '" + key + "' (line " + std::to_string(v->line) +
                                  ") must contain numbers only");
            out.push_back(e.as_number());
        }
        return out;
    }
    void reject_unknown(const std::string& context) const {
        for (const auto& [key, value] : doc.values) {
            if (!consumed.count(key))
                throw ConfigError("unknown key '" + key + "' (line " +
                                  std::to_string(value.line) + ") in " + context);
        }
    }
};

CurveSpec read_curve(Reader& r, const std::string& prefix) {
    CurveSpec c;
    const std::string type = r.string(prefix + ".type");
    if (type == "morse") {
        c.kind = CurveSpec::Kind::Morse;
        c.de_cm1 = r.number(prefix + ".de_cm1");
        c.a_invA = r.number(prefix + ".a_invA");
        c.re_A = r.number(prefix + ".re_A");
        c.v0_cm1 = r.number_or(prefix + ".v0_cm1", 0.0);
        if (!(c.de_cm1 > 0.0) || !(c.a_invA > 0.0))
            throw ConfigError("curve '" + prefix + "': de_cm1 and a_invA must be positive");
    } else if (type == "harmonic") {
        c.kind = CurveSpec::Kind::Harmonic;
        c.k_cm1_invA2 = r.number(prefix + ".k_cm1_invA2");
        c.re_A = r.number(prefix + ".re_A");
        c.v0_cm1 = r.number_or(prefix + ".v0_cm1", 0.0);
        if (c.k_cm1_invA2 < 0.0)
            throw ConfigError("curve '" + prefix + "': k_cm1_invA2 must be non-negative");
    } else if (type == "tabulated") {
        c.kind = CurveSpec::Kind::Tabulated;
        c.r_A = r.number_array_or(prefix + ".r_A");
        c.v_cm1 = r.number_array_or(prefix + ".v_cm1");
        if (c.r_A.empty() || c.v_cm1.empty())
            throw ConfigError("curve '" + prefix + "': tabulated curves need r_A and v_cm1 arrays");
        if (c.r_A.size() != c.v_cm1.size())
            throw ConfigError("curve '" + prefix + "': r_A and v_cm1 lengths differ");
    } else {
        throw ConfigError("curve '" + prefix + "': unknown type '" + type +
                          "' (expected morse, harmonic, or tabulated)");
    }
    return c;
}

PulseSpec read_pulse(Reader& r, const std::string& prefix) {
    PulseSpec p;
    p.omega_cm1 = r.number(prefix + ".omega_cm1");
    p.t_center_ps = r.number(prefix + ".t_center_ps");
    p.width_ps = r.number(prefix + ".width_ps");
    if (!(p.width_ps > 0.0))
        throw ConfigError("pulse '" + prefix + "': width_ps must be positive");
    if (p.omega_cm1 < 0.0)
        throw ConfigError("pulse '" + prefix + "': omega_cm1 must be non-negative");
    return p;
}

std::array<CurveSpec, 3> read_curves(Reader& r, const std::string& base_dir);

ScenarioConfig parse_document(const toml::Document& doc, const std::string& base_dir) {
    // Fail early with the full block list when nothing usable is present.
    static const char* kRequired[] = {"mass_amu", "[grid]", "[curves]", "[drive]",
                                      "[initial]", "[propagation]"};
    bool any = false;
    for (const auto& [key, value] : doc.values) (void)value, any = true;
    if (!any) {
        std::string msg = "empty configuration; required:";
        for (const char* b : kRequired) msg += std::string(" ") + b;
        throw ConfigError(msg);
    }

    Reader r{doc, {}};
    ScenarioConfig cfg;

    cfg.mass_amu = r.number("mass_amu");
    if (!(cfg.mass_amu > 0.0)) throw ConfigError("mass_amu must be positive");

    cfg.grid.r_min_A = r.number("grid.r_min_A");
    cfg.grid.r_max_A = r.number("grid.r_max_A");
    cfg.grid.n = r.index("grid.n");
    if (!(cfg.grid.r_max_A > cfg.grid.r_min_A))
        throw ConfigError("grid: r_max_A must exceed r_min_A");
    if (cfg.grid.n < 64 || !is_power_of_two(cfg.grid.n))
        throw ConfigError("grid.n must be a power of two >= 64, got " +
                          std::to_string(cfg.grid.n));

    cfg.curves = read_curves(r, base_dir);

    cfg.drive.delta1_cm1 = r.number("drive.delta1_cm1");
    cfg.drive.delta2_cm1 = r.number("drive.delta2_cm1");
    cfg.drive.pulse1 = read_pulse(r, "drive.pulse1");
    cfg.drive.pulse2 = read_pulse(r, "drive.pulse2");

    const std::string well = r.string("initial.well");
    if (well == "left") cfg.initial.well = Well::Left;
    else if (well == "right") cfg.initial.well = Well::Right;
    else throw ConfigError("initial.well must be \"left\" or \"right\", got \"" + well + "\"");
    cfg.initial.nu = r.index("initial.nu");

    cfg.propagation.dt_ps = r.number("propagation.dt_ps");
    cfg.propagation.t_start_ps = r.number("propagation.t_start_ps");
    cfg.propagation.t_end_ps = r.number("propagation.t_end_ps");
    cfg.propagation.record_stride = r.index_or("propagation.record_stride", 200);
    cfg.propagation.snapshot_times_ps = r.number_array_or("propagation.snapshot_times_ps");
    if (!(cfg.propagation.dt_ps > 0.0)) throw ConfigError("propagation.dt_ps must be positive");
    if (cfg.propagation.t_end_ps < cfg.propagation.t_start_ps)
        throw ConfigError("propagation: t_end_ps must be >= t_start_ps");
    if (cfg.propagation.record_stride < 1)
        throw ConfigError("propagation.record_stride must be >= 1");

    cfg.outputs.dir = r.string_or("outputs.dir", "out");
    cfg.outputs.populations = r.flag_or("outputs.populations", true);
    cfg.outputs.snapshots = r.flag_or("outputs.snapshots", true);
    cfg.outputs.transfer_report = r.flag_or("outputs.transfer_report", true);
    cfg.outputs.lip_energies = r.flag_or("outputs.lip_energies", false);
    cfg.outputs.projections = r.flag_or("outputs.projections", false);

    cfg.analysis.projection_count = r.index_or("analysis.projection_count", 8);
    cfg.analysis.lip_track_count = r.index_or("analysis.lip_track_count", 5);
    cfg.analysis.lip_sample_ps = r.number_or("analysis.lip_sample_ps", 0.05);
    cfg.analysis.overlap_threshold = r.number_or("analysis.overlap_threshold", 0.5);
    if (cfg.analysis.projection_count < 1 || cfg.analysis.lip_track_count < 1)
        throw ConfigError("analysis: projection_count and lip_track_count must be >= 1");
    if (!(cfg.analysis.lip_sample_ps > 0.0))
        throw ConfigError("analysis.lip_sample_ps must be positive");

    r.reject_unknown("scenario config");
    return cfg;
}

std::array<CurveSpec, 3> read_curves(Reader& r, const std::string& base_dir) {
    if (r.doc.has("curves.file")) {
        const std::string rel = r.string("curves.file");
        const fs::path path = fs::path(base_dir) / rel;
        if (!fs::exists(path))
            throw ConfigError("curves.file references '" + path.string() +
                              "' which does not exist");
        std::ifstream in(path);
        std::stringstream buf;
        buf << in.rdbuf();
        toml::Document curve_doc;
        try {
            curve_doc = toml::parse(buf.str());
        } catch (const ConfigError& e) {
            throw ConfigError("in curve file '" + path.string() + "': " + e.what());
        }
        Reader cr{curve_doc, {}};
        std::array<CurveSpec, 3> out = {read_curve(cr, "X"), read_curve(cr, "A"),
                                        read_curve(cr, "Pi")};
        cr.reject_unknown("curve file '" + path.string() + "'");
        return out;
    }
    return {read_curve(r, "curves.X"), read_curve(r, "curves.A"), read_curve(r, "curves.Pi")};
}

PotentialCurve build_curve(const CurveSpec& spec) {
    using namespace units;
    switch (spec.kind) {
        case CurveSpec::Kind::Morse: {
            MorseCurve c;
            c.de = cm1_to_hartree(spec.de_cm1);
            c.a = spec.a_invA * kBohrInAngstrom; // 1/A -> 1/bohr
            c.re = angstrom_to_bohr(spec.re_A);
            c.v0 = cm1_to_hartree(spec.v0_cm1);
            return c;
        }
        case CurveSpec::Kind::Harmonic: {
            HarmonicCurve c;
            c.k = cm1_to_hartree(spec.k_cm1_invA2) * kBohrInAngstrom * kBohrInAngstrom;
            c.re = angstrom_to_bohr(spec.re_A);
            c.v0 = cm1_to_hartree(spec.v0_cm1);
            return c;
        }
        case CurveSpec::Kind::Tabulated: {
            std::vector<double> r(spec.r_A.size()), v(spec.v_cm1.size());
            for (std::size_t i = 0; i < r.size(); ++i) r[i] = angstrom_to_bohr(spec.r_A[i]);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = cm1_to_hartree(spec.v_cm1[i]);
            return TabulatedCurve(std::move(r), std::move(v));
        }
    }
    throw ConfigError("build_curve: unreachable curve kind");
}

} // namespace

SpatialGrid ScenarioConfig::build_grid() const {
    return make_grid(units::angstrom_to_bohr(grid.r_min_A), units::angstrom_to_bohr(grid.r_max_A),
                     grid.n);
}

CoupledPotential ScenarioConfig::build_potential() const {
    using namespace units;
    CoupledPotential cp;
    cp.curves = {build_curve(curves[0]), build_curve(curves[1]), build_curve(curves[2])};
    cp.delta1 = cm1_to_hartree(drive.delta1_cm1);
    cp.delta2 = cm1_to_hartree(drive.delta2_cm1);
    cp.pulse1 = {cm1_to_hartree(drive.pulse1.omega_cm1), ps_to_au(drive.pulse1.t_center_ps),
                 ps_to_au(drive.pulse1.width_ps)};
    cp.pulse2 = {cm1_to_hartree(drive.pulse2.omega_cm1), ps_to_au(drive.pulse2.t_center_ps),
                 ps_to_au(drive.pulse2.width_ps)};
    return cp;
}

PropagationSettings ScenarioConfig::build_settings() const {
    using namespace units;
    PropagationSettings s;
    s.dt = ps_to_au(propagation.dt_ps);
    s.t_start = ps_to_au(propagation.t_start_ps);
    s.t_end = ps_to_au(propagation.t_end_ps);
    s.record_stride = propagation.record_stride;
    for (double t : propagation.snapshot_times_ps) s.snapshot_times.push_back(ps_to_au(t));
    return s;
}

double ScenarioConfig::mass_internal() const { return units::amu_to_me(mass_amu); }

ScenarioConfig parse_config(const std::string& text, const std::string& base_dir) {
    return parse_document(toml::parse(text), base_dir);
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const fs::path dir = fs::path(path).parent_path();
    return parse_config(buf.str(), dir.empty() ? "." : dir.string());
}

namespace {

void emit_curve(std::ostream& os, const char* name, const CurveSpec& c) {
    os << "[curves." << name << "]\n";
    switch (c.kind) {
        case CurveSpec::Kind::Morse:
            os << "type = \"morse\"\n";
            os << "de_cm1 = " << toml::format_double(c.de_cm1) << "\n";
            os << "a_invA = " << toml::format_double(c.a_invA) << "\n";
            os << "re_A = " << toml::format_double(c.re_A) << "\n";
            os << "v0_cm1 = " << toml::format_double(c.v0_cm1) << "\n";
            break;
        case CurveSpec::Kind::Harmonic:
            os << "type = \"harmonic\"\n";
            os << "k_cm1_invA2 = " << toml::format_double(c.k_cm1_invA2) << "\n";
            os << "re_A = " << toml::format_double(c.re_A) << "\n";
            os << "v0_cm1 = " << toml::format_double(c.v0_cm1) << "\n";
            break;
        case CurveSpec::Kind::Tabulated: {
            os << "type = \"tabulated\"\n";
            os << "r_A = [";
            for (std::size_t i = 0; i < c.r_A.size(); ++i)
                os << (i ? ", " : "") << toml::format_double(c.r_A[i]);
            os << "]\n";
            os << "v_cm1 = [";
            for (std::size_t i = 0; i < c.v_cm1.size(); ++i)
                os << (i ? ", " : "") << toml::format_double(c.v_cm1[i]);
            os << "]\n";
            break;
        }
    }
    os << "\n";
}

} // namespace

std::string echo_config(const ScenarioConfig& c) {
    std::ostringstream os;
    os << "mass_amu = " << toml::format_double(c.mass_amu) << "\n\n";
    os << "[grid]\n";
    os << "r_min_A = " << toml::format_double(c.grid.r_min_A) << "\n";
    os << "r_max_A = " << toml::format_double(c.grid.r_max_A) << "\n";
    os << "n = " << c.grid.n << "\n\n";
    emit_curve(os, "X", c.curves[0]);
    emit_curve(os, "A", c.curves[1]);
    emit_curve(os, "Pi", c.curves[2]);
    os << "[drive]\n";
    os << "delta1_cm1 = " << toml::format_double(c.drive.delta1_cm1) << "\n";
    os << "delta2_cm1 = " << toml::format_double(c.drive.delta2_cm1) << "\n\n";
    os << "[drive.pulse1]\n";
    os << "omega_cm1 = " << toml::format_double(c.drive.pulse1.omega_cm1) << "\n";
    os << "t_center_ps = " << toml::format_double(c.drive.pulse1.t_center_ps) << "\n";
    os << "width_ps = " << toml::format_double(c.drive.pulse1.width_ps) << "\n\n";
    os << "[drive.pulse2]\n";
    os << "omega_cm1 = " << toml::format_double(c.drive.pulse2.omega_cm1) << "\n";
    os << "t_center_ps = " << toml::format_double(c.drive.pulse2.t_center_ps) << "\n";
    os << "width_ps = " << toml::format_double(c.drive.pulse2.width_ps) << "\n\n";
    os << "[initial]\n";
    os << "well = \"" << (c.initial.well == Well::Left ? "left" : "right") << "\"\n";
    os << "nu = " << c.initial.nu << "\n\n";
    os << "[propagation]\n";
    os << "dt_ps = " << toml::format_double(c.propagation.dt_ps) << "\n";
    os << "t_start_ps = " << toml::format_double(c.propagation.t_start_ps) << "\n";
    os << "t_end_ps = " << toml::format_double(c.propagation.t_end_ps) << "\n";
    os << "record_stride = " << c.propagation.record_stride << "\n";
    os << "snapshot_times_ps = [";
    for (std::size_t i = 0; i < c.propagation.snapshot_times_ps.size(); ++i)
        os << (i ? ", " : "") << toml::format_double(c.propagation.snapshot_times_ps[i]);
    os << "]\n\n";
    os << "[outputs]\n";
    os << "dir = \"" << c.outputs.dir << "\"\n";
    os << "populations = " << (c.outputs.populations ? "true" : "false") << "\n";
    os << "snapshots = " << (c.outputs.snapshots ? "true" : "false") << "\n";
    os << "transfer_report = " << (c.outputs.transfer_report ? "true" : "false") << "\n";
    os << "lip_energies = " << (c.outputs.lip_energies ? "true" : "false") << "\n";
    os << "projections = " << (c.outputs.projections ? "true" : "false") << "\n\n";
    os << "[analysis]\n";
    os << "projection_count = " << c.analysis.projection_count << "\n";
    os << "lip_track_count = " << c.analysis.lip_track_count << "\n";
    os << "lip_sample_ps = " << toml::format_double(c.analysis.lip_sample_ps) << "\n";
    os << "overlap_threshold = " << toml::format_double(c.analysis.overlap_threshold) << "\n";
    return os.str();
}

namespace {

struct ScanDoc {
    toml::Document doc;
    std::string base_dir;
};

} // namespace

ScanSpec load_scan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scan file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const fs::path dir = fs::path(path).parent_path();
    const std::string base_dir = dir.empty() ? "." : dir.string();

    const toml::Document doc = toml::parse(buf.str());
    Reader r{doc, {}};

    ScanSpec spec;
    const std::string base_rel = r.string("scan.base");
    const fs::path base_path = fs::path(base_dir) / base_rel;
    if (!fs::exists(base_path))
        throw ConfigError("scan.base references '" + base_path.string() + "' which does not exist");
    spec.base = load_config(base_path.string());
    spec.cap = r.index_or("scan.cap", 64);
    spec.objective = r.string_or("scan.objective", "final_P_Pi");
    if (spec.objective == "final_weight") {
        const std::string well = r.string("scan.objective_well");
        if (well == "left") spec.objective_well = Well::Left;
        else if (well == "right") spec.objective_well = Well::Right;
        else throw ConfigError("scan.objective_well must be \"left\" or \"right\"");
        spec.objective_nu = r.index("scan.objective_nu");
    } else if (spec.objective != "final_P_Pi" && spec.objective != "final_P_X" &&
               spec.objective != "final_P_A") {
        throw ConfigError("scan.objective must be one of final_P_X, final_P_A, final_P_Pi, "
                          "final_weight");
    }

    for (const auto& [suffix, value] : doc.items_under("axes")) {
        r.consumed.insert("axes." + suffix);
        if (value->kind != toml::Value::Kind::Array || value->array.empty())
            throw ConfigError("scan axis '" + suffix + "' must be a non-empty array");
        ScanAxis axis;
        axis.path = suffix;
        for (const auto& e : value->array) {
            if (!e.is_number())
                throw ConfigError("scan axis '" + suffix + "' must contain numbers");
            axis.values.push_back(e.as_number());
        }
        // Validate the path resolves before running anything.
        ScenarioConfig probe = spec.base;
        set_config_value(probe, axis.path, axis.values.front());
        spec.axes.push_back(std::move(axis));
    }
    if (spec.axes.empty()) throw ConfigError("scan: [axes] must define at least one axis");

    r.reject_unknown("scan spec");
    return spec;
}

void set_config_value(ScenarioConfig& c, const std::string& path, double value) {
    auto as_index = [&](const char* what) {
        if (value < 0.0 || std::floor(value) != value)
            throw ConfigError(std::string("scan value for ") + what +
                              " must be a non-negative integer");
        return static_cast<std::size_t>(value);
    };
    if (path == "mass_amu") c.mass_amu = value;
    else if (path == "drive.delta1_cm1") c.drive.delta1_cm1 = value;
    else if (path == "drive.delta2_cm1") c.drive.delta2_cm1 = value;
    else if (path == "drive.pulse1.omega_cm1") c.drive.pulse1.omega_cm1 = value;
    else if (path == "drive.pulse1.t_center_ps") c.drive.pulse1.t_center_ps = value;
    else if (path == "drive.pulse1.width_ps") c.drive.pulse1.width_ps = value;
    else if (path == "drive.pulse2.omega_cm1") c.drive.pulse2.omega_cm1 = value;
    else if (path == "drive.pulse2.t_center_ps") c.drive.pulse2.t_center_ps = value;
    else if (path == "drive.pulse2.width_ps") c.drive.pulse2.width_ps = value;
    else if (path == "initial.nu") c.initial.nu = as_index("initial.nu");
    else if (path == "propagation.dt_ps") c.propagation.dt_ps = value;
    else if (path == "propagation.t_end_ps") c.propagation.t_end_ps = value;
    else
        throw ConfigError("scan parameter path '" + path +
                          "' does not resolve against the config schema");
}

} // namespace lipsim
