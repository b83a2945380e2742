#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lipsim/coupled.hpp"
#include "lipsim/grid.hpp"
#include "lipsim/propagator.hpp"

namespace lipsim {

// Scenario configuration mirrors the file contents: every quantity is stored
// in its config unit (cm-1 / ps / Angstrom / amu) exactly as parsed, so the
// echo file round-trips byte-identically; build_* converts to atomic units.

struct CurveSpec {
    enum class Kind { Morse, Harmonic, Tabulated };
    Kind kind = Kind::Morse;
    // Morse
    double de_cm1 = 0.0, a_invA = 0.0;
    // Harmonic
    double k_cm1_invA2 = 0.0;
    // shared
    double re_A = 0.0, v0_cm1 = 0.0;
    // Tabulated
    std::vector<double> r_A, v_cm1;

    friend bool operator==(const CurveSpec&, const CurveSpec&) = default;
};

struct PulseSpec {
    double omega_cm1 = 0.0;
    double t_center_ps = 0.0;
    double width_ps = 0.0;
    friend bool operator==(const PulseSpec&, const PulseSpec&) = default;
};

struct GridSpec {
    double r_min_A = 0.0, r_max_A = 0.0;
    std::size_t n = 0;
    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct DriveSpec {
    double delta1_cm1 = 0.0, delta2_cm1 = 0.0;
    PulseSpec pulse1, pulse2;
    friend bool operator==(const DriveSpec&, const DriveSpec&) = default;
};

struct InitialSpec {
    Well well = Well::Left;
    std::size_t nu = 0;
    friend bool operator==(const InitialSpec&, const InitialSpec&) = default;
};

struct PropagationSpec {
    double dt_ps = 0.00025; // 0.25 fs
    double t_start_ps = 0.0;
    double t_end_ps = 0.0;
    std::size_t record_stride = 200;
    std::vector<double> snapshot_times_ps;
    friend bool operator==(const PropagationSpec&, const PropagationSpec&) = default;
};

struct OutputsSpec {
    std::string dir = "out";
    bool populations = true;
    bool snapshots = true;
    bool transfer_report = true;
    bool lip_energies = false;
    bool projections = false;
    friend bool operator==(const OutputsSpec&, const OutputsSpec&) = default;
};

struct AnalysisSpec {
    std::size_t projection_count = 8;
    std::size_t lip_track_count = 5;
    double lip_sample_ps = 0.05;
    double overlap_threshold = 0.5;
    friend bool operator==(const AnalysisSpec&, const AnalysisSpec&) = default;
};

struct ScenarioConfig {
    GridSpec grid;
    double mass_amu = 0.0;
    std::array<CurveSpec, 3> curves; // X, A, Pi
    DriveSpec drive;
    InitialSpec initial;
    PropagationSpec propagation;
    OutputsSpec outputs;
    AnalysisSpec analysis;

    SpatialGrid build_grid() const;
    CoupledPotential build_potential() const;
    PropagationSettings build_settings() const;
    double mass_internal() const;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Strict parse: unknown keys, missing keys, malformed values, and
// non-physical values are distinct ConfigError diagnostics. `base_dir`
// resolves a referenced curve file; referenced files must exist at parse
// time.
ScenarioConfig parse_config(const std::string& text, const std::string& base_dir = ".");

// Reads and parses a config file; the directory of `path` becomes base_dir.
ScenarioConfig load_config(const std::string& path);

// Canonical TOML echo (curves inlined); parse_config(echo_config(c)) == c.
std::string echo_config(const ScenarioConfig& config);

// ---- parameter scans ----

struct ScanAxis {
    std::string path; // dotted config path, e.g. "drive.delta2_cm1"
    std::vector<double> values;
    friend bool operator==(const ScanAxis&, const ScanAxis&) = default;
};

struct ScanSpec {
    ScenarioConfig base;
    std::vector<ScanAxis> axes;
    std::string objective = "final_P_Pi"; // or final_P_X, final_P_A, final_weight
    Well objective_well = Well::Right;    // used by final_weight
    std::size_t objective_nu = 0;
    std::size_t cap = 64;
};

ScanSpec load_scan(const std::string& path);

// Sets one numeric config field by dotted path; throws ConfigError when the
// path does not resolve against the schema.
void set_config_value(ScenarioConfig& config, const std::string& path, double value);

} // namespace lipsim
