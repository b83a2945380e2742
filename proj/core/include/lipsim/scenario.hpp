#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lipsim/analysis.hpp"
#include "lipsim/config.hpp"

namespace lipsim {

inline constexpr const char* kVersion = "lipsim 0.1.0";

struct RunOptions {
    std::string out_dir;              // overrides outputs.dir when non-empty
    unsigned threads = 1;             // affects speed only, never results
    std::optional<double> dt_ps;      // overrides propagation.dt_ps
    bool quiet = false;
};

struct ScenarioRun {
    ScenarioResult result;
    TransferReport report;
    std::string out_dir;
};

// Runs one scenario and writes the requested output files (populations.csv,
// transfer_report.csv, density snapshot binary, config_echo.toml, and
// lip_energies.csv/events.csv when enabled). Numeric file content is
// byte-identical across runs and thread counts.
ScenarioRun run_scenario(const ScenarioConfig& config, const RunOptions& opts);

// As run_scenario but without any file output (used by scans and tests).
ScenarioRun run_scenario_in_memory(const ScenarioConfig& config, const RunOptions& opts);

struct ScanCell {
    std::vector<double> axis_values;
    double objective = 0.0;
    std::array<double, 3> final_populations{};
    std::string status = "ok"; // or the error message
};

struct ScanResult {
    std::vector<std::string> axis_paths;
    std::vector<ScanCell> cells; // lexicographic axis order
};

// Expands the axes lexicographically, runs every cell (in parallel up to
// opts.threads), and writes scan_results.csv. Per-cell failures land in the
// row's status column instead of aborting the scan.
ScanResult run_scan(const ScanSpec& spec, const RunOptions& opts);

enum class SurfaceChoice { X, A, Pi, Active };

// Bound-state query on one diabatic channel or on the active light-induced
// surface at time t; writes energies (and optionally states) as CSV.
BoundStateSet eigen_command(const ScenarioConfig& config, SurfaceChoice surface, double t_ps,
                            std::size_t count, const RunOptions& opts, bool write_states);

// LIP analysis without propagation: eigenenergy trajectories over the
// propagation window plus surface/eigenfunction dumps at the given times.
EigenTrajectorySet lip_command(const ScenarioConfig& config, const std::vector<double>& times_ps,
                               const RunOptions& opts);

// --- writers (exposed for tests; paths are created as needed) ---
void write_populations_csv(const std::string& path, const ScenarioResult& result);
void write_transfer_report_csv(const std::string& path, const TransferReport& report);
void write_snapshots_lips(const std::string& path, const SpatialGrid& grid,
                          const std::vector<DensitySnapshot>& snapshots);
void write_lip_energies_csv(const std::string& path, const EigenTrajectorySet& traj);
void write_events_csv(const std::string& path, const EigenTrajectorySet& traj);

} // namespace lipsim
