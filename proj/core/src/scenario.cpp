#include "lipsim/scenario.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lipsim/errors.hpp"
#include "lipsim/parallel.hpp"
#include "lipsim/toml.hpp"
#include "lipsim/units.hpp"

namespace lipsim {

namespace fs = std::filesystem;

namespace {

std::string g17(double v) { return toml::format_double(v); }

std::ofstream open_out(const std::string& path) {
    const fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
        if (ec) throw IoError("cannot create directory '" + p.parent_path().string() + "'");
    }
    std::ofstream out(path, std::ios::binary); // binary: LF line endings everywhere
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

void close_out(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("write failure on '" + path + "'");
}

ScenarioConfig with_overrides(ScenarioConfig config, const RunOptions& opts) {
    if (!opts.out_dir.empty()) config.outputs.dir = opts.out_dir;
    if (opts.dt_ps) config.propagation.dt_ps = *opts.dt_ps;
    return config;
}

ScenarioRun run_core(const ScenarioConfig& config, const RunOptions& opts, bool write_files) {
    const ScenarioConfig cfg = with_overrides(config, opts);
    const SpatialGrid grid = cfg.build_grid();
    const CoupledPotential cp = cfg.build_potential();
    const double mass = cfg.mass_internal();
    const PropagationSettings settings = cfg.build_settings();

    ChannelWavefunction psi0 = initial_state(cp, grid, mass, cfg.initial.well, cfg.initial.nu,
                                             settings.t_start);

    ScenarioRun run;
    ScenarioResult& result = run.result;
    Observers obs;
    obs.on_record = [&](double t, const ChannelWavefunction& psi) {
        result.times.push_back(t);
        const auto p = channel_populations(psi, grid);
        result.populations.push_back(p);
        result.norms.push_back(p[0] + p[1] + p[2]);
    };
    obs.on_snapshot = [&](double t, const ChannelWavefunction& psi) {
        (void)t;
        result.snapshots.push_back(density_snapshot(psi, grid));
    };

    PropagationOutcome outcome = propagate(std::move(psi0), cp, grid, mass, settings, obs);
    result.boundary_contaminated = outcome.boundary_contaminated;
    result.steps = outcome.steps;
    result.final_state = std::move(outcome.psi);

    TransferOptions topts;
    topts.basis_count = cfg.analysis.projection_count;
    run.report = transfer_report(result, cp, grid, mass, cfg.initial.well, cfg.initial.nu, topts);
    run.out_dir = cfg.outputs.dir;

    if (!write_files) return run;

    const fs::path dir(cfg.outputs.dir);
    {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec && !fs::exists(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
    }

    if (cfg.outputs.populations)
        write_populations_csv((dir / "populations.csv").string(), result);
    if (cfg.outputs.transfer_report)
        write_transfer_report_csv((dir / "transfer_report.csv").string(), run.report);
    if (cfg.outputs.snapshots && !result.snapshots.empty())
        write_snapshots_lips((dir / "densities.lips").string(), grid, result.snapshots);

    // Config echo with run metadata as comments (comments keep the file
    // parse-identical to the original config).
    {
        const std::string path = (dir / "config_echo.toml").string();
        auto out = open_out(path);
        out << "# " << kVersion << "\n";
        out << "# grid: n=" << grid.n << " dr_bohr=" << g17(grid.dr) << " r_min_bohr="
            << g17(grid.r_min) << "\n";
        out << "# boundary_contaminated = " << (result.boundary_contaminated ? "true" : "false")
            << "\n";
        out << echo_config(cfg);
        close_out(out, path);
    }

    if (cfg.outputs.projections) {
        const std::string path = (dir / "projections.csv").string();
        auto out = open_out(path);
        const auto left_v = channel_potential(cp, grid, ChannelX);
        const auto right_v = channel_potential(cp, grid, ChannelPi);
        auto clamp_count = [&](const std::vector<double>& v) {
            const auto probe = bound_states(v, grid, mass, 1);
            return std::min<std::size_t>(cfg.analysis.projection_count, probe.bound_count);
        };
        const auto left_basis = bound_states(left_v, grid, mass, clamp_count(left_v));
        const auto right_basis = bound_states(right_v, grid, mass, clamp_count(right_v));
        out << "t_ps";
        for (std::size_t i = 0; i < left_basis.states.size(); ++i) out << ",wL" << i;
        for (std::size_t i = 0; i < right_basis.states.size(); ++i) out << ",wR" << i;
        out << "\n";
        // Final-state row only; per-time projections would need stored states.
        const auto wl = vibrational_projection(*result.final_state, left_basis, ChannelX, grid);
        const auto wr = vibrational_projection(*result.final_state, right_basis, ChannelPi, grid);
        out << g17(units::au_to_ps(result.times.back()));
        for (double w : wl) out << "," << g17(w);
        for (double w : wr) out << "," << g17(w);
        out << "\n";
        close_out(out, path);
    }

    if (cfg.outputs.lip_energies) {
        std::vector<double> times;
        const double step = units::ps_to_au(cfg.analysis.lip_sample_ps);
        for (double t = settings.t_start; t <= settings.t_end + 0.5 * step; t += step)
            times.push_back(std::min(t, settings.t_end));
        if (times.back() < settings.t_end) times.push_back(settings.t_end);
        TrackingOptions topts2;
        topts2.overlap_threshold = cfg.analysis.overlap_threshold;
        topts2.threads = opts.threads;
        const auto traj =
            track_trajectories(cp, grid, mass, times, cfg.analysis.lip_track_count, topts2);
        write_lip_energies_csv((dir / "lip_energies.csv").string(), traj);
        write_events_csv((dir / "events.csv").string(), traj);
    }
    return run;
}

} // namespace

ScenarioRun run_scenario(const ScenarioConfig& config, const RunOptions& opts) {
    return run_core(config, opts, true);
}

ScenarioRun run_scenario_in_memory(const ScenarioConfig& config, const RunOptions& opts) {
    return run_core(config, opts, false);
}

void write_populations_csv(const std::string& path, const ScenarioResult& result) {
    auto out = open_out(path);
    out << "t_ps,P_X,P_A,P_Pi,norm\n";
    for (std::size_t s = 0; s < result.times.size(); ++s) {
        out << g17(units::au_to_ps(result.times[s])) << "," << g17(result.populations[s][0])
            << "," << g17(result.populations[s][1]) << "," << g17(result.populations[s][2]) << ","
            << g17(result.norms[s]) << "\n";
    }
    close_out(out, path);
}

void write_transfer_report_csv(const std::string& path, const TransferReport& r) {
    auto out = open_out(path);
    out << "initial_well,initial_nu,final_well,final_nu,final_weight,P_X,P_A,P_Pi,"
           "residual_oscillation_pp\n";
    out << (r.initial_well == Well::Left ? "left" : "right") << "," << r.initial_nu << ","
        << (r.final_well == Well::Left ? "left" : "right") << "," << r.final_nu << ","
        << g17(r.final_weight) << "," << g17(r.final_populations[0]) << ","
        << g17(r.final_populations[1]) << "," << g17(r.final_populations[2]) << ","
        << g17(r.residual_oscillation) << "\n";
    close_out(out, path);
}

void write_snapshots_lips(const std::string& path, const SpatialGrid& grid,
                          const std::vector<DensitySnapshot>& snapshots) {
    static_assert(std::endian::native == std::endian::little,
                  "snapshot format is little-endian");
    auto out = open_out(path);
    auto put_u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    auto put_u64 = [&](std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    auto put_f64 = [&](double v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    out.write("LIPS", 4);
    put_u32(1u);
    put_u64(static_cast<std::uint64_t>(grid.n));
    put_f64(grid.r_min);
    put_f64(grid.dr);
    for (const auto& snap : snapshots) {
        put_f64(units::au_to_ps(snap.t));
        for (const auto& channel : snap.channel)
            for (double d : channel) put_f64(d);
        for (double d : snap.total) put_f64(d);
    }
    close_out(out, path);
}

void write_lip_energies_csv(const std::string& path, const EigenTrajectorySet& traj) {
    auto out = open_out(path);
    out << "t_ps";
    for (std::size_t i = 1; i <= traj.energies.size(); ++i) out << ",E" << i << "_cm1";
    out << "\n";
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        out << g17(units::au_to_ps(traj.times[s]));
        for (const auto& e : traj.energies)
            out << "," << g17(units::hartree_to_cm1(e[s]));
        out << "\n";
    }
    close_out(out, path);
}

void write_events_csv(const std::string& path, const EigenTrajectorySet& traj) {
    auto out = open_out(path);
    out << "t_ps,state_a,state_b,min_gap_cm1\n";
    for (const auto& ev : traj.events) {
        out << g17(units::au_to_ps(ev.t)) << "," << ev.state_a << "," << ev.state_b << ","
            << g17(units::hartree_to_cm1(ev.min_gap)) << "\n";
    }
    close_out(out, path);
}

ScanResult run_scan(const ScanSpec& spec, const RunOptions& opts) {
    std::size_t cells = 1;
    for (const auto& axis : spec.axes) {
        if (axis.values.empty()) throw ConfigError("scan axis '" + axis.path + "' is empty");
        cells *= axis.values.size();
    }
    if (cells > spec.cap)
        throw ConfigError("scan size " + std::to_string(cells) + " exceeds the job cap of " +
                          std::to_string(spec.cap));

    ScanResult result;
    for (const auto& axis : spec.axes) result.axis_paths.push_back(axis.path);
    result.cells.resize(cells);

    auto values_for = [&](std::size_t flat) {
        std::vector<double> out(spec.axes.size());
        for (std::size_t a = spec.axes.size(); a-- > 0;) {
            const auto& vals = spec.axes[a].values;
            out[a] = vals[flat % vals.size()];
            flat /= vals.size();
        }
        return out;
    };

    parallel_for_index(cells, opts.threads, [&](std::size_t flat) {
        ScanCell& cell = result.cells[flat];
        cell.axis_values = values_for(flat);
        try {
            ScenarioConfig cfg = spec.base;
            for (std::size_t a = 0; a < spec.axes.size(); ++a)
                set_config_value(cfg, spec.axes[a].path, cell.axis_values[a]);
            RunOptions cell_opts;
            cell_opts.threads = 1;
            cell_opts.quiet = true;
            const ScenarioRun run = run_scenario_in_memory(cfg, cell_opts);
            cell.final_populations = run.report.final_populations;
            if (spec.objective == "final_P_X") cell.objective = cell.final_populations[0];
            else if (spec.objective == "final_P_A") cell.objective = cell.final_populations[1];
            else if (spec.objective == "final_P_Pi") cell.objective = cell.final_populations[2];
            else {
                // final_weight: projection on the requested (well, nu)
                const SpatialGrid grid = cfg.build_grid();
                const CoupledPotential cp = cfg.build_potential();
                const double mass = cfg.mass_internal();
                const Channel ch =
                    (spec.objective_well == Well::Left) ? ChannelX : ChannelPi;
                const auto basis =
                    bound_states(channel_potential(cp, grid, ch), grid, mass,
                                 spec.objective_nu + 1);
                const auto w = vibrational_projection(*run.result.final_state, basis, ch, grid);
                cell.objective = w[spec.objective_nu];
            }
        } catch (const std::exception& e) {
            cell.status = e.what();
            cell.objective = std::nan("");
        }
    });

    // Rows merge in lexicographic axis order regardless of execution order.
    if (!opts.out_dir.empty()) {
        const std::string path = (fs::path(opts.out_dir) / "scan_results.csv").string();
        auto out = open_out(path);
        for (const auto& p : result.axis_paths) out << p << ",";
        out << "objective,P_X,P_A,P_Pi,status\n";
        for (const auto& cell : result.cells) {
            for (double v : cell.axis_values) out << g17(v) << ",";
            out << g17(cell.objective) << "," << g17(cell.final_populations[0]) << ","
                << g17(cell.final_populations[1]) << "," << g17(cell.final_populations[2]) << ","
                << (cell.status == "ok" ? "ok" : "error: " + cell.status) << "\n";
        }
        close_out(out, path);
    }
    return result;
}

BoundStateSet eigen_command(const ScenarioConfig& config, SurfaceChoice surface, double t_ps,
                            std::size_t count, const RunOptions& opts, bool write_states) {
    const SpatialGrid grid = config.build_grid();
    const CoupledPotential cp = config.build_potential();
    const double mass = config.mass_internal();

    std::vector<double> v;
    std::string tag;
    switch (surface) {
        case SurfaceChoice::X: v = channel_potential(cp, grid, ChannelX); tag = "X"; break;
        case SurfaceChoice::A: v = channel_potential(cp, grid, ChannelA); tag = "A"; break;
        case SurfaceChoice::Pi: v = channel_potential(cp, grid, ChannelPi); tag = "Pi"; break;
        case SurfaceChoice::Active: {
            const LipSurface lip = lip_at(cp, grid, units::ps_to_au(t_ps));
            v = lip.active_potential();
            tag = "active";
            break;
        }
    }
    const BoundStateSet set = bound_states(v, grid, mass, count);

    if (!opts.out_dir.empty()) {
        const fs::path dir(opts.out_dir);
        {
            const std::string path = (dir / ("eigen_" + tag + ".csv")).string();
            auto out = open_out(path);
            out << "index,E_cm1\n";
            for (std::size_t i = 0; i < set.energies.size(); ++i)
                out << i << "," << g17(units::hartree_to_cm1(set.energies[i])) << "\n";
            close_out(out, path);
        }
        if (write_states) {
            const std::string path = (dir / ("eigen_" + tag + "_states.csv")).string();
            auto out = open_out(path);
            out << "R_A";
            for (std::size_t i = 0; i < set.states.size(); ++i) out << ",phi_" << i;
            out << "\n";
            for (std::size_t j = 0; j < grid.n; ++j) {
                out << g17(units::bohr_to_angstrom(grid.r(j)));
                for (const auto& phi : set.states) out << "," << g17(phi[j]);
                out << "\n";
            }
            close_out(out, path);
        }
    }
    return set;
}

EigenTrajectorySet lip_command(const ScenarioConfig& config, const std::vector<double>& times_ps,
                               const RunOptions& opts) {
    const ScenarioConfig cfg = with_overrides(config, opts);
    const SpatialGrid grid = cfg.build_grid();
    const CoupledPotential cp = cfg.build_potential();
    const double mass = cfg.mass_internal();
    const PropagationSettings settings = cfg.build_settings();

    std::vector<double> times;
    const double step = units::ps_to_au(cfg.analysis.lip_sample_ps);
    for (double t = settings.t_start; t <= settings.t_end + 0.5 * step; t += step)
        times.push_back(std::min(t, settings.t_end));
    if (times.back() < settings.t_end) times.push_back(settings.t_end);

    TrackingOptions topts;
    topts.overlap_threshold = cfg.analysis.overlap_threshold;
    topts.threads = opts.threads;
    for (double t : times_ps) topts.snapshot_times.push_back(units::ps_to_au(t));

    const auto traj = track_trajectories(cp, grid, mass, times, cfg.analysis.lip_track_count, topts);

    const fs::path dir(cfg.outputs.dir);
    write_lip_energies_csv((dir / "lip_energies.csv").string(), traj);
    write_events_csv((dir / "events.csv").string(), traj);

    // Surface cuts and tracked eigenfunctions at each requested time.
    for (std::size_t i = 0; i < times_ps.size(); ++i) {
        const double t = units::ps_to_au(times_ps[i]);
        const LipSurface lip = lip_at(cp, grid, t);
        {
            const std::string path = (dir / ("lip_surfaces_" + std::to_string(i) + ".csv")).string();
            auto out = open_out(path);
            out << "R_A,E1_cm1,E2_cm1,E3_cm1,active_index\n";
            for (std::size_t j = 0; j < grid.n; ++j) {
                out << g17(units::bohr_to_angstrom(grid.r(j)));
                for (int s = 0; s < 3; ++s)
                    out << "," << g17(units::hartree_to_cm1(lip.surfaces[static_cast<std::size_t>(s)][j]));
                out << "," << lip.active_index[j] << "\n";
            }
            close_out(out, path);
        }
        if (i < traj.snapshots.size()) {
            const std::string path = (dir / ("lip_states_" + std::to_string(i) + ".csv")).string();
            auto out = open_out(path);
            out << "R_A";
            for (std::size_t tr = 0; tr < traj.snapshots[i].size(); ++tr) out << ",phi_" << tr;
            out << "\n";
            for (std::size_t j = 0; j < grid.n; ++j) {
                out << g17(units::bohr_to_angstrom(grid.r(j)));
                for (const auto& phi : traj.snapshots[i]) out << "," << g17(phi[j]);
                out << "\n";
            }
            close_out(out, path);
        }
    }
    return traj;
}

} // namespace lipsim
