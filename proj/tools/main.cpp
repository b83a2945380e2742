#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "lipsim/errors.hpp"
#include "lipsim/scenario.hpp"
#include "lipsim/units.hpp"

namespace {

// exit codes: 0 ok, 2 config error, 3 numerical failure, 4 I/O error,
// 5 boundary-contamination watchdog
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;
constexpr int kExitBoundary = 5;

struct GlobalFlags {
    std::string out_dir;
    unsigned threads = 1;
    double dt_ps = 0.0;
    bool quiet = false;

    lipsim::RunOptions options() const {
        lipsim::RunOptions opts;
        opts.out_dir = out_dir;
        opts.threads = threads;
        if (dt_ps > 0.0) opts.dt_ps = dt_ps;
        opts.quiet = quiet;
        return opts;
    }
};

void add_global_flags(CLI::App* cmd, GlobalFlags& flags) {
    cmd->add_option("--out", flags.out_dir, "Output directory (overrides outputs.dir)");
    cmd->add_option("--threads", flags.threads, "Worker threads (affects speed only)")
        ->check(CLI::Range(1u, 256u));
    cmd->add_option("--dt", flags.dt_ps, "Override time step in ps");
    cmd->add_flag("--quiet", flags.quiet, "Suppress progress output");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lipsim: three-channel wave-packet dynamics in light-induced potentials"};
    app.require_subcommand(1);

    GlobalFlags flags;

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "Propagate a scenario config and write results");
    run_cmd->add_option("config", config_path, "Scenario config (TOML)")->required();
    add_global_flags(run_cmd, flags);

    std::string scan_path;
    auto* scan_cmd = app.add_subcommand("scan", "Run a parameter scan over a base config");
    scan_cmd->add_option("scanspec", scan_path, "Scan spec (TOML)")->required();
    add_global_flags(scan_cmd, flags);

    std::string eigen_config;
    std::string surface = "X";
    std::size_t count = 7;
    double at_ps = 0.0;
    bool states = false;
    auto* eigen_cmd = app.add_subcommand("eigen", "Bound-state query on a channel or the active LIP");
    eigen_cmd->add_option("config", eigen_config, "Scenario config (TOML)")->required();
    eigen_cmd->add_option("--surface", surface, "X, A, Pi, or active")
        ->check(CLI::IsMember({"X", "A", "Pi", "active"}));
    eigen_cmd->add_option("--count", count, "Number of states");
    eigen_cmd->add_option("--t", at_ps, "Time in ps for --surface active");
    eigen_cmd->add_flag("--states", states, "Also write the eigenfunctions");
    add_global_flags(eigen_cmd, flags);

    std::string lip_config;
    std::vector<double> lip_times;
    auto* lip_cmd = app.add_subcommand("lip", "LIP surfaces and eigenenergy trajectories (no propagation)");
    lip_cmd->add_option("config", lip_config, "Scenario config (TOML)")->required();
    lip_cmd->add_option("--times", lip_times, "Times (ps) for surface/eigenfunction dumps");
    add_global_flags(lip_cmd, flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const auto config = lipsim::load_config(config_path);
            const auto run = lipsim::run_scenario(config, flags.options());
            if (!flags.quiet) {
                std::printf("final populations: P_X=%.6f P_A=%.6f P_Pi=%.6f\n",
                            run.report.final_populations[0], run.report.final_populations[1],
                            run.report.final_populations[2]);
                std::printf("dominant final state: (%s, nu=%zu) weight %.4f\n",
                            run.report.final_well == lipsim::Well::Left ? "left" : "right",
                            run.report.final_nu, run.report.final_weight);
                std::printf("outputs written to %s\n", run.out_dir.c_str());
            }
            if (run.result.boundary_contaminated) {
                std::fprintf(stderr, "warning: boundary watchdog tripped (edge density > 1e-6)\n");
                return kExitBoundary;
            }
            return kExitOk;
        }
        if (scan_cmd->parsed()) {
            const auto spec = lipsim::load_scan(scan_path);
            auto opts = flags.options();
            if (opts.out_dir.empty()) opts.out_dir = spec.base.outputs.dir;
            const auto result = lipsim::run_scan(spec, opts);
            if (!flags.quiet)
                std::printf("scan complete: %zu cells -> %s/scan_results.csv\n",
                            result.cells.size(), opts.out_dir.c_str());
            return kExitOk;
        }
        if (eigen_cmd->parsed()) {
            const auto config = lipsim::load_config(eigen_config);
            lipsim::SurfaceChoice choice = lipsim::SurfaceChoice::X;
            if (surface == "A") choice = lipsim::SurfaceChoice::A;
            else if (surface == "Pi") choice = lipsim::SurfaceChoice::Pi;
            else if (surface == "active") choice = lipsim::SurfaceChoice::Active;
            auto opts = flags.options();
            if (opts.out_dir.empty()) opts.out_dir = config.outputs.dir;
            const auto set = lipsim::eigen_command(config, choice, at_ps, count, opts, states);
            if (!flags.quiet)
                for (std::size_t i = 0; i < set.energies.size(); ++i)
                    std::printf("E_%zu = %.6f cm^-1\n", i,
                                lipsim::units::hartree_to_cm1(set.energies[i]));
            return kExitOk;
        }
        if (lip_cmd->parsed()) {
            const auto config = lipsim::load_config(lip_config);
            auto opts = flags.options();
            const auto traj = lipsim::lip_command(config, lip_times, opts);
            if (!flags.quiet)
                std::printf("tracked %zu trajectories over %zu samples, %zu events\n",
                            traj.energies.size(), traj.times.size(), traj.events.size());
            return kExitOk;
        }
    } catch (const lipsim::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const lipsim::IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return kExitIo;
    } catch (const lipsim::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const lipsim::DomainError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    }
    return kExitOk;
}
