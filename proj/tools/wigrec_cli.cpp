// wigrec: reconstruct quasiprobability maps of a decaying cavity field
// from simulated photon statistics, and validate the algebra behind it.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "wigrec/io.hpp"
#include "wigrec/recon.hpp"
#include "wigrec/validate.hpp"

namespace fs = std::filesystem;
using namespace wigrec;

namespace {

void print_error_record(const std::string& kind, const std::string& message) {
    nlohmann::json record;
    record["error"]["kind"] = kind;
    record["error"]["message"] = message;
    std::cerr << record.dump() << "\n";
}

int exit_code_for(const Error& e) { return e.kind() == ErrorKind::config ? 2 : 1; }

std::string meta_text(const RunConfig& cfg, const QuasiprobGrid& grid) {
    std::ostringstream out;
    out << "# wigrec run metadata; the key=value body is a re-parseable config\n";
    out << to_config_text(cfg);
    out << "# summary.points = " << grid.points() << "\n";
    out << "# summary.min = " << detail::fmt_double(grid.min_value()) << "\n";
    out << "# summary.max = " << detail::fmt_double(grid.max_value()) << "\n";
    out << "# summary.max_tail_bound = " << detail::fmt_double(grid.max_tail_bound) << "\n";
    out << "# summary.uncertified_points = " << grid.uncertified.size() << "\n";
    return out.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
    out << text;
}

/// Per-point inversion traces, regenerated from the same deterministic
/// streams the reconstruction consumed.
std::string traces_text(const RunConfig& cfg) {
    const ReconPlan& plan = cfg.plan;
    auto rho0 = initial_density(plan.state, plan.dim);
    std::ostringstream out;
    out << "# point,x,y,tau,value\n";
    const int nx = static_cast<int>(plan.x_axis.size());
    const int points = nx * static_cast<int>(plan.y_axis.size());
    for (int idx = 0; idx < points; ++idx) {
        const complexd beta{plan.x_axis[idx % nx], plan.y_axis[idx / nx]};
        const complexd alpha = drive_for_target(-beta, plan.gamma, plan.t_d);
        const complexd beta_eff = effective_drive_amplitude({alpha, plan.t_d}, plan.gamma);
        auto p = damp_diagonal(number_distribution(displace(rho0.value, -beta_eff)),
                               DecayParams(plan.gamma, plan.t_d + plan.t_meas));
        auto trace = sample_trace(p, plan.probe, static_cast<std::uint64_t>(idx));
        for (size_t i = 0; i < trace.taus.size(); ++i)
            out << idx << ',' << detail::fmt_double(beta.real()) << ',' << detail::fmt_double(beta.imag())
                << ',' << detail::fmt_double(trace.taus[i]) << ',' << detail::fmt_double(trace.values[i])
                << "\n";
    }
    return out.str();
}

int cmd_reconstruct(const RunConfig& cfg, const std::string& out_dir, bool want_traces) {
    validate_plan(cfg.plan);
    auto grid = reconstruct_grid(cfg.plan);

    std::string traces;
    const bool export_traces = (want_traces || cfg.write_traces);
    if (export_traces && cfg.plan.path == EvalPath::probe) traces = traces_text(cfg);
    else if (export_traces)
        std::cerr << "note: trace export requested but path = analytic produces no traces\n";

    fs::create_directories(out_dir);
    write_grid_csv((fs::path(out_dir) / "grid.csv").string(), grid);
    write_text(fs::path(out_dir) / "meta.txt", meta_text(cfg, grid));
    if (!traces.empty()) write_text(fs::path(out_dir) / "traces.csv", traces);

    std::cout << "wrote " << out_dir << "/grid.csv (" << grid.points() << " points, min "
              << grid.min_value() << ", max " << grid.max_value() << ")\n";
    if (!grid.uncertified.empty())
        std::cout << "warning: " << grid.uncertified.size()
                  << " points carry an uncertified series tail (max bound " << grid.max_tail_bound
                  << "); increase dim to certify\n";
    return 0;
}

int cmd_snapshot(const RunConfig& cfg, const std::string& out_dir, const std::vector<double>& delays) {
    validate_plan(cfg.plan);
    if (delays.empty()) throw Error(ErrorKind::config, "snapshot: no delays given (snapshot.delays or --delays)");
    auto snaps = snapshot_series(cfg.plan, delays);

    fs::create_directories(out_dir);
    std::ostringstream manifest;
    manifest << "# delay,file\n";
    for (size_t k = 0; k < snaps.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof(name), "snapshot_%02zu.csv", k);
        write_grid_csv((fs::path(out_dir) / name).string(), snaps[k].grid);
        manifest << detail::fmt_double(snaps[k].delay) << ',' << name << "\n";
    }
    write_text(fs::path(out_dir) / "snapshots.manifest", manifest.str());
    write_text(fs::path(out_dir) / "meta.txt", meta_text(cfg, snaps.front().grid));
    std::cout << "wrote " << snaps.size() << " snapshots to " << out_dir << "\n";
    return 0;
}

int cmd_validate(const RunConfig& cfg) {
    auto results = run_validation(cfg.plan);
    bool all_pass = true;
    for (const auto& r : results) {
        std::printf("check %-24s measured %.3e  tolerance %.3e  %s\n", r.name.c_str(), r.measured,
                    r.tolerance, r.pass ? "PASS" : "FAIL");
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasiprobability reconstruction of a decaying cavity field"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool have_seed = false;
    int threads = 0;
    bool want_traces = false;
    std::string delays_arg;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", config_path, "config file (nested key = value text)");
        if (config_required) opt->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "override the noise seed")->each([&have_seed](const std::string&) {
            have_seed = true;
        });
        sub->add_option("--threads", threads, "worker threads for grid evaluation");
    };

    auto* rec = app.add_subcommand("reconstruct", "reconstruct the initial state's quasiprobability map");
    add_common(rec, true);
    rec->add_flag("--traces", want_traces, "also export per-point inversion traces (probe path)");

    auto* snap = app.add_subcommand("snapshot", "reconstruct the state at several delays after preparation");
    add_common(snap, true);
    snap->add_option("--delays", delays_arg, "comma-separated delays, overrides snapshot.delays");

    auto* val = app.add_subcommand("validate", "run the invariant suites and report measured tolerances");
    add_common(val, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = parse_run_config_file(config_path);
        if (have_seed) cfg.plan.probe.seed = seed;
        if (threads > 0) cfg.plan.threads = threads;

        if (rec->parsed()) return cmd_reconstruct(cfg, out_dir, want_traces);
        if (snap->parsed()) {
            std::vector<double> delays = cfg.snapshot_delays;
            if (!delays_arg.empty()) delays = detail::parse_double_list("--delays", delays_arg);
            return cmd_snapshot(cfg, out_dir, delays);
        }
        return cmd_validate(cfg);
    } catch (const Error& e) {
        print_error_record(error_kind_name(e.kind()), e.what());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        print_error_record("internal", e.what());
        return 1;
    }
}
