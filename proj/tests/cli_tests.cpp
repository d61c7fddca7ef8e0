// End-to-end checks of the wigrec binary: exit codes, file contracts,
// determinism across runs and thread counts.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "wigrec/io.hpp"

namespace fs = std::filesystem;

static int g_failures = 0;
static std::string g_bin, g_configs, g_work;

static void check(bool ok, const std::string& what) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
    if (!ok) ++g_failures;
}

static int run(const std::string& args, const std::string& log_name) {
    std::string cmd = g_bin + " " + args + " > " + g_work + "/" + log_name + ".out 2> " + g_work + "/" +
                      log_name + ".err";
    int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: cli_tests <wigrec-binary> <configs-dir>\n");
        return 2;
    }
    g_bin = argv[1];
    g_configs = argv[2];
    g_work = "cli_test_work";
    fs::remove_all(g_work);
    fs::create_directories(g_work);

    // reconstruct, analytic preset
    {
        int rc = run("reconstruct --config " + g_configs + "/fig1_cat.conf --out " + g_work + "/fig1", "fig1");
        check(rc == 0, "reconstruct fig1 preset exits 0");
        check(fs::exists(g_work + "/fig1/grid.csv") && fs::exists(g_work + "/fig1/meta.txt"),
              "reconstruct writes grid.csv and meta.txt");
        auto grid = wigrec::read_grid_csv_file(g_work + "/fig1/grid.csv");
        check(grid.points() == 57 * 57, "fig1 grid has the configured 57x57 points");
        check(grid.min_value() < -0.4, "fig1 fringe minimum is below -0.4");
        check(grid.max_value() > 0.6 && grid.max_value() < 2.0 / M_PI + 1e-9,
              "fig1 maximum is the even-parity peak");
        // meta.txt re-parses to the effective configuration
        auto meta_cfg = wigrec::parse_run_config_file(g_work + "/fig1/meta.txt");
        auto file_cfg = wigrec::parse_run_config_file(g_configs + "/fig1_cat.conf");
        check(wigrec::to_config_text(meta_cfg) == wigrec::to_config_text(file_cfg),
              "meta.txt body re-parses to the run's canonical config");
    }

    // reconstruct, noisy probe preset; cross-check against the analytic map
    {
        int rc = run("reconstruct --config " + g_configs + "/fig3_probe.conf --out " + g_work + "/fig3", "fig3");
        check(rc == 0, "reconstruct fig3 preset exits 0");
        auto fig1 = wigrec::read_grid_csv_file(g_work + "/fig1/grid.csv");
        auto fig3 = wigrec::read_grid_csv_file(g_work + "/fig3/grid.csv");
        auto value_at = [](const wigrec::QuasiprobGrid& g, double x, double y) {
            int ix = -1, iy = -1;
            for (int i = 0; i < g.nx(); ++i)
                if (std::abs(g.x_axis[i] - x) < 1e-12) ix = i;
            for (int i = 0; i < g.ny(); ++i)
                if (std::abs(g.y_axis[i] - y) < 1e-12) iy = i;
            return (ix >= 0 && iy >= 0) ? g.values[iy * g.nx() + ix] : 1e99;
        };
        double worst = 0.0;
        for (int iy = 0; iy < fig3.ny(); ++iy)
            for (int ix = 0; ix < fig3.nx(); ++ix) {
                double ref = value_at(fig1, fig3.x_axis[ix], fig3.y_axis[iy]);
                worst = std::max(worst, std::abs(fig3.values[iy * fig3.nx() + ix] - ref));
            }
        check(worst <= 0.05, "fig3 probe reconstruction within 0.05 of the fig1 map (worst " +
                                 std::to_string(worst) + ")");
        check(fig3.min_value() < -0.1, "fig3 keeps the fringe negativity");
    }

    // determinism: same seed and config, byte-identical outputs across runs and threads
    {
        run("reconstruct --config " + g_configs + "/fig3_probe.conf --out " + g_work + "/det1 --threads 1",
            "det1");
        run("reconstruct --config " + g_configs + "/fig3_probe.conf --out " + g_work + "/det4 --threads 4",
            "det4");
        check(slurp(g_work + "/det1/grid.csv") == slurp(g_work + "/fig3/grid.csv"),
              "rerun with the same seed is byte-identical");
        check(slurp(g_work + "/det4/grid.csv") == slurp(g_work + "/fig3/grid.csv"),
              "thread count does not change the bytes");
        run("reconstruct --config " + g_configs + "/fig3_probe.conf --out " + g_work + "/reseed --seed 7",
            "reseed");
        check(slurp(g_work + "/reseed/grid.csv") != slurp(g_work + "/fig3/grid.csv"),
              "--seed override changes the noisy output");
    }

    // malformed config: exit 2, no partial outputs
    {
        std::ofstream bad(g_work + "/bad.conf");
        bad << "state.kind = cat\nnot a config line\n";
        bad.close();
        int rc = run("reconstruct --config " + g_work + "/bad.conf --out " + g_work + "/bad_out", "bad");
        check(rc == 2, "malformed config exits 2");
        check(!fs::exists(g_work + "/bad_out/grid.csv"), "no partial files on config error");
        std::string err = slurp(g_work + "/bad.err");
        check(err.find("\"error\"") != std::string::npos && err.find("config") != std::string::npos,
              "machine-readable error record on stderr");
    }

    // snapshot: delay 0 reproduces reconstruct byte for byte; fringe decays
    {
        int rc = run("snapshot --config " + g_configs + "/snapshot_fringe.conf --out " + g_work + "/snap",
                     "snap");
        check(rc == 0, "snapshot preset exits 0");
        check(fs::exists(g_work + "/snap/snapshots.manifest"), "snapshot writes a manifest");
        run("reconstruct --config " + g_configs + "/snapshot_fringe.conf --out " + g_work + "/snap_ref",
            "snap_ref");
        check(slurp(g_work + "/snap/snapshot_00.csv") == slurp(g_work + "/snap_ref/grid.csv"),
              "zero-delay snapshot equals the plain reconstruction");
        auto s0 = wigrec::read_grid_csv_file(g_work + "/snap/snapshot_00.csv");
        auto s1 = wigrec::read_grid_csv_file(g_work + "/snap/snapshot_01.csv");
        auto s2 = wigrec::read_grid_csv_file(g_work + "/snap/snapshot_02.csv");
        double ratio = s1.values[0] / s0.values[0];
        check(std::abs(ratio - 0.467) <= 0.01,
              "delay 0.1 fringe peak ratio ~ 0.467 (got " + std::to_string(ratio) + ")");
        check(std::abs(s0.min_value()) > std::abs(s1.min_value()) &&
                  std::abs(s1.min_value()) > std::abs(s2.min_value()),
              "fringe negativity decays monotonically with delay");

        int rc_empty = run("snapshot --config " + g_configs + "/fig1_cat.conf --out " + g_work + "/snap_e",
                           "snap_e");
        check(rc_empty == 2, "snapshot without delays exits 2");
    }

    // validate: default passes, corrupt gamma is a config error, starved
    // truncation is reported and fails
    {
        int rc = run("validate --config " + g_configs + "/validate_default.conf", "val_ok");
        std::string out = slurp(g_work + "/val_ok.out");
        check(rc == 0, "validate default config exits 0");
        check(out.find("telescoping-identity") != std::string::npos &&
                  out.find("FAIL") == std::string::npos,
              "validate default reports all checks PASS");

        std::ofstream bad(g_work + "/neg_gamma.conf");
        bad << "state.kind = cat\ngamma = -1.0\n";
        bad.close();
        check(run("validate --config " + g_work + "/neg_gamma.conf", "val_neg") == 2,
              "validate with negative gamma exits 2");

        std::ofstream starved(g_work + "/dim8.conf");
        starved << "state.kind = cat\nstate.alpha_re = 2.0\ndim = 8\n";
        starved.close();
        int rc8 = run("validate --config " + g_work + "/dim8.conf", "val_dim8");
        std::string out8 = slurp(g_work + "/val_dim8.out");
        check(rc8 == 1, "validate at dim 8 with a big cat exits 1");
        check(out8.find("truncation-certificate") != std::string::npos &&
                  out8.find("FAIL") != std::string::npos,
              "starved truncation is reported as an uncertified tail");
    }

    std::printf("%s\n", g_failures == 0 ? "ALL CLI TESTS PASSED" : "CLI TESTS FAILED");
    return g_failures == 0 ? 0 : 1;
}
