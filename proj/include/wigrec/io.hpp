// io.hpp
// Run configuration (nested key-value text, dotted keys) and grid CSV
// export/import. Both formats round-trip exactly: configs parse back to
// identical plans, grids re-parse bit-identical via 17-significant-digit
// decimals.

#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wigrec/quasiprob.hpp"
#include "wigrec/recon.hpp"

namespace wigrec {

/// Everything a CLI run needs: the plan plus grid geometry and output options.
struct RunConfig {
    ReconPlan plan;
    double xmin = -3.5, xstep = 0.25, xmax = 3.5;
    double ymin = -3.5, ystep = 0.25, ymax = 3.5;
    bool write_traces = false;
    std::vector<double> snapshot_delays;

    void rebuild_axes() {
        plan.x_axis = make_axis(xmin, xstep, xmax);
        plan.y_axis = make_axis(ymin, ystep, ymax);
    }
};

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw Error(ErrorKind::config, "config: bad number for '" + key + "': " + v);
    return out;
}

inline long long parse_int(const std::string& key, const std::string& v) {
    long long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw Error(ErrorKind::config, "config: bad integer for '" + key + "': " + v);
    return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw Error(ErrorKind::config, "config: bad boolean for '" + key + "': " + v);
}

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

inline std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    return out;
}

}  // namespace detail

/// Parse a dotted-key config document: `key = value` lines, `#` comments.
/// Unknown or repeated keys are configuration errors.
inline RunConfig parse_run_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::config, "config: line " + std::to_string(lineno) + " is not 'key = value'");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw Error(ErrorKind::config, "config: empty key at line " + std::to_string(lineno));
        if (!kv.emplace(key, value).second)
            throw Error(ErrorKind::config, "config: repeated key '" + key + "'");
    }

    RunConfig cfg;
    std::set<std::string> seen;
    auto take = [&](const char* key) -> const std::string* {
        seen.insert(key);
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_int;

    if (auto* v = take("state.kind")) {
        if (*v == "cat") cfg.plan.state.kind = InitialState::Kind::cat;
        else if (*v == "coherent") cfg.plan.state.kind = InitialState::Kind::coherent;
        else if (*v == "fock") cfg.plan.state.kind = InitialState::Kind::fock;
        else throw Error(ErrorKind::config, "config: state.kind must be cat|coherent|fock");
    }
    if (auto* v = take("state.alpha_re")) cfg.plan.state.alpha.real(parse_double("state.alpha_re", *v));
    if (auto* v = take("state.alpha_im")) cfg.plan.state.alpha.imag(parse_double("state.alpha_im", *v));
    if (auto* v = take("state.phi")) cfg.plan.state.phi = parse_double("state.phi", *v);
    if (auto* v = take("state.n")) cfg.plan.state.n = static_cast<int>(parse_int("state.n", *v));
    if (auto* v = take("gamma")) cfg.plan.gamma = parse_double("gamma", *v);
    if (auto* v = take("t_d")) cfg.plan.t_d = parse_double("t_d", *v);
    if (auto* v = take("t_meas")) cfg.plan.t_meas = parse_double("t_meas", *v);
    if (auto* v = take("dim")) cfg.plan.dim = static_cast<int>(parse_int("dim", *v));
    if (auto* v = take("s")) cfg.plan.s = parse_double("s", *v);
    if (auto* v = take("threads")) cfg.plan.threads = static_cast<int>(parse_int("threads", *v));
    if (auto* v = take("seed")) cfg.plan.probe.seed = static_cast<std::uint64_t>(parse_int("seed", *v));
    if (auto* v = take("path")) {
        if (*v == "analytic") cfg.plan.path = EvalPath::analytic;
        else if (*v == "probe") cfg.plan.path = EvalPath::probe;
        else throw Error(ErrorKind::config, "config: path must be analytic|probe");
    }
    if (auto* v = take("grid.xmin")) cfg.xmin = parse_double("grid.xmin", *v);
    if (auto* v = take("grid.xstep")) cfg.xstep = parse_double("grid.xstep", *v);
    if (auto* v = take("grid.xmax")) cfg.xmax = parse_double("grid.xmax", *v);
    if (auto* v = take("grid.ymin")) cfg.ymin = parse_double("grid.ymin", *v);
    if (auto* v = take("grid.ystep")) cfg.ystep = parse_double("grid.ystep", *v);
    if (auto* v = take("grid.ymax")) cfg.ymax = parse_double("grid.ymax", *v);
    if (auto* v = take("probe.lambda")) cfg.plan.probe.lambda = parse_double("probe.lambda", *v);
    if (auto* v = take("probe.delta")) cfg.plan.probe.delta = parse_double("probe.delta", *v);
    if (auto* v = take("probe.stark")) cfg.plan.probe.stark = parse_double("probe.stark", *v);
    if (auto* v = take("probe.tau_samples"))
        cfg.plan.probe.tau_samples = static_cast<int>(parse_int("probe.tau_samples", *v));
    if (auto* v = take("probe.noise_sigma")) cfg.plan.probe.noise_sigma = parse_double("probe.noise_sigma", *v);
    if (auto* v = take("probe.m_max")) cfg.plan.probe_m_max = static_cast<int>(parse_int("probe.m_max", *v));
    if (auto* v = take("output.traces")) cfg.write_traces = parse_bool("output.traces", *v);
    if (auto* v = take("snapshot.delays")) cfg.snapshot_delays = detail::parse_double_list("snapshot.delays", *v);

    for (const auto& [key, value] : kv)
        if (!seen.count(key)) throw Error(ErrorKind::config, "config: unknown key '" + key + "'");

    try {
        cfg.rebuild_axes();
    } catch (const Error& e) {
        throw Error(ErrorKind::config, std::string("config: grid: ") + e.what());
    }
    return cfg;
}

inline RunConfig parse_run_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::config, "config: cannot open " + path);
    return parse_run_config(in);
}

/// Canonical text form; parsing it back yields an identical RunConfig.
inline std::string to_config_text(const RunConfig& cfg) {
    using detail::fmt_double;
    std::ostringstream out;
    out << "dim = " << cfg.plan.dim << "\n";
    out << "gamma = " << fmt_double(cfg.plan.gamma) << "\n";
    out << "grid.xmax = " << fmt_double(cfg.xmax) << "\n";
    out << "grid.xmin = " << fmt_double(cfg.xmin) << "\n";
    out << "grid.xstep = " << fmt_double(cfg.xstep) << "\n";
    out << "grid.ymax = " << fmt_double(cfg.ymax) << "\n";
    out << "grid.ymin = " << fmt_double(cfg.ymin) << "\n";
    out << "grid.ystep = " << fmt_double(cfg.ystep) << "\n";
    out << "output.traces = " << (cfg.write_traces ? "true" : "false") << "\n";
    out << "path = " << (cfg.plan.path == EvalPath::probe ? "probe" : "analytic") << "\n";
    out << "probe.delta = " << fmt_double(cfg.plan.probe.delta) << "\n";
    out << "probe.lambda = " << fmt_double(cfg.plan.probe.lambda) << "\n";
    out << "probe.m_max = " << cfg.plan.probe_m_max << "\n";
    out << "probe.noise_sigma = " << fmt_double(cfg.plan.probe.noise_sigma) << "\n";
    out << "probe.stark = " << fmt_double(cfg.plan.probe.stark) << "\n";
    out << "probe.tau_samples = " << cfg.plan.probe.tau_samples << "\n";
    out << "s = " << fmt_double(cfg.plan.s) << "\n";
    out << "seed = " << cfg.plan.probe.seed << "\n";
    out << "snapshot.delays = ";
    for (size_t i = 0; i < cfg.snapshot_delays.size(); ++i)
        out << (i ? "," : "") << fmt_double(cfg.snapshot_delays[i]);
    out << "\n";
    switch (cfg.plan.state.kind) {
        case InitialState::Kind::cat: out << "state.kind = cat\n"; break;
        case InitialState::Kind::coherent: out << "state.kind = coherent\n"; break;
        case InitialState::Kind::fock: out << "state.kind = fock\n"; break;
    }
    out << "state.alpha_im = " << fmt_double(cfg.plan.state.alpha.imag()) << "\n";
    out << "state.alpha_re = " << fmt_double(cfg.plan.state.alpha.real()) << "\n";
    out << "state.n = " << cfg.plan.state.n << "\n";
    out << "state.phi = " << fmt_double(cfg.plan.state.phi) << "\n";
    out << "t_d = " << fmt_double(cfg.plan.t_d) << "\n";
    out << "t_meas = " << fmt_double(cfg.plan.t_meas) << "\n";
    out << "threads = " << cfg.plan.threads << "\n";
    return out.str();
}

/// Grid CSV: one '#' header carrying the run parameters, then row-major
/// x,y,value records at 17 significant digits.
inline std::string grid_to_csv(const QuasiprobGrid& grid) {
    using detail::fmt_double;
    std::ostringstream out;
    out << "# s=" << fmt_double(grid.s) << " gamma=" << fmt_double(grid.meta.gamma)
        << " t_d=" << fmt_double(grid.meta.t_d) << " t_meas=" << fmt_double(grid.meta.t_meas)
        << " dim=" << grid.meta.dim << " seed=" << grid.meta.seed << "\n";
    for (int iy = 0; iy < grid.ny(); ++iy)
        for (int ix = 0; ix < grid.nx(); ++ix)
            out << fmt_double(grid.x_axis[ix]) << ',' << fmt_double(grid.y_axis[iy]) << ','
                << fmt_double(grid.values[iy * grid.nx() + ix]) << "\n";
    return out.str();
}

inline void write_grid_csv(const std::string& path, const QuasiprobGrid& grid) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write " + path);
    out << grid_to_csv(grid);
}

inline QuasiprobGrid read_grid_csv(std::istream& in) {
    QuasiprobGrid grid;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
        throw Error(ErrorKind::io, "grid csv: missing header");
    {
        std::istringstream head(line.substr(2));
        std::string token;
        while (head >> token) {
            auto eq = token.find('=');
            if (eq == std::string::npos) throw Error(ErrorKind::io, "grid csv: bad header token " + token);
            std::string key = token.substr(0, eq), value = token.substr(eq + 1);
            if (key == "s") grid.s = detail::parse_double(key, value);
            else if (key == "gamma") grid.meta.gamma = detail::parse_double(key, value);
            else if (key == "t_d") grid.meta.t_d = detail::parse_double(key, value);
            else if (key == "t_meas") grid.meta.t_meas = detail::parse_double(key, value);
            else if (key == "dim") grid.meta.dim = static_cast<int>(detail::parse_int(key, value));
            else if (key == "seed") grid.meta.seed = static_cast<std::uint64_t>(detail::parse_int(key, value));
            else throw Error(ErrorKind::io, "grid csv: unknown header key " + key);
        }
    }
    std::vector<double> xs, ys, vals;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b, c;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c))
            throw Error(ErrorKind::io, "grid csv: bad row " + line);
        xs.push_back(detail::parse_double("x", a));
        ys.push_back(detail::parse_double("y", b));
        vals.push_back(detail::parse_double("value", c));
    }
    if (vals.empty()) throw Error(ErrorKind::io, "grid csv: no data rows");
    for (size_t i = 0; i < xs.size() && ys[i] == ys[0]; ++i) grid.x_axis.push_back(xs[i]);
    const size_t nx = grid.x_axis.size();
    if (vals.size() % nx != 0) throw Error(ErrorKind::io, "grid csv: ragged rows");
    for (size_t i = 0; i < vals.size(); i += nx) grid.y_axis.push_back(ys[i]);
    grid.values = std::move(vals);
    return grid;
}

inline QuasiprobGrid read_grid_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot read " + path);
    return read_grid_csv(in);
}

}  // namespace wigrec
