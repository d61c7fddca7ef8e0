// recon.hpp
// End-to-end reconstruction pipeline: pick drive amplitudes that target
// phase-space points, run the decayed measurement chain, undo the decay
// with the weighted series, and assemble grids and decay snapshots.

#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wigrec/channel.hpp"
#include "wigrec/fock.hpp"
#include "wigrec/parallel.hpp"
#include "wigrec/probe.hpp"
#include "wigrec/quasiprob.hpp"

namespace wigrec {

/// Initial cavity field to prepare.
struct InitialState {
    enum class Kind { coherent, cat, fock };
    Kind kind = Kind::cat;
    complexd alpha{2.0, 0.0};  // coherent/cat amplitude
    double phi = 0.0;          // cat relative phase
    int n = 0;                 // fock occupation
};

/// Full reconstruction plan. Times are in units of 1/gamma when gamma = 1,
/// which is how the CLI always drives it.
struct ReconPlan {
    InitialState state;
    double gamma = 1.0;
    double t_d = 0.01;    // drive duration
    double t_meas = 0.1;  // additional decay before the probe reads out
    std::vector<double> x_axis;
    std::vector<double> y_axis;
    double s = 0.0;
    EvalPath path = EvalPath::analytic;
    ProbeConfig probe;
    int probe_m_max = 0;  // 0 = dim + 8, capped by the Nyquist guard
    int dim = 64;
    int threads = 1;

    double elapsed_gamma_t() const { return gamma * (t_d + t_meas); }
};

inline void validate_plan(const ReconPlan& plan) {
    if (!(plan.gamma > 0.0)) throw Error(ErrorKind::config, "plan: gamma must be > 0");
    if (!(plan.t_d > 0.0)) throw Error(ErrorKind::config, "plan: t_d must be > 0");
    if (plan.t_meas < 0.0) throw Error(ErrorKind::config, "plan: t_meas must be >= 0");
    if (plan.dim < 1) throw Error(ErrorKind::config, "plan: dim must be >= 1");
    if (plan.s > 0.0) throw Error(ErrorKind::config, "plan: s must be <= 0");
    if (plan.x_axis.empty() || plan.y_axis.empty()) throw Error(ErrorKind::config, "plan: empty grid axes");
    if (plan.threads < 1) throw Error(ErrorKind::config, "plan: threads must be >= 1");
    if (plan.probe_m_max < 0) throw Error(ErrorKind::config, "plan: probe m_max must be >= 0");
    if (plan.state.kind == InitialState::Kind::fock && plan.state.n >= plan.dim)
        throw Error(ErrorKind::config, "plan: fock occupation outside truncation");
    if (plan.path == EvalPath::probe) {
        validate_probe(plan.probe);
        // strong-coupling regime: the atom transit must be fast against decay
        if (plan.probe.lambda / plan.gamma < 100.0)
            throw Error(ErrorKind::config, "plan: probe path requires lambda/gamma >= 100");
        int m_max = plan.probe_m_max > 0 ? plan.probe_m_max : plan.dim + 8;
        if (m_max >= plan.probe.tau_samples / 2)
            throw Error(ErrorKind::config, "plan: probe m_max violates the Nyquist guard");
    }
}

/// Build the plan's initial density matrix, reporting truncation loss.
inline Truncated<DensityMatrix> initial_density(const InitialState& state, int dim) {
    switch (state.kind) {
        case InitialState::Kind::cat:
            return cat_density(state.alpha, state.phi, dim);
        case InitialState::Kind::coherent: {
            auto c = coherent_vector(state.alpha, dim);
            DensityMatrix rho;
            rho.elements = c.value.amplitudes * c.value.amplitudes.adjoint();
            return {std::move(rho), c.truncation_loss};
        }
        case InitialState::Kind::fock: {
            if (state.n < 0 || state.n >= dim)
                throw Error(ErrorKind::invalid_dimension, "fock state outside truncation");
            DensityMatrix rho;
            rho.elements = Eigen::MatrixXcd::Zero(dim, dim);
            rho.elements(state.n, state.n) = 1.0;
            return {std::move(rho), 0.0};
        }
    }
    throw Error(ErrorKind::invalid_argument, "unknown initial state kind");
}

/// Drive amplitude whose effective displacement is beta_target:
///   alpha = gamma beta_target / (2 (1 - e^{gamma t_d / 2})),
/// the algebraic inverse of effective_drive_amplitude, with the matching
/// series branch for tiny gamma t_d.
inline complexd drive_for_target(complexd beta_target, double gamma, double t_d) {
    if (!(gamma > 0.0)) throw Error(ErrorKind::invalid_argument, "drive_for_target: gamma must be > 0");
    if (!(t_d > 0.0))
        throw Error(ErrorKind::invalid_argument, "drive_for_target: no finite drive reaches a target at t_d = 0");
    const double gt = gamma * t_d;
    if (gt < 1e-8) {
        const double x = 0.5 * gt;
        return -beta_target / (t_d * (1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0));
    }
    return beta_target * (gamma / (2.0 * (1.0 - std::exp(0.5 * gt))));
}

namespace detail {

/// One pipeline evaluation at phase point beta for an already-prepared
/// state. The drive is aimed at -beta so the physically driven state is
/// D^dag(beta) rho D(beta), the state whose weighted series is F(beta; s).
inline SeriesResult reconstruct_point_core(const ReconPlan& plan, const DensityMatrix& rho0, complexd beta,
                                           std::uint64_t point_index) {
    const complexd alpha = drive_for_target(-beta, plan.gamma, plan.t_d);
    const complexd beta_eff = effective_drive_amplitude({alpha, plan.t_d}, plan.gamma);
    const DensityMatrix displaced = displace(rho0, -beta_eff);

    const double gamma_t = plan.elapsed_gamma_t();
    PhotonDistribution p = damp_diagonal(number_distribution(displaced),
                                         DecayParams(plan.gamma, plan.t_d + plan.t_meas));
    if (plan.path == EvalPath::probe) {
        int m_max = plan.probe_m_max > 0 ? plan.probe_m_max
                                         : std::min(plan.dim + 8, plan.probe.tau_samples / 2 - 1);
        p = invert_trace(sample_trace(p, plan.probe, point_index), plan.probe.lambda, m_max);
    }
    return quasiprob_series(p, plan.s, gamma_t);
}

inline QuasiprobGrid reconstruct_grid_of(const ReconPlan& plan, const DensityMatrix& rho0) {
    QuasiprobGrid grid;
    grid.x_axis = plan.x_axis;
    grid.y_axis = plan.y_axis;
    grid.s = plan.s;
    grid.meta = {plan.gamma, plan.t_d, plan.t_meas, plan.dim, plan.path == EvalPath::probe, plan.probe.seed};
    grid.values.assign(grid.points(), 0.0);
    std::vector<double> tails(grid.points(), 0.0);

    parallel_for(grid.points(), plan.threads, [&](int idx) {
        SeriesResult r = reconstruct_point_core(plan, rho0, grid.point(idx), static_cast<std::uint64_t>(idx));
        grid.values[idx] = r.value;
        tails[idx] = r.tail_bound;
    });
    detail::record_certificate(grid, tails);
    return grid;
}

}  // namespace detail

/// Reconstruct F(beta; s) of the plan's initial state at one phase point.
/// Throws when the series certificate fails; grid evaluation collects
/// certificates per point instead.
inline double reconstruct_point(const ReconPlan& plan, complexd beta) {
    validate_plan(plan);
    auto rho0 = initial_density(plan.state, plan.dim);
    SeriesResult r = detail::reconstruct_point_core(plan, rho0.value, beta, 0);
    if (!r.certified())
        throw Error(ErrorKind::truncation_unsafe,
                    "reconstruct_point: series tail bound " + std::to_string(r.tail_bound) +
                        " exceeds " + std::to_string(kTailThreshold) + "; increase dim");
    return r.value;
}

/// Reconstruct the full grid. Deterministic for a fixed plan and seed,
/// independent of thread count.
inline QuasiprobGrid reconstruct_grid(const ReconPlan& plan) {
    validate_plan(plan);
    auto rho0 = initial_density(plan.state, plan.dim);
    return detail::reconstruct_grid_of(plan, rho0.value);
}

/// One reconstructed map of the state as it stood `delay` after preparation.
struct Snapshot {
    double delay = 0.0;
    QuasiprobGrid grid;
};

/// Apply the drive at each delay after preparation and reconstruct; each
/// snapshot is the quasiprobability map of the partially decayed state.
inline std::vector<Snapshot> snapshot_series(const ReconPlan& plan, const std::vector<double>& delays) {
    validate_plan(plan);
    if (!std::is_sorted(delays.begin(), delays.end()))
        throw Error(ErrorKind::invalid_argument, "snapshot_series: delays must be sorted");
    if (!delays.empty() && delays.front() < 0.0)
        throw Error(ErrorKind::invalid_argument, "snapshot_series: delays must be >= 0");

    auto rho0 = initial_density(plan.state, plan.dim);
    std::vector<Snapshot> out;
    out.reserve(delays.size());
    for (double d : delays) {
        DensityMatrix decayed = d > 0.0 ? damp(rho0.value, DecayParams(plan.gamma, d)) : rho0.value;
        out.push_back({d, detail::reconstruct_grid_of(plan, decayed)});
    }
    return out;
}

}  // namespace wigrec
