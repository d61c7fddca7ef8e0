// quasiprob.hpp
// Weighted-series quasiprobability evaluation: from (possibly decayed)
// photon statistics of a displaced state to the initial state's Wigner
// and s-parametrized functions at the displacement point.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "wigrec/channel.hpp"
#include "wigrec/fock.hpp"
#include "wigrec/parallel.hpp"
#include "wigrec/probe.hpp"

namespace wigrec {

/// Tail-certificate threshold above which a series value is not trusted
/// to represent the untruncated sum.
inline constexpr double kTailThreshold = 1e-6;

/// Series weight chi(s;t) = 1 + 2 e^{gamma t} / (s - 1).
/// At s = 0 this is the parity weight 1 - 2 e^{gamma t}.
inline double series_weight(double s, double gamma_t) {
    if (s >= 1.0) throw Error(ErrorKind::invalid_argument, "series_weight: requires s < 1");
    return 1.0 + 2.0 * std::exp(gamma_t) / (s - 1.0);
}

/// Value of the weighted series plus a convergence certificate: the
/// magnitude of the largest of the two final terms |chi|^m P_m (two, so
/// strict-parity states with a vanishing last entry are still certified
/// honestly).
struct SeriesResult {
    double value = 0.0;
    double tail_bound = 0.0;

    bool certified() const { return tail_bound <= kTailThreshold; }
};

/// F(beta; s) = -2/(pi (s-1)) sum_m chi(s; gamma_t)^m P_m for a photon
/// distribution P measured after elapsed decay gamma_t on the displaced
/// state. Ascending compensated accumulation in extended precision; the
/// growth of |chi|^m is countered by the certified tail bound, not an
/// arbitrary cutoff.
inline SeriesResult quasiprob_series(const PhotonDistribution& p, double s, double gamma_t) {
    const long double chi = static_cast<long double>(series_weight(s, gamma_t));
    const double prefactor = -2.0 / (std::numbers::pi * (s - 1.0));
    const int dim = p.dim();

    long double w = 1.0L;
    long double acc = 0.0L;
    long double comp = 0.0L;
    double tail = 0.0;
    for (int m = 0; m < dim; ++m) {
        long double term = w * static_cast<long double>(p.probs[m]);
        long double y = term - comp;
        long double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
        if (m >= dim - 2) {
            double mag = static_cast<double>(std::fabs(term));
            if (mag > tail) tail = mag;
        }
        w *= chi;
    }
    return {prefactor * static_cast<double>(acc), tail};
}

/// Checked single-point evaluation; throws when the certificate exceeds
/// the threshold. Grid paths use quasiprob_series directly and collect
/// certificates per point instead.
inline double quasiprob_point(const PhotonDistribution& p, double s, double gamma_t) {
    SeriesResult r = quasiprob_series(p, s, gamma_t);
    if (!r.certified())
        throw Error(ErrorKind::truncation_unsafe,
                    "quasiprob_point: series tail bound " + std::to_string(r.tail_bound) +
                        " exceeds " + std::to_string(kTailThreshold) + "; increase dim");
    return r.value;
}

/// Zero-decay oracle path: W(beta) = (2/pi) sum_n (-1)^n <n|D^dag(beta) rho0 D(beta)|n>.
inline double wigner_direct(const DensityMatrix& rho0, complexd beta) {
    return quasiprob_series(number_distribution(displace(rho0, beta)), 0.0, 0.0).value;
}

enum class EvalPath { analytic, probe };

struct GridMeta {
    double gamma = 1.0;
    double t_d = 0.0;
    double t_meas = 0.0;
    int dim = 0;
    bool probe_path = false;
    std::uint64_t seed = 0;
};

/// Rectangular phase-space map, row-major over (y, x):
/// values[iy * nx + ix] belongs to the point x_axis[ix] + i y_axis[iy].
struct QuasiprobGrid {
    std::vector<double> x_axis;
    std::vector<double> y_axis;
    std::vector<double> values;
    double s = 0.0;
    GridMeta meta;

    double max_tail_bound = 0.0;          // worst per-point certificate
    std::vector<int> uncertified;         // indices with tail above threshold

    int nx() const { return static_cast<int>(x_axis.size()); }
    int ny() const { return static_cast<int>(y_axis.size()); }
    int points() const { return nx() * ny(); }
    complexd point(int idx) const {
        return {x_axis[idx % nx()], y_axis[idx / nx()]};
    }
    double min_value() const {
        double v = values.empty() ? 0.0 : values[0];
        for (double x : values) v = std::min(v, x);
        return v;
    }
    double max_value() const {
        double v = values.empty() ? 0.0 : values[0];
        for (double x : values) v = std::max(v, x);
        return v;
    }
};

/// Inclusive uniform axis min, min+step, ..., max.
inline std::vector<double> make_axis(double min, double step, double max) {
    if (!(step > 0.0) || max < min) throw Error(ErrorKind::invalid_argument, "make_axis: bad range");
    int n = static_cast<int>(std::floor((max - min) / step + 0.5)) + 1;
    std::vector<double> axis(n);
    for (int i = 0; i < n; ++i) axis[i] = min + i * step;
    return axis;
}

/// Riemann sum times cell area; ~1 for s = 0 grids covering the support.
inline double riemann_mass(const QuasiprobGrid& grid) {
    if (grid.nx() < 2 || grid.ny() < 2) throw Error(ErrorKind::invalid_argument, "riemann_mass: need a 2-d grid");
    const double dx = grid.x_axis[1] - grid.x_axis[0];
    const double dy = grid.y_axis[1] - grid.y_axis[0];
    long double acc = 0.0L;
    for (double v : grid.values) acc += v;
    return static_cast<double>(acc) * dx * dy;
}

namespace detail {

inline void record_certificate(QuasiprobGrid& grid, const std::vector<double>& tails) {
    for (int i = 0; i < static_cast<int>(tails.size()); ++i) {
        if (tails[i] > grid.max_tail_bound) grid.max_tail_bound = tails[i];
        if (tails[i] > kTailThreshold) grid.uncertified.push_back(i);
    }
}

}  // namespace detail

/// Direct map of F(beta; s) for a prepared state over a grid: per point,
/// displace, read the photon statistics (analytically or through the
/// simulated probe), and sum the weighted series at zero elapsed decay.
/// Per-point certificates are collected, not fatal.
inline QuasiprobGrid grid_eval(const DensityMatrix& rho0, std::vector<double> x_axis,
                               std::vector<double> y_axis, double s, EvalPath path = EvalPath::analytic,
                               const ProbeConfig& probe = {}, int probe_m_max = 0, int threads = 1) {
    if (s > 0.0) throw Error(ErrorKind::invalid_argument, "grid_eval: s must be <= 0");
    QuasiprobGrid grid;
    grid.x_axis = std::move(x_axis);
    grid.y_axis = std::move(y_axis);
    grid.s = s;
    grid.meta.dim = rho0.dim();
    grid.meta.probe_path = (path == EvalPath::probe);
    grid.meta.seed = probe.seed;
    grid.values.assign(grid.points(), 0.0);
    std::vector<double> tails(grid.points(), 0.0);

    const int n = grid.points();
    parallel_for(n, threads, [&](int idx) {
        PhotonDistribution p = number_distribution(displace(rho0, grid.point(idx)));
        if (path == EvalPath::probe) {
            int m_max = probe_m_max > 0 ? probe_m_max
                                        : std::min(rho0.dim() + 8, probe.tau_samples / 2 - 1);
            p = invert_trace(sample_trace(p, probe, static_cast<std::uint64_t>(idx)), probe.lambda, m_max);
        }
        SeriesResult r = quasiprob_series(p, s, 0.0);
        grid.values[idx] = r.value;
        tails[idx] = r.tail_bound;
    });
    detail::record_certificate(grid, tails);
    return grid;
}

}  // namespace wigrec
