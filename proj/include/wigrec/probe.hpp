// probe.hpp
// Cascade three-level atomic probe: population inversion traces from
// photon statistics, measurement noise, and the Fourier inversion back
// to the photon-number distribution.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "wigrec/fock.hpp"

namespace wigrec {

/// Atomic probe parameters. The interaction-time grid spans [0, pi/lambda]
/// inclusive; lambda must dominate the cavity decay rate for the probe to
/// see a static field (enforced at plan level).
struct ProbeConfig {
    double lambda = 500.0;      // atom-field coupling, 1/time
    double delta = 0.0;         // detuning, 1/time
    double stark = 0.0;         // Stark shift coefficient, 1/time
    int tau_samples = 256;      // >= 2, uniform grid on [0, pi/lambda]
    double noise_sigma = 0.0;   // additive Gaussian noise on inversion samples
    std::uint64_t seed = 0;

    double tau_max() const { return std::numbers::pi / lambda; }
};

inline void validate_probe(const ProbeConfig& cfg) {
    if (!(cfg.lambda > 0.0)) throw Error(ErrorKind::invalid_argument, "probe: lambda must be > 0");
    if (cfg.tau_samples < 2) throw Error(ErrorKind::invalid_argument, "probe: tau_samples must be >= 2");
    if (cfg.noise_sigma < 0.0) throw Error(ErrorKind::invalid_argument, "probe: noise_sigma must be >= 0");
}

/// Population inversion samples W(tau_i) on the uniform grid.
struct InversionTrace {
    std::vector<double> taus;
    std::vector<double> values;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic Gaussian stream for one (seed, point-index) pair.
/// Box-Muller without pair caching so the draw sequence is a pure
/// function of the call count.
class GaussianStream {
  public:
    GaussianStream(std::uint64_t seed, std::uint64_t index)
        : eng_(splitmix64(seed ^ splitmix64(index + 0x51ed2701a2b9e4d5ULL))) {}

    double next() {
        double u1 = (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
        double u2 = (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace detail

/// Two-photon-resonant inversion with detuning and Stark terms:
///   W = sum_n P_n [ G_n^2/d_n^2 + (lambda^2 (n+1)(n+2)/d_n^2) cos(2 d_n tau) ],
/// G_n = (delta + stark (n+1))/2,  d_n^2 = G_n^2 + lambda^2 (n+1)(n+2).
/// At delta = stark = 0 this is exactly sum_n P_n cos(2 lambda tau sqrt((n+1)(n+2))).
inline double inversion_exact(const PhotonDistribution& p, const ProbeConfig& cfg, double tau) {
    validate_probe(cfg);
    long double acc = 0.0L;
    for (int n = 0; n < p.dim(); ++n) {
        const double np = (n + 1.0) * (n + 2.0);
        const double g = 0.5 * (cfg.delta + cfg.stark * (n + 1.0));
        const double d2 = g * g + cfg.lambda * cfg.lambda * np;
        if (d2 <= 0.0) throw Error(ErrorKind::invalid_argument, "inversion_exact: degenerate Rabi denominator");
        const double d = std::sqrt(d2);
        const double w = (g * g + cfg.lambda * cfg.lambda * np * std::cos(2.0 * d * tau)) / d2;
        acc += static_cast<long double>(p.probs[n]) * w;
    }
    return static_cast<double>(acc);
}

/// sqrt((n+1)(n+2)) ~ n + 3/2 approximation of the resonant inversion:
///   W = sum_n P_n cos((2n+3) lambda tau).
inline double inversion_simplified(const PhotonDistribution& p, double lambda, double tau) {
    long double acc = 0.0L;
    for (int n = 0; n < p.dim(); ++n)
        acc += static_cast<long double>(p.probs[n]) * std::cos((2.0 * n + 3.0) * lambda * tau);
    return static_cast<double>(acc);
}

/// Simulated measurement record: the simplified inversion on the uniform
/// tau grid plus i.i.d. Gaussian noise from the (seed, point_index) stream.
inline InversionTrace sample_trace(const PhotonDistribution& p, const ProbeConfig& cfg,
                                   std::uint64_t point_index = 0) {
    validate_probe(cfg);
    const int n = cfg.tau_samples;
    const double h = cfg.tau_max() / (n - 1);
    InversionTrace trace;
    trace.taus.resize(n);
    trace.values.resize(n);
    detail::GaussianStream noise(cfg.seed, point_index);
    for (int i = 0; i < n; ++i) {
        const double tau = i * h;
        trace.taus[i] = tau;
        double v = inversion_simplified(p, cfg.lambda, tau);
        if (cfg.noise_sigma > 0.0) v += cfg.noise_sigma * noise.next();
        trace.values[i] = v;
    }
    return trace;
}

/// Fourier inversion of the simplified-inversion series:
///   P_m = (2 lambda / pi) int_0^{pi/lambda} W(tau) cos((2m+3) lambda tau) dtau,
/// by trapezoidal quadrature on the uniform inclusive grid, which is exact
/// for the band-limited cosine traces below the Nyquist guard. Negative
/// quadrature/noise artifacts are clamped to zero.
inline PhotonDistribution invert_trace(const InversionTrace& trace, double lambda, int m_max) {
    const int n = static_cast<int>(trace.taus.size());
    if (n < 2 || trace.values.size() != trace.taus.size())
        throw Error(ErrorKind::invalid_argument, "invert_trace: trace needs >= 2 consistent samples");
    if (m_max < 0) throw Error(ErrorKind::invalid_argument, "invert_trace: m_max must be >= 0");
    if (m_max >= n / 2)
        throw Error(ErrorKind::nyquist, "invert_trace: m_max " + std::to_string(m_max) +
                                            " too large for " + std::to_string(n) + " tau samples");
    const double h = trace.taus[1] - trace.taus[0];
    const double scale = 2.0 * lambda / std::numbers::pi * h;
    PhotonDistribution out;
    out.probs = Eigen::VectorXd(m_max + 1);
    for (int m = 0; m <= m_max; ++m) {
        const double freq = (2.0 * m + 3.0) * lambda;
        long double acc = 0.0L;
        for (int i = 0; i < n; ++i) {
            double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            acc += static_cast<long double>(w * trace.values[i] * std::cos(freq * trace.taus[i]));
        }
        double v = static_cast<double>(acc) * scale;
        out.probs[m] = (v < 0.0) ? 0.0 : v;
    }
    return out;
}

}  // namespace wigrec
