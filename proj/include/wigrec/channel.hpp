// channel.hpp
// Zero-temperature dissipation dynamics: closed-form amplitude damping,
// the driven-decay effective displacement, and a Runge-Kutta master
// equation integrator used as an independent oracle.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <iostream>

#include "wigrec/fock.hpp"

namespace wigrec {

/// Energy decay at rate gamma for duration t.
struct DecayParams {
    double gamma = 1.0;  // 1/time
    double t = 0.0;      // duration

    DecayParams(double gamma_, double t_) : gamma(gamma_), t(t_) {
        if (!(gamma > 0.0)) throw Error(ErrorKind::invalid_argument, "DecayParams: gamma must be > 0");
        if (!(t >= 0.0)) throw Error(ErrorKind::invalid_argument, "DecayParams: t must be >= 0");
    }

    double survival() const { return std::exp(-gamma * t); }  // e^{-gamma t}
    double q() const { return 1.0 - survival(); }
};

/// Coherent drive of amplitude alpha applied for duration t_d.
struct DriveParams {
    complexd alpha{0.0, 0.0};  // 1/time
    double t_d = 0.0;
};

/// Effective displacement amplitude accumulated by driving while the
/// cavity decays: beta = 2 alpha (1 - e^{gamma t_d / 2}) / gamma.
/// Below gamma*t_d = 1e-8 the direct formula loses all digits to
/// cancellation, so the Taylor form -alpha t_d (1 + g t_d/4 + ...) is used.
inline complexd effective_drive_amplitude(const DriveParams& drive, double gamma) {
    if (!(gamma > 0.0)) throw Error(ErrorKind::invalid_argument, "effective_drive_amplitude: gamma must be > 0");
    const double gt = gamma * drive.t_d;
    if (gt < 1e-8) {
        const double x = 0.5 * gt;
        return -drive.alpha * drive.t_d * (1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0);
    }
    return drive.alpha * (2.0 * (1.0 - std::exp(0.5 * gt)) / gamma);
}

/// Binomial redistribution of the photon-number distribution under
/// amplitude damping:
///   P_m(t) = sum_{n>=m} C(n,m) e^{-m gamma t} (1-e^{-gamma t})^{n-m} P_n(0).
/// Running-recurrence weights, long-double accumulation.
inline PhotonDistribution damp_diagonal(const PhotonDistribution& p0, const DecayParams& decay) {
    const int dim = p0.dim();
    PhotonDistribution out;
    out.probs = Eigen::VectorXd(dim);
    const long double eta = std::exp(static_cast<long double>(-decay.gamma * decay.t));
    const long double q = 1.0L - eta;
    if (q == 0.0L) {
        out.probs = p0.probs;
        return out;
    }
    for (int m = 0; m < dim; ++m) {
        // w_j = C(m+j, j) q^j, built incrementally
        long double w = 1.0L;
        long double acc = 0.0L;
        long double comp = 0.0L;  // Kahan
        for (int j = 0; m + j < dim; ++j) {
            if (j > 0) w *= q * static_cast<long double>(m + j) / static_cast<long double>(j);
            long double term = w * static_cast<long double>(p0.probs[m + j]);
            long double y = term - comp;
            long double s = acc + y;
            comp = (s - acc) - y;
            acc = s;
        }
        long double etam = std::exp(static_cast<long double>(-decay.gamma * decay.t) * m);
        out.probs[m] = static_cast<double>(etam * acc);
    }
    return out;
}

/// Full-matrix amplitude damping (closed Kraus form):
///   rho_mn(t) = e^{-(m+n) gamma t / 2}
///               sum_k sqrt(C(m+k,k) C(n+k,k)) q^k rho_{m+k,n+k}(0).
/// Agrees with damp_diagonal on diagonals; trace and Hermiticity preserved.
inline DensityMatrix damp(const DensityMatrix& rho0, const DecayParams& decay) {
    const int dim = rho0.dim();
    DensityMatrix out;
    out.elements = Eigen::MatrixXcd(dim, dim);
    const long double eta = std::exp(static_cast<long double>(-decay.gamma * decay.t));
    const long double q = 1.0L - eta;
    if (q == 0.0L) {
        out.elements = rho0.elements;
        return out;
    }
    const long double half_gt = 0.5L * static_cast<long double>(decay.gamma * decay.t);
    for (int m = 0; m < dim; ++m) {
        for (int n = m; n < dim; ++n) {
            // w_k = sqrt(C(m+k,k) C(n+k,k)) q^k
            long double w = 1.0L;
            std::complex<long double> acc(0.0L, 0.0L);
            for (int k = 0; n + k < dim; ++k) {
                if (k > 0)
                    w *= q * std::sqrt(static_cast<long double>(m + k) * static_cast<long double>(n + k)) /
                         static_cast<long double>(k);
                complexd r = rho0.elements(m + k, n + k);
                acc += w * std::complex<long double>(r.real(), r.imag());
            }
            long double damp_factor = std::exp(-half_gt * (m + n));
            std::complex<long double> v = damp_factor * acc;
            out.elements(m, n) = complexd(static_cast<double>(v.real()), static_cast<double>(v.imag()));
            if (n != m) out.elements(n, m) = std::conj(out.elements(m, n));
        }
    }
    return out;
}

/// Drive rho0 for t_d while it decays. Equivalent to the effective
/// displacement by beta followed by free decay over t_d:
///   rho(t_d) = e^{L t_d} D(beta) rho0 D^dag(beta),
/// with beta from effective_drive_amplitude. The conjugation direction is
/// the one the master-equation oracle confirms for H_d = i hbar
/// (conj(alpha) a - alpha a^dag); in displace() notation the argument is
/// -beta. Requires enough truncation headroom above the state's support.
inline DensityMatrix drive_and_decay(const DensityMatrix& rho0, const DriveParams& drive, double gamma) {
    const complexd beta = effective_drive_amplitude(drive, gamma);
    const int support = support_index(number_distribution(rho0), 1e-12);
    const int margin = displacement_margin(beta);
    if (support + 1 + margin > rho0.dim())
        throw Error(ErrorKind::insufficient_truncation,
                    "drive_and_decay: need dim >= " + std::to_string(support + 1 + margin) +
                        " (support " + std::to_string(support) + " + margin " + std::to_string(margin) +
                        "), have " + std::to_string(rho0.dim()));
    if (drive.t_d == 0.0) {
        DensityMatrix out;
        out.elements = rho0.elements;
        return out;
    }
    return damp(displace(rho0, -beta), DecayParams(gamma, drive.t_d));
}

/// Classical RK4 integration of the driven lossy-cavity master equation
///   drho/dt = [conj(alpha) a - alpha a^dag, rho]
///             + gamma (a rho a^dag - (a^dag a rho + rho a^dag a)/2).
/// Oracle only; never used in the reconstruction pipeline.
inline DensityMatrix integrate_master(const DensityMatrix& rho0, complexd alpha, double gamma, double t,
                                      int steps) {
    if (steps < 1) throw Error(ErrorKind::invalid_argument, "integrate_master: steps must be >= 1");
    if (!(gamma > 0.0)) throw Error(ErrorKind::invalid_argument, "integrate_master: gamma must be > 0");
    if (gamma * t / steps > 0.05)
        std::cerr << "integrate_master: warning: step size gamma*t/steps = " << gamma * t / steps
                  << " > 0.05, result may be inaccurate\n";

    const int dim = rho0.dim();
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    const Eigen::MatrixXcd adag = a.adjoint();
    const Eigen::MatrixXcd g = std::conj(alpha) * a - alpha * adag;
    Eigen::VectorXd nvec(dim);
    for (int n = 0; n < dim; ++n) nvec[n] = n;

    auto rhs = [&](const Eigen::MatrixXcd& rho) -> Eigen::MatrixXcd {
        Eigen::MatrixXcd out = g * rho - rho * g;
        out.noalias() += gamma * (a * rho * adag);
        out.noalias() -= (0.5 * gamma) * (nvec.asDiagonal() * rho + rho * nvec.asDiagonal());
        return out;
    };

    const double h = t / steps;
    Eigen::MatrixXcd rho = rho0.elements;
    for (int i = 0; i < steps; ++i) {
        Eigen::MatrixXcd k1 = rhs(rho);
        Eigen::MatrixXcd k2 = rhs(rho + 0.5 * h * k1);
        Eigen::MatrixXcd k3 = rhs(rho + 0.5 * h * k2);
        Eigen::MatrixXcd k4 = rhs(rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    DensityMatrix out;
    out.elements = 0.5 * (rho + rho.adjoint()).eval();
    return out;
}

}  // namespace wigrec
