// fock.hpp
// Truncated Fock-space states and linear algebra: coherent states, cat
// states, displacement operators, photon-number diagnostics.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <utility>

#include "wigrec/error.hpp"

namespace wigrec {

using complexd = std::complex<double>;

/// Pure-state coefficient vector in the number basis, truncated at dim().
struct FockVector {
    Eigen::VectorXcd amplitudes;

    int dim() const { return static_cast<int>(amplitudes.size()); }
    double norm_sq() const { return amplitudes.squaredNorm(); }
};

/// Density operator in the truncated number basis.
/// Physical states are Hermitian, positive, trace ~ 1 (up to truncation loss).
struct DensityMatrix {
    Eigen::MatrixXcd elements;

    int dim() const { return static_cast<int>(elements.rows()); }
    double trace_real() const { return elements.trace().real(); }

    /// max |rho_mn - conj(rho_nm)|
    double hermiticity_defect() const {
        return (elements - elements.adjoint()).cwiseAbs().maxCoeff();
    }
};

/// Photon-number probabilities P_m = <m|rho|m>.
struct PhotonDistribution {
    Eigen::VectorXd probs;

    int dim() const { return static_cast<int>(probs.size()); }
    double total() const { return probs.sum(); }
};

/// State-producing operations report how much norm fell outside the
/// truncated basis so downstream consumers can assert adequacy.
template <typename T>
struct Truncated {
    T value;
    double truncation_loss = 0.0;
};

namespace detail {

inline void require_dim(int dim) {
    if (dim < 1) throw Error(ErrorKind::invalid_dimension, "truncation dimension must be >= 1");
}

/// Associated Laguerre L_p^{(d)}(x) by the ascending three-term recurrence.
inline long double assoc_laguerre_ld(int p, int d, long double x) {
    if (p == 0) return 1.0L;
    long double lkm1 = 1.0L;
    long double lk = 1.0L + static_cast<long double>(d) - x;
    for (int k = 1; k < p; ++k) {
        long double next = ((2.0L * k + d + 1.0L - x) * lk - (k + d) * lkm1) / (k + 1.0L);
        lkm1 = lk;
        lk = next;
    }
    return lk;
}

}  // namespace detail

/// Fock margin needed above a state's support before displacing by beta.
inline int displacement_margin(complexd beta) {
    return static_cast<int>(std::ceil(4.0 * std::norm(beta) + 8.0));
}

/// Last index whose probability exceeds `tol`; -1 if none do.
inline int support_index(const PhotonDistribution& p, double tol = 1e-12) {
    for (int n = p.dim() - 1; n >= 0; --n)
        if (p.probs[n] > tol) return n;
    return -1;
}

/// Coherent-state coefficients c_n = e^{-|a|^2/2} a^n / sqrt(n!).
inline Truncated<FockVector> coherent_vector(complexd alpha, int dim) {
    detail::require_dim(dim);
    FockVector v;
    v.amplitudes = Eigen::VectorXcd::Zero(dim);
    const double r = std::abs(alpha);
    if (r == 0.0) {
        v.amplitudes[0] = 1.0;
        return {std::move(v), 0.0};
    }
    const double theta = std::arg(alpha);
    const double logr = std::log(r);
    long double captured = 0.0L;
    for (int n = 0; n < dim; ++n) {
        double logmag = -0.5 * r * r + n * logr - 0.5 * std::lgamma(n + 1.0);
        double mag = std::exp(logmag);
        v.amplitudes[n] = std::polar(mag, n * theta);
        captured += static_cast<long double>(mag) * mag;
    }
    double loss = static_cast<double>(1.0L - captured);
    return {std::move(v), loss};
}

/// Cat state N[|a><a| + |-a><-a| + e^{ip}|a><-a| + e^{-ip}|-a><a|],
/// N = 1 / (2 + 2 e^{-2|a|^2} cos p).
inline Truncated<DensityMatrix> cat_density(complexd alpha, double phi, int dim) {
    detail::require_dim(dim);
    const double denom = 2.0 + 2.0 * std::exp(-2.0 * std::norm(alpha)) * std::cos(phi);
    if (denom <= 1e-15)
        throw Error(ErrorKind::degenerate_state, "cat normalization vanishes (alpha, phi degenerate)");
    const double norm = 1.0 / denom;

    auto plus = coherent_vector(alpha, dim);
    auto minus = coherent_vector(-alpha, dim);
    const auto& c = plus.value.amplitudes;
    const auto& d = minus.value.amplitudes;
    const complexd cross = std::polar(1.0, phi);

    DensityMatrix rho;
    rho.elements = norm * (c * c.adjoint() + d * d.adjoint() +
                           cross * (c * d.adjoint()) + std::conj(cross) * (d * c.adjoint()));
    rho.elements = 0.5 * (rho.elements + rho.elements.adjoint()).eval();
    double loss = 1.0 - rho.trace_real();
    return {std::move(rho), loss};
}

/// Matrix elements <m|D(beta)|n> of the displacement operator
/// D(beta) = exp(beta a^dag - conj(beta) a), from the closed-form
/// associated-Laguerre expression with log-factorial stabilization.
/// Column 0 is the coherent state |beta>.
inline Eigen::MatrixXcd displacement_matrix(complexd beta, int dim) {
    detail::require_dim(dim);
    if (beta == complexd(0.0, 0.0)) return Eigen::MatrixXcd::Identity(dim, dim);

    const double r = std::abs(beta);
    const double x = r * r;
    const double theta = std::arg(beta);
    const double logr = std::log(r);

    Eigen::VectorXd half_lgamma(dim);
    for (int n = 0; n < dim; ++n) half_lgamma[n] = 0.5 * std::lgamma(n + 1.0);

    Eigen::MatrixXcd u(dim, dim);
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n <= m; ++n) {
            // <m|D|n> = sqrt(n!/m!) beta^{m-n} e^{-x/2} L_n^{(m-n)}(x)
            const int d = m - n;
            long double lag = detail::assoc_laguerre_ld(n, d, x);
            double logmag = half_lgamma[n] - half_lgamma[m] + d * logr - 0.5 * x;
            double val = static_cast<double>(std::exp(static_cast<long double>(logmag)) * lag);
            u(m, n) = std::polar(1.0, d * theta) * val;
            if (m != n) {
                // <n|D|m> = sqrt(n!/m!) (-conj(beta))^{m-n} e^{-x/2} L_n^{(m-n)}(x)
                double sign = (d % 2 == 0) ? 1.0 : -1.0;
                u(n, m) = std::polar(sign, -d * theta) * val;
            }
        }
    }
    return u;
}

/// rho_beta = D^dag(beta) rho D(beta); Hermiticity restored exactly by
/// symmetrizing after the product.
inline DensityMatrix displace(const DensityMatrix& rho, complexd beta) {
    const int dim = rho.dim();
    if (dim < 1 || rho.elements.cols() != dim)
        throw Error(ErrorKind::dimension_mismatch, "displace: density matrix must be square and non-empty");
    Eigen::MatrixXcd u = displacement_matrix(beta, dim);
    DensityMatrix out;
    out.elements = u.adjoint() * rho.elements * u;
    out.elements = 0.5 * (out.elements + out.elements.adjoint()).eval();
    return out;
}

/// Diagonal of rho as a probability vector. Round-off negatives in
/// [-1e-12, 0) are clamped to zero; anything more negative is a bug
/// upstream, not truncation noise.
inline PhotonDistribution number_distribution(const DensityMatrix& rho) {
    const int dim = rho.dim();
    PhotonDistribution p;
    p.probs = Eigen::VectorXd(dim);
    for (int n = 0; n < dim; ++n) {
        double v = rho.elements(n, n).real();
        if (v < -1e-12)
            throw Error(ErrorKind::unphysical_state,
                        "number_distribution: diagonal entry " + std::to_string(n) +
                            " is " + std::to_string(v) + " < -1e-12");
        p.probs[n] = (v < 0.0) ? 0.0 : v;
    }
    return p;
}

}  // namespace wigrec
