// validate.hpp
// Invariant suites behind the `validate` command: the algebra the whole
// reconstruction rests on, checked at desk scale with measured tolerances.

#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "wigrec/channel.hpp"
#include "wigrec/probe.hpp"
#include "wigrec/quasiprob.hpp"
#include "wigrec/recon.hpp"

namespace wigrec {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

namespace detail {

inline PhotonDistribution random_check_distribution(std::mt19937_64& rng, int dim) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(dim);
    double mean = 0.5 + 9.5 * uni(rng);
    for (int n = 0; n < dim; ++n)
        p[n] = std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
    int nf = std::min(dim - 1, static_cast<int>(12 * uni(rng)));
    p[nf] += uni(rng);
    p /= p.sum();
    PhotonDistribution out;
    out.probs = p;
    return out;
}

}  // namespace detail

/// Run the invariant suites for the given plan (state and truncation are
/// taken from it, capped at dim 32). Returns one result per check.
inline std::vector<CheckResult> run_validation(const ReconPlan& plan) {
    if (!(plan.gamma > 0.0)) throw Error(ErrorKind::config, "validate: gamma must be > 0");
    std::vector<CheckResult> results;
    const int dim_v = std::min(plan.dim, 32);
    if (dim_v < 1) throw Error(ErrorKind::config, "validate: dim must be >= 1");

    // channel telescoping identity
    {
        std::mt19937_64 rng(777);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        double worst = 0.0;
        for (int rep = 0; rep < 200; ++rep) {
            int dim = 1 + static_cast<int>(uni(rng) * (dim_v - 0.001));
            auto p0 = detail::random_check_distribution(rng, dim);
            double gt = 0.5 * uni(rng);
            auto pt = damp_diagonal(p0, DecayParams(plan.gamma, gt / plan.gamma));
            long double weighted = 0.0L, w = 1.0L, parity = 0.0L;
            const double chi = series_weight(0.0, gt);
            for (int m = 0; m < dim; ++m) {
                weighted += w * pt.probs[m];
                parity += (m % 2 == 0 ? 1.0L : -1.0L) * p0.probs[m];
                w *= chi;
            }
            worst = std::max(worst, std::abs(static_cast<double>(weighted - parity)));
        }
        results.push_back({"telescoping-identity", worst, 1e-10, worst <= 1e-10});
    }

    // time invariance of the reconstruction series + its tail certificate
    {
        auto rho0 = initial_density(plan.state, dim_v);
        double worst_spread = 0.0, worst_tail = 0.0;
        const complexd probe_points[] = {{0.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}};
        for (complexd beta : probe_points) {
            auto p0 = number_distribution(displace(rho0.value, beta));
            double reference = 0.0;
            bool first = true;
            for (double gt : {0.05, 0.1, 0.2}) {
                auto pt = damp_diagonal(p0, DecayParams(plan.gamma, gt / plan.gamma));
                auto r = quasiprob_series(pt, 0.0, gt);
                worst_tail = std::max(worst_tail, r.tail_bound);
                if (first) {
                    reference = r.value;
                    first = false;
                } else {
                    worst_spread = std::max(worst_spread, std::abs(r.value - reference));
                }
            }
        }
        results.push_back({"time-invariance", worst_spread, 1e-9, worst_spread <= 1e-9});
        results.push_back({"truncation-certificate", worst_tail, kTailThreshold, worst_tail <= kTailThreshold});
    }

    // probe cosine orthogonality on the inversion grid
    {
        const double lambda = 500.0;
        const int samples = 2048;
        const double tmax = std::numbers::pi / lambda;
        double worst = 0.0;
        InversionTrace trace;
        trace.taus.resize(samples);
        trace.values.resize(samples);
        for (int i = 0; i < samples; ++i) trace.taus[i] = i * tmax / (samples - 1);
        for (int a = 0; a <= 32; ++a) {
            for (int i = 0; i < samples; ++i)
                trace.values[i] = std::cos((2.0 * a + 3.0) * lambda * trace.taus[i]);
            auto row = invert_trace(trace, lambda, 32);
            for (int m = 0; m <= 32; ++m)
                worst = std::max(worst, std::abs(row.probs[m] - (m == a ? 1.0 : 0.0)));
        }
        results.push_back({"probe-orthogonality", worst, 1e-8, worst <= 1e-8});
    }

    // closed-form damping against the integrator oracle
    {
        auto rho0 = initial_density(plan.state, dim_v);
        auto closed = damp(rho0.value, DecayParams(plan.gamma, 0.1 / plan.gamma));
        auto rk4 = integrate_master(rho0.value, {0.0, 0.0}, plan.gamma, 0.1 / plan.gamma, 1000);
        double dist = (closed.elements - rk4.elements).norm();
        results.push_back({"damp-oracle", dist, 1e-8, dist <= 1e-8});
    }

    // drive factorization against the integrator oracle
    {
        DensityMatrix rho;
        rho.elements = Eigen::MatrixXcd::Zero(24, 24);
        rho.elements(0, 0) = 0.7;
        rho.elements(1, 1) = 0.3;
        rho.elements(0, 1) = rho.elements(1, 0) = 0.3;
        auto factored = drive_and_decay(rho, {{10.0 * plan.gamma, 0.0}, 0.05 / plan.gamma}, plan.gamma);
        auto rk4 = integrate_master(rho, {10.0 * plan.gamma, 0.0}, plan.gamma, 0.05 / plan.gamma, 3000);
        double dist = (factored.elements - rk4.elements).norm();
        results.push_back({"factorization-oracle", dist, 1e-6, dist <= 1e-6});
    }

    return results;
}

}  // namespace wigrec
