#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "test_helpers.hpp"
#include "wigrec/recon.hpp"

using namespace wigrec;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

ReconPlan cat_plan() {
    ReconPlan plan;
    plan.state = {InitialState::Kind::cat, {2.0, 0.0}, 0.0, 0};
    plan.gamma = 1.0;
    plan.t_d = 0.01;
    plan.t_meas = 0.1;
    plan.x_axis = make_axis(-1.0, 0.5, 1.0);
    plan.y_axis = make_axis(-1.0, 0.5, 1.0);
    plan.dim = 64;
    return plan;
}

}  // namespace

TEST_CASE("drive_for_target: zero target needs no drive") {
    REQUIRE(drive_for_target({0.0, 0.0}, 1.0, 0.01) == complexd(0.0, 0.0));
}

TEST_CASE("drive_for_target: algebraic inverse of the effective amplitude") {
    const complexd target{0.0, 2.0};
    complexd alpha = drive_for_target(target, 1.0, 0.01);
    complexd back = effective_drive_amplitude({alpha, 0.01}, 1.0);
    REQUIRE(std::abs(back - target) < 1e-12);
}

TEST_CASE("drive_for_target: short-drive limit and the t_d = 0 error") {
    complexd alpha = drive_for_target({1.0, 0.0}, 1.0, 1e-10);
    REQUIRE_THAT(alpha.real() * 1e-10, WithinAbs(-1.0, 1e-7));
    REQUIRE_THROWS_AS(drive_for_target({1.0, 0.0}, 1.0, 0.0), Error);
}

TEST_CASE("reconstruct_point: vacuum gives the Gaussian Wigner function") {
    ReconPlan plan = cat_plan();
    plan.state = {InitialState::Kind::coherent, {0.0, 0.0}, 0.0, 0};
    plan.dim = 48;
    for (complexd beta : {complexd{0.0, 0.0}, complexd{1.0, 0.5}, complexd{-0.3, 1.2}}) {
        REQUIRE_THAT(reconstruct_point(plan, beta),
                     WithinAbs(kTwoOverPi * std::exp(-2.0 * std::norm(beta)), 1e-9));
    }
}

TEST_CASE("reconstruct_point: displaced initial state fixes the orientation") {
    // coherent(1) has its peak at +1; a sign slip anywhere in the drive
    // plumbing would mirror it to -1
    ReconPlan plan = cat_plan();
    plan.state = {InitialState::Kind::coherent, {1.0, 0.0}, 0.0, 0};
    plan.dim = 48;
    for (complexd beta : {complexd{0.5, 0.0}, complexd{-0.5, 0.0}, complexd{1.0, 0.0}}) {
        double expect = kTwoOverPi * std::exp(-2.0 * std::norm(beta - 1.0));
        REQUIRE_THAT(reconstruct_point(plan, beta), WithinAbs(expect, 1e-9));
    }
}

TEST_CASE("reconstruct_point: even cat parity at the origin, decay notwithstanding") {
    ReconPlan plan = cat_plan();
    REQUIRE_THAT(reconstruct_point(plan, {0.0, 0.0}), WithinAbs(kTwoOverPi, 1e-9));
}

TEST_CASE("reconstruct_point: measurement-time invariance") {
    ReconPlan plan = cat_plan();
    for (complexd beta : {complexd{0.0, 2.0}, complexd{0.5, 0.25}, complexd{0.0, 0.3927}}) {
        plan.t_meas = 0.05;
        double a = reconstruct_point(plan, beta);
        plan.t_meas = 0.1;
        double b = reconstruct_point(plan, beta);
        plan.t_meas = 0.2;
        double c = reconstruct_point(plan, beta);
        REQUIRE_THAT(a, WithinAbs(b, 1e-9));
        REQUIRE_THAT(b, WithinAbs(c, 1e-9));
        REQUIRE_THAT(a, WithinAbs(testutil::cat_wigner(2.0, beta), 1e-9));
    }
}

TEST_CASE("reconstruct_point: noiseless probe path agrees with the analytic path") {
    ReconPlan plan = cat_plan();
    double analytic = reconstruct_point(plan, {0.0, 2.0});
    plan.path = EvalPath::probe;
    plan.probe.lambda = 500.0;
    plan.probe.noise_sigma = 0.0;
    for (int samples : {256, 1024}) {
        plan.probe.tau_samples = samples;
        // default series cutoff dim + 8: quadrature round-off amplified by
        // |chi|^m still lands far inside the quadrature-limited tolerance
        plan.probe_m_max = 0;
        REQUIRE_THAT(reconstruct_point(plan, {0.0, 2.0}), WithinAbs(analytic, 1e-4));
        REQUIRE_THAT(reconstruct_point(plan, {0.0, 2.0}), WithinAbs(analytic, 1e-6));
        // a certified cutoff sized to the state's support is essentially exact
        plan.probe_m_max = 40;
        REQUIRE_THAT(reconstruct_point(plan, {0.0, 2.0}), WithinAbs(analytic, 1e-10));
    }
}

TEST_CASE("reconstruct_grid: matches the direct Wigner map of the initial state") {
    ReconPlan plan = cat_plan();
    plan.x_axis = make_axis(-1.0, 0.25, 1.0);
    plan.y_axis = make_axis(-0.5, 0.25, 2.0);
    auto grid = reconstruct_grid(plan);
    auto rho0 = initial_density(plan.state, plan.dim);
    double worst = 0.0;
    for (int idx = 0; idx < grid.points(); ++idx)
        worst = std::max(worst, std::abs(grid.values[idx] - wigner_direct(rho0.value, grid.point(idx))));
    REQUIRE(worst < 1e-9);
    REQUIRE(grid.meta.probe_path == false);
    REQUIRE(grid.meta.t_meas == 0.1);
}

TEST_CASE("reconstruct_grid: vacuum normalization and peak") {
    ReconPlan plan = cat_plan();
    plan.state = {InitialState::Kind::coherent, {0.0, 0.0}, 0.0, 0};
    plan.dim = 32;
    plan.x_axis = make_axis(-3.0, 0.25, 3.0);
    plan.y_axis = make_axis(-3.0, 0.25, 3.0);
    auto grid = reconstruct_grid(plan);
    REQUIRE_THAT(riemann_mass(grid), WithinAbs(1.0, 0.02));
    REQUIRE_THAT(grid.max_value(), WithinAbs(kTwoOverPi, 1e-9));
}

TEST_CASE("reconstruct_grid: deterministic across thread counts with a noisy probe") {
    ReconPlan plan = cat_plan();
    plan.path = EvalPath::probe;
    plan.probe.lambda = 500.0;
    plan.probe.tau_samples = 256;
    plan.probe.noise_sigma = 0.01;
    plan.probe.seed = 4242;
    plan.probe_m_max = 16;
    plan.x_axis = {0.0};
    plan.y_axis = make_axis(0.0, 0.25, 2.0);

    plan.threads = 1;
    auto serial = reconstruct_grid(plan);
    plan.threads = 3;
    auto parallel = reconstruct_grid(plan);
    REQUIRE(serial.values == parallel.values);

    plan.probe.seed = 4243;
    auto reseeded = reconstruct_grid(plan);
    REQUIRE(serial.values != reseeded.values);
}

TEST_CASE("snapshot_series: zero delay reproduces reconstruct_grid") {
    ReconPlan plan = cat_plan();
    auto grid = reconstruct_grid(plan);
    auto snaps = snapshot_series(plan, {0.0});
    REQUIRE(snaps.size() == 1);
    REQUIRE(snaps[0].grid.values == grid.values);
}

TEST_CASE("snapshot_series: fringe contrast decays by the decoherence factor") {
    ReconPlan plan = cat_plan();
    plan.x_axis = {0.0};
    plan.y_axis = {0.0};
    auto snaps = snapshot_series(plan, {0.0, 0.1});
    double ratio = snaps[1].grid.values[0] / snaps[0].grid.values[0];
    const double eta = std::exp(-0.1);
    const double expect = (std::exp(-8.0 * eta) + std::exp(-8.0 * (1.0 - eta))) / (1.0 + std::exp(-8.0));
    REQUIRE_THAT(ratio, WithinAbs(expect, 1e-6));
    REQUIRE_THAT(ratio, WithinAbs(0.467, 0.01));
}

TEST_CASE("snapshot_series: interference negativity decays monotonically") {
    ReconPlan plan = cat_plan();
    plan.x_axis = {0.0};
    plan.y_axis = make_axis(0.0, 0.125, 1.0);
    auto snaps = snapshot_series(plan, {0.0, 0.1, 0.5});
    double m0 = std::abs(snaps[0].grid.min_value());
    double m1 = std::abs(snaps[1].grid.min_value());
    double m2 = std::abs(snaps[2].grid.min_value());
    REQUIRE(snaps[0].grid.min_value() < -0.4);
    REQUIRE(m0 > m1);
    REQUIRE(m1 > m2);
}

TEST_CASE("snapshot_series: each snapshot equals the direct map of the decayed state") {
    ReconPlan plan = cat_plan();
    plan.x_axis = make_axis(-0.5, 0.5, 0.5);
    plan.y_axis = make_axis(0.0, 0.5, 1.0);
    auto snaps = snapshot_series(plan, {0.0, 0.2});
    auto rho0 = initial_density(plan.state, plan.dim);
    auto decayed = damp(rho0.value, DecayParams(1.0, 0.2));
    for (int idx = 0; idx < snaps[1].grid.points(); ++idx) {
        REQUIRE_THAT(snaps[1].grid.values[idx],
                     WithinAbs(wigner_direct(decayed, snaps[1].grid.point(idx)), 1e-9));
    }
}

TEST_CASE("snapshot_series: rejects unsorted or negative delays") {
    ReconPlan plan = cat_plan();
    REQUIRE_THROWS_AS(snapshot_series(plan, {0.2, 0.1}), Error);
    REQUIRE_THROWS_AS(snapshot_series(plan, {-0.1, 0.1}), Error);
}

TEST_CASE("validate_plan: rejects broken configurations") {
    ReconPlan plan = cat_plan();
    plan.gamma = -1.0;
    REQUIRE_THROWS_AS(validate_plan(plan), Error);

    plan = cat_plan();
    plan.s = 0.5;
    REQUIRE_THROWS_AS(validate_plan(plan), Error);

    plan = cat_plan();
    plan.path = EvalPath::probe;
    plan.probe.lambda = 50.0;  // not strong coupling
    REQUIRE_THROWS_AS(validate_plan(plan), Error);

    plan = cat_plan();
    plan.path = EvalPath::probe;
    plan.probe.lambda = 500.0;
    plan.probe.tau_samples = 64;
    plan.probe_m_max = 40;  // Nyquist
    REQUIRE_THROWS_AS(validate_plan(plan), Error);

    plan = cat_plan();
    plan.state.kind = InitialState::Kind::fock;
    plan.state.n = 80;
    REQUIRE_THROWS_AS(validate_plan(plan), Error);
}

TEST_CASE("reconstruct_point: refuses an uncertifiable truncation") {
    ReconPlan plan = cat_plan();
    plan.dim = 8;
    REQUIRE_THROWS_AS(reconstruct_point(plan, {0.0, 0.0}), Error);
}

TEST_CASE("reconstruct_point: s = -1 gives the Q function of the initial state") {
    ReconPlan plan = cat_plan();
    plan.s = -1.0;
    auto rho0 = initial_density(plan.state, plan.dim);
    for (complexd beta : {complexd{0.0, 0.0}, complexd{1.5, 0.5}}) {
        auto c = coherent_vector(beta, plan.dim);
        double q_oracle = (c.value.amplitudes.adjoint() * rho0.value.elements * c.value.amplitudes)(0, 0).real() /
                          std::numbers::pi;
        REQUIRE_THAT(reconstruct_point(plan, beta), WithinAbs(q_oracle, 1e-9));
    }
}
