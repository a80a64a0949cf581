#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tippetop/dynamics.hpp"

using namespace tippetop;

namespace {

TopParameters example1() {
    const double m = 0.02, R = 0.02;
    return TopParameters::make_rational(m, R, 0.3, 0.4 * m * R * R);
}

GlideState spun(double theta, double omega3) {
    GlideState s;
    s.theta = theta;
    s.omega3 = omega3;
    return s;
}

// Independent rendering of the reduced equations, assembled term by term in a
// different grouping than dynamics.hpp.
ode::State<6> reference_derivative(const GlideState& s, const TopParameters& p, double mu) {
    const double st = std::sin(s.theta), ct = std::cos(s.theta);
    const double gn = normal_force(s, p, FrictionModel{mu});
    const double td = s.theta_dot, pd = s.phi_dot, w3 = s.omega3;
    const double m = p.m, R = p.R, al = p.alpha, I1 = p.I1, I3 = p.I3;
    ode::State<6> dy{};
    dy[0] = td;
    dy[1] = st * pd * pd * ct - (I3 / I1) * st * w3 * pd - R * al * gn * st / I1 +
            R * mu * gn * s.nu_x * (1.0 - al * ct) / I1;
    dy[2] = (I3 / I1) * td * w3 / st - 2.0 * td * pd * ct / st -
            mu * gn * s.nu_y * R * (al - ct) / (I1 * st);
    dy[3] = -(R / I3) * mu * gn * s.nu_y * st;
    dy[4] = (R * st / I1) * (pd * w3 * (I3 - I3 * al * ct - I1)) +
            (R * R * st / I1) * gn * al * (1.0 - al * ct) - R * st * al * (td * td + pd * pd * st * st) -
            mu * gn * s.nu_x / m - mu * gn * s.nu_x * R * R * (1.0 - al * ct) * (1.0 - al * ct) / I1 +
            pd * s.nu_y;
    dy[5] = -mu * gn * s.nu_y * (1.0 / m + R * R * (al - ct) * (al - ct) / I1 + R * R * st * st / I3) +
            (R / I1) * w3 * td * (I3 * (al - ct) + I1 * ct) - pd * s.nu_x;
    return dy;
}

} // namespace

TEST_CASE("normal force limits") {
    const auto p = example1();
    const FrictionModel f{0.3};

    GlideState s = spun(0.7, 0.0);
    const double expected = p.m * p.g * p.I1 /
                            (p.I1 + p.m * p.R * p.R * p.alpha * p.alpha * std::sin(0.7) *
                                        std::sin(0.7));
    CHECK(normal_force(s, p, f) == Catch::Approx(expected).epsilon(1e-14));

    CHECK(normal_force(spun(1e-9, 0.0), p, f) == Catch::Approx(p.m * p.g).epsilon(1e-12));
    CHECK(normal_force(spun(std::acos(-1.0) - 1e-6, 0.0), p, f) ==
          Catch::Approx(p.m * p.g).epsilon(1e-9));

    // large mu nu_x can push the denominator through zero
    GlideState bad = spun(1.2, 10.0);
    bad.nu_x = 1e7;
    CHECK_THROWS_AS(normal_force(bad, p, FrictionModel{1.0}), NonPositiveDenominator);

    // strong forward precession against the spin makes the numerator negative
    GlideState lift = spun(std::acos(-1.0) / 2.0, 2000.0);
    lift.phi_dot = 2000.0;
    CHECK_THROWS_AS(normal_force(lift, p, f), NegativeNormalForce);
}

TEST_CASE("glide derivative term cancellations and cross-check") {
    const auto p = example1();

    // mu = 0, v_A = 0, theta = pi/2, phi_dot = 0: theta_ddot = -R alpha g_n / I1
    GlideState s = spun(std::acos(-1.0) / 2.0, 120.0);
    const auto dy = glide_derivative(s, p, FrictionModel{0.0});
    const double gn = normal_force(s, p, FrictionModel{0.0});
    CHECK(dy[1] == Catch::Approx(-p.R * p.alpha * gn / p.I1).epsilon(1e-13));
    CHECK(dy[3] == 0.0);

    // mu = 0 keeps omega3 constant for any state
    GlideState r = spun(0.9, 80.0);
    r.theta_dot = 3.0;
    r.phi_dot = -2.0;
    r.nu_x = 0.2;
    r.nu_y = -0.4;
    CHECK(glide_derivative(r, p, FrictionModel{0.0})[3] == 0.0);

    // the Fig 3a initial state: gliding is initiated through nu_x, not nu_y
    GlideState s0 = spun(0.1, 155.0);
    const auto d0 = glide_derivative(s0, p, FrictionModel{0.3});
    CHECK(d0[4] > 0.0);
    CHECK(d0[5] == 0.0);

    // all five equations against the independent rendering
    for (const double mu : {0.0, 0.3}) {
        for (const GlideState& st : {r, s0, spun(2.5, -40.0)}) {
            const auto got = glide_derivative(st, p, FrictionModel{mu});
            const auto want = reference_derivative(st, p, mu);
            for (int i = 0; i < 6; ++i)
                CHECK(got[i] == Catch::Approx(want[i]).margin(1e-12).epsilon(1e-12));
        }
    }

    CHECK_THROWS_AS(glide_derivative(spun(1e-9, 10.0), p, FrictionModel{0.0}),
                    SinThetaUnderflow);
}

TEST_CASE("gliding initiates nu_y after a short time") {
    const auto p = example1();
    const auto traj = integrate(spun(0.1, 155.0), p, FrictionModel{0.3}, 0.05, 1e-10, 1e-13,
                                0.01);
    CHECK(std::abs(traj.samples.back().state.nu_y) > 0.0);
}

TEST_CASE("rolling derivative is restoring") {
    const auto p = example1();
    const double lambda = 2.0 * lambda_threshold(p);
    const auto bv = boundary_values(lambda, p);
    const double D = 0.5 * (bv.D0 + bv.D1);
    const auto zm = find_minimum(D, lambda, p);
    const double theta_min = std::acos(zm.z);

    // at the minimum with theta_dot = 0 the acceleration vanishes
    CHECK(std::abs(rolling_derivative(theta_min, 0.0, D, p, lambda)[1]) < 1e-6);

    // displaced from the minimum the sign restores toward it, matching the
    // finite-difference slope of V in theta
    for (const double dtheta : {-0.3, -0.1, 0.1, 0.3}) {
        const double theta = theta_min + dtheta;
        const double acc = rolling_derivative(theta, 0.0, D, p, lambda)[1];
        const double h = 1e-6;
        const double dV = (v_rational(std::cos(theta + h), D, lambda, p) -
                           v_rational(std::cos(theta - h), D, lambda, p)) /
                          (2.0 * h);
        CHECK(acc * dV < 0.0);
        CHECK(acc * dtheta < 0.0);
    }
}

TEST_CASE("frictionless gliding conserves lambda and E exactly") {
    const auto p = example1();
    const auto traj = integrate(spun(0.1, 155.0), p, FrictionModel{0.0}, 2.0, 1e-9, 1e-12, 1e-3);
    REQUIRE(traj.meta.reason == StopReason::Completed);
    const auto& first = traj.samples.front().diag;
    for (const auto& s : traj.samples) {
        CHECK(std::abs(s.diag.lambda - first.lambda) <= 1e-7 * std::abs(first.lambda));
        CHECK(std::abs(s.diag.E_total - first.E_total) <= 1e-7 * std::abs(first.E_total));
    }
    const auto rep = conservation_report(traj);
    CHECK(rep.energy_monotone);
    CHECK(rep.max_energy_rise < 1e-9 * std::abs(first.E_total));
}

TEST_CASE("sampling grid is pure observation") {
    const auto p = example1();
    const auto coarse = integrate(spun(0.1, 155.0), p, FrictionModel{0.3}, 0.2, 1e-9, 1e-12, 1e-3);
    const auto fine = integrate(spun(0.1, 155.0), p, FrictionModel{0.3}, 0.2, 1e-9, 1e-12, 5e-4);
    CHECK(coarse.meta.accepted_steps == fine.meta.accepted_steps);
    for (std::size_t k = 0; k < coarse.samples.size() && 2 * k < fine.samples.size(); ++k) {
        CHECK(coarse.samples[k].state.theta == fine.samples[2 * k].state.theta);
        CHECK(coarse.samples[k].state.omega3 == fine.samples[2 * k].state.omega3);
    }
}

TEST_CASE("integration halts when the top would leave the surface") {
    const auto p = example1();
    GlideState lift = spun(std::acos(-1.0) / 2.0, 2000.0);
    lift.phi_dot = 2000.0;
    const auto traj = integrate(lift, p, FrictionModel{0.3}, 1.0, 1e-9, 1e-12, 1e-3);
    CHECK(traj.meta.reason == StopReason::NegativeNormalForce);
    CHECK(traj.samples.empty());
}

TEST_CASE("integration halts at the Euler-angle chart boundary") {
    const auto p = example1();
    // no spin, falling axis: theta crosses the sin(theta) validity threshold
    GlideState fall;
    fall.theta = 0.01;
    fall.theta_dot = -0.2;
    const auto traj = integrate(fall, p, FrictionModel{0.0}, 1.0, 1e-9, 1e-12, 1e-3);
    CHECK(traj.meta.reason == StopReason::SinThetaUnderflow);
    CHECK_FALSE(traj.samples.empty());
    CHECK(traj.samples.back().state.theta < 0.01);
}

TEST_CASE("inversion detection on synthetic trajectories") {
    const auto p = example1();
    Trajectory flat;
    flat.params = p;
    for (int i = 0; i <= 100; ++i) {
        TrajectorySample s;
        s.t = 0.01 * i;
        s.state = spun(0.4, 10.0);
        flat.samples.push_back(s);
    }
    const auto rep = detect_inversion(flat);
    CHECK_FALSE(rep.completed);
    CHECK(rep.sign_changes == 0);
    CHECK(std::isnan(rep.onset_time));

    // theta(t) = pi/2 + 0.1 sin t on [0, 20]: six zeros of cos t
    Trajectory wave;
    wave.params = p;
    for (int i = 0; i <= 2000; ++i) {
        TrajectorySample s;
        s.t = 0.01 * i;
        s.state.theta = std::acos(-1.0) / 2.0 + 0.1 * std::sin(s.t);
        s.state.theta_dot = 0.1 * std::cos(s.t);
        s.state.omega3 = 1.0;
        wave.samples.push_back(s);
    }
    const auto wrep = detect_inversion(wave);
    CHECK(wrep.sign_changes == 6);
    CHECK_FALSE(wrep.completed);
}

TEST_CASE("conservation report needs three samples") {
    const auto p = example1();
    Trajectory t;
    t.params = p;
    CHECK_THROWS_AS(conservation_report(t), OutOfDomain);
}
