#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "tippetop/model.hpp"

using namespace tippetop;

namespace {

TopParameters example1() {
    const double m = 0.02, R = 0.02;
    return TopParameters::make_rational(m, R, 0.3, 0.4 * m * R * R);
}

} // namespace

TEST_CASE("rational inertia reproduces the 131/350 example") {
    const double m = 0.02, R = 0.02, I3 = 0.4 * m * R * R;
    const double I1 = derive_rational_inertia(I3, m, R, 0.3);
    CHECK(I1 == Catch::Approx(131.0 / 350.0 * m * R * R).epsilon(1e-14));
    CHECK(I1 / I3 == Catch::Approx(131.0 / 140.0).epsilon(1e-14));
}

TEST_CASE("rational inertia degenerates to I3 as alpha -> 0") {
    const double m = 0.02, R = 0.02, I3 = m * R * R;
    const double I1 = derive_rational_inertia(I3, m, R, 1e-9);
    CHECK(I1 == Catch::Approx(I3).epsilon(1e-12));
}

TEST_CASE("rational inertia for the Cohen geometry lands in (1-alpha^2, 1)") {
    const double m = 0.015, R = 0.025, I3 = 0.4 * m * R * R;
    const double I1 = derive_rational_inertia(I3, m, R, 0.2);
    // independent evaluation: (I3^2 + m R^2 I3 (1 - 0.04)) / (I3 + m R^2)
    const double mR2 = m * R * R;
    CHECK(I1 == Catch::Approx((I3 * I3 + mR2 * I3 * 0.96) / (I3 + mR2)).epsilon(1e-15));
    const double gamma = I1 / I3;
    CHECK(gamma > 0.96);
    CHECK(gamma < 1.0);
}

TEST_CASE("parameter factories derive the ratios and flags") {
    const auto p = example1();
    CHECK(p.gamma == Catch::Approx(131.0 / 140.0).epsilon(1e-14));
    CHECK(p.sigma == Catch::Approx(2.5).epsilon(1e-14));
    CHECK(p.rational_regime());
    CHECK(p.inversion_regime());

    const auto cohen = TopParameters::make(0.015, 0.025, 0.2, 0.4 * 0.015 * 0.025 * 0.025,
                                           0.4 * 0.015 * 0.025 * 0.025);
    CHECK(cohen.inversion_regime());
    CHECK_FALSE(cohen.rational_regime());

    CHECK_THROWS_AS(TopParameters::make(0.02, 0.02, 1.5, 1e-6, 1e-6), OutOfDomain);
    CHECK_THROWS_AS(TopParameters::make(-0.02, 0.02, 0.3, 1e-6, 1e-6), OutOfDomain);
}

TEST_CASE("lambda threshold matches the printed value and scalings") {
    const auto p = example1();
    const double lt = lambda_threshold(p);
    CHECK(lt == Catch::Approx(3.44e-6).epsilon(0.005));

    // doubling m while holding the inertias scales the threshold by sqrt(2)
    const auto p2 = TopParameters::make(2.0 * p.m, p.R, p.alpha, p.I1, p.I3, p.g);
    CHECK(lambda_threshold(p2) == Catch::Approx(std::sqrt(2.0) * lt).epsilon(1e-12));

    // Cohen geometry: positive and below the lambda of omega3(0) = 100
    const double I = 0.4 * 0.015 * 0.025 * 0.025;
    const auto cohen = TopParameters::make(0.015, 0.025, 0.2, I, I);
    const double ltc = lambda_threshold(cohen);
    CHECK(ltc > 0.0);
    GlideState s;
    s.theta = 0.1;
    s.omega3 = 100.0;
    CHECK(jellett(s, cohen) > ltc);

    // outside the inversion regime the threshold is undefined
    const auto bad = TopParameters::make(0.02, 0.02, 0.3, 2e-6, 1e-6);
    CHECK_THROWS_AS(lambda_threshold(bad), RegimeViolation);
}

TEST_CASE("Jellett integral limits") {
    const auto p = example1();
    GlideState s;
    s.theta = 0.1;
    s.omega3 = 155.0;
    CHECK(jellett(s, p) == Catch::Approx(6.88e-6).epsilon(0.005));

    s.theta = 1e-8;
    CHECK(jellett(s, p) ==
          Catch::Approx(p.R * p.I3 * s.omega3 * (1.0 - p.alpha)).epsilon(1e-12));

    GlideState w;
    w.theta = std::acos(-1.0) / 2.0;
    w.phi_dot = 10.0;
    CHECK(jellett(w, p) == Catch::Approx(10.0 * p.R * p.I1).epsilon(1e-14));
}

TEST_CASE("d(z) forms agree") {
    const auto p = example1();
    CHECK(d_general(1.0, p) ==
          Catch::Approx(p.gamma + p.sigma * (1.0 - p.alpha) * (1.0 - p.alpha)).epsilon(1e-14));
    // at z = 0 the perfect-square form gives alpha^2/(gamma+alpha^2-1) = 3.5 exactly
    CHECK(d_general(0.0, p) == Catch::Approx(3.5).epsilon(1e-13));
    CHECK(d_general(0.0, p) ==
          Catch::Approx(p.alpha * p.alpha / (p.gamma + p.alpha * p.alpha - 1.0)).epsilon(1e-13));
    for (int i = 0; i <= 100; ++i) {
        const double z = -1.0 + 0.02 * i;
        CHECK(d_general(z, p) > 0.0);
    }
}

TEST_CASE("Routh function limits") {
    const auto p = example1();
    GlideState s;
    s.theta = 0.5;
    CHECK(routh(s, p) == 0.0);

    s.theta = 1e-9;
    s.omega3 = 155.0;
    CHECK(routh(s, p) ==
          Catch::Approx(p.I3 * 155.0 * std::sqrt(d_general(1.0, p))).epsilon(1e-12));

    // spun at theta = 0.1 the Routh value sits near the upright boundary value D0
    s.theta = 0.1;
    const double D = routh(s, p);
    const auto bv = boundary_values(jellett(s, p), p);
    CHECK(std::abs(D / bv.D0 - 1.0) < 0.02);
}

TEST_CASE("modified energy limits and the spun-top form") {
    const auto p = example1();
    const double mgR = p.m * p.g * p.R;
    GlideState s;
    s.theta = std::acos(-1.0) / 2.0;
    CHECK(modified_energy(s, p) == Catch::Approx(mgR).epsilon(1e-13));

    s.theta = 1e-9;
    CHECK(modified_energy(s, p) == Catch::Approx(mgR * (1.0 - p.alpha)).epsilon(1e-12));

    s.theta = 0.1;
    s.omega3 = 155.0;
    const double st = std::sin(s.theta);
    const double expected = 0.5 * p.I3 * 155.0 * 155.0 * (1.0 + p.sigma * st * st) +
                            mgR * (1.0 - p.alpha * std::cos(s.theta));
    CHECK(modified_energy(s, p) == Catch::Approx(expected).epsilon(1e-13));
}

TEST_CASE("total energy reduces to the modified energy at v_A = 0") {
    const auto p = example1();
    std::mt19937_64 gen(42);
    const auto uni = [&](double a, double b) {
        return a + (b - a) * ((gen() >> 11) * 0x1.0p-53);
    };
    for (int i = 0; i < 200; ++i) {
        GlideState s;
        s.theta = uni(0.05, std::acos(-1.0) - 0.05);
        s.theta_dot = uni(-20.0, 20.0);
        s.phi_dot = uni(-20.0, 20.0);
        s.omega3 = uni(-200.0, 200.0);
        const double et = modified_energy(s, p);
        CHECK(std::abs(total_energy(s, p) - et) <= 1e-13 * std::abs(et));

        s.nu_x = uni(-1.0, 1.0);
        s.nu_y = uni(-1.0, 1.0);
        const Vec3 vA = gliding_velocity(s);
        const Vec3 oxa = cross(body_angular_velocity(s), contact_arm(s, p));
        const double expected = 0.5 * p.m * dot(vA, vA) - p.m * dot(vA, oxa);
        const double diff = total_energy(s, p) - modified_energy(s, p);
        CHECK(std::abs(diff - expected) <=
              1e-12 * (std::abs(total_energy(s, p)) + std::abs(expected)));
    }

    GlideState down;
    down.theta = std::acos(-1.0) - 1e-9;
    CHECK(total_energy(down, p) ==
          Catch::Approx(p.m * p.g * p.R * (1.0 + p.alpha)).epsilon(1e-12));
}

TEST_CASE("boundary values") {
    const auto p = example1();
    const double lambda = 2.0 * lambda_threshold(p);
    const auto bv = boundary_values(lambda, p);
    CHECK(bv.D1 == Catch::Approx(-6.0e-4).epsilon(0.02));
    CHECK(bv.D0 > 0.0);
    CHECK(bv.E_tilde_0 - bv.E_tilde_1 > 0.0);

    // alpha -> 0: D0 = -D1 by symmetry
    const double m = 0.02, R = 0.02, I = 0.4 * m * R * R;
    const auto tiny = TopParameters::make(m, R, 1e-6, I, I);
    const auto bt = boundary_values(1e-6, tiny);
    CHECK(std::abs(bt.D0 + bt.D1) <= 5e-6 * std::abs(bt.D0));

    CHECK_THROWS_AS(boundary_values(-1e-6, p), OutOfDomain);
    CHECK_THROWS_AS(boundary_values(0.0, p), OutOfDomain);
}
