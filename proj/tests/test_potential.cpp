#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "tippetop/potential.hpp"

using namespace tippetop;

namespace {

TopParameters example1() {
    const double m = 0.02, R = 0.02;
    return TopParameters::make_rational(m, R, 0.3, 0.4 * m * R * R);
}

struct Fixture {
    TopParameters p = example1();
    double lambda = 2.0 * lambda_threshold(p);
    BoundaryValues bv = boundary_values(lambda, p);
};

} // namespace

TEST_CASE("ab_beta endpoint degeneracies and the linear identity") {
    Fixture f;
    const auto pp0 = ab_beta(f.bv.D0, f.lambda, f.p);
    const auto pp1 = ab_beta(f.bv.D1, f.lambda, f.p);
    const double scale = std::max(std::abs(pp0.a), std::abs(pp0.b));
    CHECK(std::abs(pp0.a + pp0.b) <= 1e-12 * scale);
    CHECK(std::abs(pp1.a - pp1.b) <= 1e-12 * scale);
    for (double u : {-0.3, 0.0, 0.4, 1.0, 1.3}) {
        const double D = f.bv.D1 + u * (f.bv.D0 - f.bv.D1);
        const auto pp = ab_beta(D, f.lambda, f.p);
        const double rhs = f.lambda * f.p.gamma * f.p.alpha;
        CHECK(std::abs(pp.b + f.p.alpha * pp.a - rhs) <= 1e-12 * rhs);
        CHECK(pp.beta > 0.0);
    }
    const auto cohen = TopParameters::make(0.015, 0.025, 0.2, 0.4 * 0.015 * 0.025 * 0.025,
                                           0.4 * 0.015 * 0.025 * 0.025);
    CHECK_THROWS_AS(ab_beta(0.0, 1e-6, cohen), RegimeViolation);
    CHECK_THROWS_AS(ab_beta(0.0, -1e-6, f.p), OutOfDomain);
}

TEST_CASE("rational potential reduces to the gravity line at D = lambda = 0") {
    const auto p = example1();
    for (double z : {-0.9, -0.3, 0.0, 0.4, 0.9})
        CHECK(v_rational(z, 0.0, 0.0, p) ==
              Catch::Approx(p.m * p.g * p.R * (1.0 - p.alpha * z)).epsilon(1e-13));
}

TEST_CASE("rational potential has simple poles at the boundary") {
    Fixture f;
    const double D = 0.5 * (f.bv.D0 + f.bv.D1);
    const double mid = v_rational(0.0, D, f.lambda, f.p);
    CHECK(v_rational(1.0 - 1e-6, D, f.lambda, f.p) > 1e3 * mid);
    CHECK(v_rational(-1.0 + 1e-6, D, f.lambda, f.p) > 1e3 * mid);
    CHECK_THROWS_AS(v_rational(1.0, D, f.lambda, f.p), PoleAtBoundary);
    CHECK_THROWS_AS(v_rational(-1.0, D, f.lambda, f.p), PoleAtBoundary);
    CHECK_THROWS_AS(v_algebraic(1.0, D, f.lambda, f.p), PoleAtBoundary);
}

TEST_CASE("algebraic potential is finite for the Cohen geometry") {
    const double I = 0.4 * 0.015 * 0.025 * 0.025;
    const auto cohen = TopParameters::make(0.015, 0.025, 0.2, I, I);
    for (int i = 0; i <= 100; ++i) {
        const double z = -0.999 + 1.998 * i / 100.0;
        CHECK(std::isfinite(v_algebraic(z, 1e-4, 6.5e-6, cohen)));
        CHECK(d_general(z, cohen) > 0.0);
    }
}

TEST_CASE("rational and algebraic potentials coincide in the rational regime") {
    Fixture f;
    for (double u : {0.1, 0.5, 0.9}) {
        const double D = f.bv.D1 + u * (f.bv.D0 - f.bv.D1);
        for (int i = 0; i < 200; ++i) {
            const double z = -0.999 + 1.998 * i / 199.0;
            const double vr = v_rational(z, D, f.lambda, f.p);
            const double va = v_algebraic(z, D, f.lambda, f.p);
            CHECK(std::abs(vr - va) <= 1e-11 * (std::abs(vr) + std::abs(va)));
        }
    }
}

TEST_CASE("dense grid search pins the minimum to the bisection result") {
    Fixture f;
    const double D = f.bv.D1 + 0.37 * (f.bv.D0 - f.bv.D1);
    const auto zm = find_minimum(D, f.lambda, f.p);
    // 1e6-point scan plus parabolic refinement of the bracketing triple
    const int n = 1000000;
    int best = 1;
    double vbest = std::numeric_limits<double>::infinity();
    for (int i = 1; i + 1 < n; ++i) {
        const double z = -1.0 + 2.0 * i / (n - 1);
        const double v = v_algebraic(z, D, f.lambda, f.p);
        if (v < vbest) {
            vbest = v;
            best = i;
        }
    }
    const double h = 2.0 / (n - 1);
    const double z0 = -1.0 + 2.0 * best / (n - 1);
    const double vm = v_algebraic(z0 - h, D, f.lambda, f.p);
    const double vp = v_algebraic(z0 + h, D, f.lambda, f.p);
    const double refined = z0 + 0.5 * h * (vm - vp) / (vm - 2.0 * vbest + vp);
    CHECK(std::abs(refined - zm.z) < 1e-8);
}

TEST_CASE("kinetic coefficient g(z)") {
    const auto p = example1();
    const double k = p.gamma + p.alpha * p.alpha - 1.0;
    CHECK(g_coefficient(-1.0, p) ==
          Catch::Approx(p.I3 * (p.alpha + 1.0 - p.gamma) * (p.alpha + 1.0 - p.gamma) /
                        (2.0 * k))
              .epsilon(1e-13));
    // affine in z
    CHECK(g_coefficient(0.0, p) ==
          Catch::Approx(0.5 * (g_coefficient(-1.0, p) + g_coefficient(1.0, p))).epsilon(1e-14));
    CHECK(g_coefficient(-1.0, p) > g_coefficient(1.0, p));
    // general form on the same parameters
    for (int i = 0; i <= 50; ++i) {
        const double z = -1.0 + 0.04 * i;
        const double general =
            0.5 * p.I3 * (p.sigma * (1.0 + p.alpha * p.alpha - 2.0 * p.alpha * z) + p.gamma);
        CHECK(g_coefficient(z, p) == Catch::Approx(general).epsilon(1e-12));
    }
}

TEST_CASE("p polynomial endpoints and expansion") {
    Fixture f;
    const double D = f.bv.D1 + 0.3 * (f.bv.D0 - f.bv.D1);
    const auto pp = ab_beta(D, f.lambda, f.p);
    const auto poly = p_polynomial(D, f.lambda, f.p);
    const double pm1 = -2.0 * (pp.a - pp.b) * (pp.a - pp.b);
    const double pp1 = 2.0 * (pp.a + pp.b) * (pp.a + pp.b);
    CHECK(poly(-1.0) == Catch::Approx(pm1).epsilon(1e-12));
    CHECK(poly(1.0) == Catch::Approx(pp1).epsilon(1e-12));
    // coefficient-level agreement with the factored form
    for (int i = 0; i <= 40; ++i) {
        const double z = -1.0 + 0.05 * i;
        const double want = 2.0 * (pp.a * z + pp.b) * (pp.b * z + pp.a) -
                            pp.beta * (1.0 - z * z) * (1.0 - z * z);
        CHECK(poly(z) == Catch::Approx(want).margin(1e-24).epsilon(1e-12));
    }
    // without the beta term the roots sit at -b/a and -a/b
    const RealPolynomial nobeta{{2.0 * pp.a * pp.b, 2.0 * (pp.a * pp.a + pp.b * pp.b),
                                 2.0 * pp.a * pp.b}};
    CHECK(std::abs(nobeta(-pp.b / pp.a)) <= 1e-10 * nobeta.max_magnitude());
    CHECK(std::abs(nobeta(-pp.a / pp.b)) <= 1e-10 * nobeta.max_magnitude());
}

TEST_CASE("find_minimum branches") {
    Fixture f;
    const auto top = find_minimum(f.bv.D0, f.lambda, f.p);
    CHECK(top.z == 1.0);
    CHECK(top.boundary);
    const auto bottom = find_minimum(f.bv.D1, f.lambda, f.p);
    CHECK(bottom.z == -1.0);
    CHECK(bottom.boundary);

    // a shifted D inside the guarded neighbourhood keeps the minimum low
    const auto near = find_minimum(f.bv.D1 + 3e-5, f.lambda, f.p);
    CHECK_FALSE(near.boundary);
    CHECK(near.z >= -1.0);
    CHECK(near.z <= -0.9);

    // a = b with 2 beta >= b^2 has no interior sign change
    const double small = 0.4 * lambda_threshold(f.p);
    const auto bv2 = boundary_values(small, f.p);
    CHECK_THROWS_AS(find_minimum(bv2.D1, small, f.p), NoSignChange);
}

TEST_CASE("delta guards reproduce the worked example") {
    Fixture f;
    const double dm = delta_minus(0.1, f.lambda, f.p);
    CHECK(dm == Catch::Approx(1.48e-7).epsilon(0.01));
    CHECK(dm / (f.p.R * (1.0 + f.p.alpha) * f.p.rational_root()) ==
          Catch::Approx(3.5e-5).epsilon(0.02));
    // epsilon = 0.01 tightens the bound one order of magnitude
    const double dm_tight = delta_minus(0.01, f.lambda, f.p);
    CHECK(dm_tight < 0.2 * dm);
    CHECK(dm_tight > 0.05 * dm);

    const double dp = delta_plus(0.1, f.lambda, f.p);
    CHECK(dp > 0.0);
    // a posteriori: the guarded D keeps the minimum in [0.9, 1]
    const double D = f.bv.D0 - 0.99 * dp / (f.p.R * (1.0 - f.p.alpha) * f.p.rational_root());
    const auto zm = find_minimum(D, f.lambda, f.p);
    CHECK(zm.z >= 0.9);
    CHECK(zm.z <= 1.0);

    // eps -> 1: the (1-eps)/eps^2 coefficient vanishes; solve the reduced
    // quadratic alpha gamma lambda (1+alpha) d - alpha d^2 = C independently
    const double eps1 = 1.0 - 1e-9;
    const double dp1 = delta_plus(eps1, f.lambda, f.p);
    const double beta = ab_beta(0.0, f.lambda, f.p).beta;
    const double ag = f.p.alpha * f.p.gamma * f.lambda;
    const double A1 = (1.0 - eps1) * (1.0 - f.p.alpha) * (1.0 - f.p.alpha) / (eps1 * eps1) -
                      f.p.alpha;
    const double B1 = ag * (1.0 + f.p.alpha);
    const double C1 = ag * ag + 0.5 * beta * (2.0 - eps1) * (2.0 - eps1) *
                                    (1.0 - f.p.alpha) * (1.0 - f.p.alpha);
    const double root1 = 2.0 * C1 / (B1 + std::sqrt(B1 * B1 + 4.0 * A1 * C1));
    CHECK(dp1 == Catch::Approx(root1).epsilon(1e-12));
    CHECK(dp1 == Catch::Approx(ag).epsilon(0.01));  // beta correction is below 1%

    // delta_+ scales about linearly in lambda at fixed epsilon
    const double dp10 = delta_plus(0.1, 10.0 * f.lambda, f.p);
    CHECK(dp10 / dp == Catch::Approx(10.0).epsilon(0.05));

    CHECK_THROWS_AS(delta_minus(0.1, 0.5 * lambda_threshold(f.p), f.p), OutOfDomain);
}

TEST_CASE("minimum path spans the full interval") {
    Fixture f;
    const auto path = minimum_path(f.lambda, f.p, 101);
    REQUIRE(path.size() == 101);
    CHECK(path.front().first == f.bv.D0);
    CHECK(path.front().second.z == 1.0);
    CHECK(path.back().first == f.bv.D1);
    CHECK(path.back().second.z == -1.0);
    for (std::size_t i = 1; i < path.size(); ++i)
        CHECK(path[i].second.z < path[i - 1].second.z);

    // barely above threshold the path still spans [-1, 1]
    const double lam = 1.1 * lambda_threshold(f.p);
    const auto tight = minimum_path(lam, f.p, 51);
    CHECK(tight.front().second.z == 1.0);
    CHECK(tight.back().second.z == -1.0);
}

TEST_CASE("convexity witness") {
    Fixture f;
    for (double u : {0.0, 0.5, 1.0})
        CHECK(convexity_witness(f.bv.D1 + u * (f.bv.D0 - f.bv.D1), f.lambda, f.p));

    // 100 random pairs, cross-checked against a dense second-difference grid
    std::mt19937_64 gen(11);
    const auto uni = [&](double a, double b) {
        return a + (b - a) * ((gen() >> 11) * 0x1.0p-53);
    };
    for (int i = 0; i < 100; ++i) {
        const double lambda = uni(0.2, 10.0) * lambda_threshold(f.p);
        const auto bv = boundary_values(lambda, f.p);
        const double D = bv.D1 + uni(-0.5, 1.5) * (bv.D0 - bv.D1);
        CHECK(convexity_witness(D, lambda, f.p));
        const auto pp = ab_beta(D, lambda, f.p);
        const int n = 400;
        bool convex = true;
        const auto u2 = [&](double z) {
            return (pp.a * z + pp.b) * (pp.a * z + pp.b) / (1.0 - z * z);
        };
        for (int k = 1; k + 1 < n; ++k) {
            const double z = -0.999 + 1.998 * k / (n - 1);
            const double h = 1.998 / (n - 1);
            const double d2 = u2(z - h) - 2.0 * u2(z) + u2(z + h);
            if (d2 < -1e-9 * (std::abs(u2(z - h)) + 2.0 * std::abs(u2(z)) + std::abs(u2(z + h))))
                convex = false;
        }
        CHECK(convex);
    }
}
