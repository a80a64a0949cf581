#pragma once

// Named checks: every module property plus the ten acceptance criteria.
// Shared by the acceptance test binary and the `verify` CLI command.
// Randomized sweeps draw from a per-check deterministic generator seeded
// from the suite seed, so results do not depend on check order or --jobs.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <mutex>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Eigenvalues>

#include "tippetop/dynamics.hpp"
#include "tippetop/elliptic.hpp"
#include "tippetop/model.hpp"
#include "tippetop/nutation.hpp"
#include "tippetop/polynomial.hpp"
#include "tippetop/potential.hpp"

namespace tippetop::verify {

template <class... Args>
std::string strf(const char* fmt, Args... args) {
    char buf[768];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

/// Deterministic uniform generator (the double mapping is fixed, not
/// implementation-defined like std::uniform_real_distribution).
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform(double a, double b) {
        return a + (b - a) * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
    }
    int uniform_int(int a, int b) {  // inclusive
        return a + static_cast<int>(gen() % static_cast<std::uint64_t>(b - a + 1));
    }
};

struct CheckResult {
    std::string name;
    bool pass = true;
    std::string detail;
};

/// Collects failures; the first few failure messages end up in the detail.
struct Gate {
    bool pass = true;
    int failures = 0;
    std::string detail;

    void require(bool ok, const std::string& msg) {
        if (ok) return;
        pass = false;
        ++failures;
        if (failures <= 3) {
            if (!detail.empty()) detail += "; ";
            detail += msg;
        }
    }
    void note(const std::string& msg) {
        if (!detail.empty()) detail += "; ";
        detail += msg;
    }
};

// ---------------------------------------------------------------------------
// shared fixtures

inline TopParameters example1_params() {
    const double m = 0.02, R = 0.02;
    return TopParameters::make_rational(m, R, 0.3, 0.4 * m * R * R);
}

inline TopParameters cohen_params() {
    const double m = 0.015, R = 0.025;
    const double I = 0.4 * m * R * R;
    return TopParameters::make(m, R, 0.2, I, I);
}

inline GlideState spun_upright_state(double omega3) {
    GlideState s;
    s.theta = 0.1;
    s.omega3 = omega3;
    return s;
}

/// The reference inverting trajectory (built once per process): Example 1
/// geometry, mu = 0.3, theta(0) = 0.1, omega3(0) = 155, 12 s at
/// rtol 1e-9 / atol 1e-12, sampled every 1e-4 s.
inline const Trajectory& fig3a_trajectory() {
    static const Trajectory traj = integrate(spun_upright_state(155.0), example1_params(),
                                             FrictionModel{0.3}, 12.0, 1e-9, 1e-12, 1e-4);
    return traj;
}

// ---------------------------------------------------------------------------
// helpers

/// Number of roots of q in (c, d] via companion-matrix eigenvalues.
inline int eigenvalue_root_count(const RealPolynomial& q, double c, double d) {
    const int n = q.degree();
    if (n < 1) return 0;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, n - 1) = -q.c[static_cast<std::size_t>(i)] / q.c.back();
    for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    int count = 0;
    for (int i = 0; i < n; ++i) {
        const auto ev = es.eigenvalues()[i];
        if (std::abs(ev.imag()) <= 1e-8 * std::max(1.0, std::abs(ev.real())) && ev.real() > c &&
            ev.real() <= d)
            ++count;
    }
    return count;
}

/// Left potential minimum of f(z) = (wz+1)^2/(1-z^2) - (eps/2) z scaled to
/// b = 1; the admissible left turning points are z1 <= z_min(w, eps).
inline double reduced_zmin(double w, double eps) {
    const double a = w, b = 1.0, beta = 0.5 * eps;
    const auto pz = [&](double z) {
        const double o = 1.0 - z * z;
        return 2.0 * (a * z + b) * (b * z + a) - beta * o * o;
    };
    double lo = -1.0, hi = 1.0;
    if (!(pz(lo) < 0.0 && pz(hi) > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (pz(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// k^2 from the companion quadratic scaled to b = 1.
inline double reduced_k2(double z1, double w, double eps) {
    const double beta = 0.5 * eps, a = w, b = 1.0;
    const double s2 = a * a + b * b, o = 1.0 - z1 * z1;
    const double P = (s2 + 2.0 * a * b * z1) / (beta * o);
    const double Q = -1.0 + (s2 * z1 + 2.0 * a * b) / (beta * o);
    const double disc = P * P - 4.0 * Q;
    if (disc < 0.0) return std::numeric_limits<double>::quiet_NaN();
    const double z3 = -0.5 * (P + std::sqrt(disc));
    const double z2 = Q / z3;
    return (z2 - z1) / (z2 - z3);
}

/// D value whose potential parameters satisfy a/b = w at the given lambda.
inline double d_of_w(double w, double lambda, const TopParameters& p) {
    const double rd = -lambda * ((1.0 - p.gamma) + w * p.alpha) / (1.0 + w * p.alpha);
    return rd / (p.R * p.rational_root());
}

/// Rolling-system oscillation period measured from theta_dot zero crossings.
inline double rolling_period(double E_tilde, double D, double lambda, const TopParameters& p,
                             double t_hint) {
    const MinimumResult zm = find_minimum(D, lambda, p);
    const double vmin = v_rational(zm.z, D, lambda, p);
    const double theta0 = std::acos(zm.z);
    const double thd0 = std::sqrt((E_tilde - vmin) / g_coefficient(zm.z, p));
    const auto roll = integrate_rolling(theta0, thd0, D, lambda, p, 2.6 * t_hint, 1e-10, 1e-13,
                                        t_hint / 2048.0);
    double crossings[2];
    int found = 0;
    for (std::size_t i = 1; i < roll.size() && found < 2; ++i) {
        if ((roll[i - 1].theta_dot > 0.0) != (roll[i].theta_dot > 0.0)) {
            const double f0 = roll[i - 1].theta_dot, f1 = roll[i].theta_dot;
            crossings[found++] = roll[i - 1].t + (roll[i].t - roll[i - 1].t) * f0 / (f0 - f1);
        }
    }
    if (found < 2) return std::numeric_limits<double>::quiet_NaN();
    return 2.0 * (crossings[1] - crossings[0]);
}

// ---------------------------------------------------------------------------
// module properties

inline CheckResult check_model_rational_d(Rng&) {
    const auto p = example1_params();
    Gate g;
    const double root = p.rational_root();
    for (int i = 0; i < 1000; ++i) {
        const double z = -1.0 + 2.0 * i / 999.0;
        const double lhs = std::sqrt(d_general(z, p));
        const double rhs = std::abs(p.alpha - (1.0 - p.gamma) * z) / root;
        g.require(std::abs(lhs - rhs) <= 1e-12 * rhs, strf("sqrt(d) mismatch at z=%.4f", z));
    }
    return {"model: perfect-square d(z) in the rational regime", g.pass, g.detail};
}

inline GlideState random_state(Rng& rng) {
    GlideState s;
    s.theta = rng.uniform(0.05, std::acos(-1.0) - 0.05);
    s.theta_dot = rng.uniform(-20.0, 20.0);
    s.phi_dot = rng.uniform(-20.0, 20.0);
    s.omega3 = rng.uniform(-200.0, 200.0);
    s.nu_x = rng.uniform(-1.0, 1.0);
    s.nu_y = rng.uniform(-1.0, 1.0);
    return s;
}

inline CheckResult check_model_energy(Rng& rng) {
    const auto p = example1_params();
    Gate g;
    for (int i = 0; i < 1000; ++i) {
        GlideState s = random_state(rng);
        GlideState sr = s;
        sr.nu_x = sr.nu_y = 0.0;
        const double et = modified_energy(sr, p);
        g.require(std::abs(total_energy(sr, p) - et) <= 1e-13 * std::abs(et),
                  "E != E~ at v_A = 0");
        // E - E~ = m v_A^2/2 - m v_A.(omega x a), and E >= E~ - m |v_A||omega x a|
        const Vec3 vA = gliding_velocity(s);
        const Vec3 oxa = cross(body_angular_velocity(s), contact_arm(s, p));
        const double diff = total_energy(s, p) - modified_energy(s, p);
        const double expected = 0.5 * p.m * dot(vA, vA) - p.m * dot(vA, oxa);
        const double scale = std::abs(total_energy(s, p)) + std::abs(expected);
        g.require(std::abs(diff - expected) <= 1e-12 * scale, "E - E~ identity failed");
        g.require(total_energy(s, p) >=
                      modified_energy(s, p) - p.m * norm(vA) * norm(oxa) - 1e-12 * scale,
                  "E lower bound failed");
    }
    return {"model: total vs modified energy identities", g.pass, g.detail};
}

inline CheckResult check_model_purity(Rng& rng) {
    const auto p = example1_params();
    Gate g;
    for (int i = 0; i < 10; ++i) {
        const GlideState s = random_state(rng);
        g.require(jellett(s, p) == jellett(s, p) && routh(s, p) == routh(s, p) &&
                      modified_energy(s, p) == modified_energy(s, p) &&
                      total_energy(s, p) == total_energy(s, p),
                  "same input did not give bit-identical output");
    }
    return {"model: integral evaluations are pure", g.pass, g.detail};
}

inline CheckResult check_model_threshold_monotone(Rng&) {
    const auto base = example1_params();
    Gate g;
    double prev = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double alpha = (1.0 - base.gamma) + 1e-3 + (0.999 - (1.0 - base.gamma) - 1e-3) * i / 99.0;
        const auto p = TopParameters::make(base.m, base.R, alpha, base.I1, base.I3, base.g);
        const double lt = lambda_threshold(p);
        g.require(lt > 0.0, "lambda_thres not positive");
        g.require(i == 0 || lt > prev, strf("lambda_thres not increasing at alpha=%.3f", alpha));
        prev = lt;
    }
    return {"model: lambda_thres positive and increasing in alpha", g.pass, g.detail};
}

inline CheckResult check_dynamics_jellett(Rng&) {
    const auto& traj = fig3a_trajectory();
    const auto rep = conservation_report(traj);
    Gate g;
    g.require(rep.lambda_drift < 100.0 * traj.meta.rtol,
              strf("lambda drift %.3e >= 100 rtol", rep.lambda_drift));
    g.note(strf("drift %.2e over 12 s", rep.lambda_drift));
    return {"dynamics: Jellett drift below 100*rtol", g.pass, g.detail};
}

inline CheckResult check_dynamics_dissipation(Rng&) {
    Gate g;
    const auto rep = conservation_report(fig3a_trajectory());
    g.require(rep.energy_monotone, strf("gliding energy rose by %.3e J", rep.max_energy_rise));
    // mu = 0: the normal force does no work, so E and lambda are conserved
    // even while the top glides (D and E~ are quasi-integrals and drift).
    const auto traj0 = integrate(spun_upright_state(155.0), example1_params(), FrictionModel{0.0},
                                 2.0, 1e-9, 1e-12, 1e-3);
    const auto cons0 = conservation_report(traj0);
    const auto& first = traj0.samples.front().diag;
    g.require(cons0.lambda_drift <= 1e-7, "mu=0 lambda drifted");
    for (const auto& s : traj0.samples)
        g.require(std::abs(s.diag.E_total - first.E_total) <= 1e-7 * std::abs(first.E_total),
                  "mu=0 E drifted");
    g.require(cons0.energy_monotone, "mu=0 energy rise above tolerance");
    return {"dynamics: energy monotone (mu>0), conserved (mu=0)", g.pass, g.detail};
}

inline CheckResult check_dynamics_contact(Rng&) {
    const auto p = example1_params();
    const auto traj = integrate(spun_upright_state(155.0), p, FrictionModel{0.3}, 0.5, 1e-11,
                                1e-14, 5e-4);
    const auto& ss = traj.samples;
    Gate g;
    double max_rel = 0.0, max_acc = 0.0;
    const double dt = 5e-4;
    for (std::size_t k = 2; k + 2 < ss.size(); ++k) {
        const auto height = [&](std::size_t i) {
            return p.R * (1.0 - p.alpha * std::cos(ss[i].state.theta));
        };
        const double acc = (-height(k + 2) + 16.0 * height(k + 1) - 30.0 * height(k) +
                            16.0 * height(k - 1) - height(k - 2)) /
                           (12.0 * dt * dt);
        const double gn_fd = p.m * p.g + p.m * acc;
        max_rel = std::max(max_rel, std::abs(gn_fd - ss[k].diag.g_n) / ss[k].diag.g_n);
        max_acc = std::max(max_acc, std::abs(acc - (ss[k].diag.g_n / p.m - p.g)) / p.g);
    }
    g.require(max_rel < 1e-4, strf("normal-force residual %.3e >= 1e-4", max_rel));
    g.require(max_acc < 1e-6, strf("contact acceleration residual %.3e g >= 1e-6 g", max_acc));
    g.note(strf("residuals: %.2e relative, %.2e g", max_rel, max_acc));
    return {"dynamics: g_n consistent with the contact constraint", g.pass, g.detail};
}

inline CheckResult check_dynamics_rolling_integral(Rng&) {
    const auto p = example1_params();
    const double lambda = 2.0 * lambda_threshold(p);
    const auto bv = boundary_values(lambda, p);
    const double D = 0.5 * (bv.D0 + bv.D1);
    const MinimumResult zm = find_minimum(D, lambda, p);
    const double vmin = v_rational(zm.z, D, lambda, p);
    const double E = vmin + 0.01 * p.m * p.g * p.R;
    const double T = period_exact(E, D, lambda, p);
    const double theta0 = std::acos(zm.z);
    const double thd0 = std::sqrt((E - vmin) / g_coefficient(zm.z, p));
    const auto roll = integrate_rolling(theta0, thd0, D, lambda, p, 100.0 * T, 1e-12, 1e-14,
                                        T / 50.0);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& s : roll) {
        const double e = g_coefficient(std::cos(s.theta), p) * s.theta_dot * s.theta_dot +
                         v_rational(std::cos(s.theta), D, lambda, p);
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    Gate g;
    const double drift = (hi - lo) / std::abs(E);
    g.require(drift < 1e-9, strf("rolling first integral drifted %.3e", drift));
    g.note(strf("drift %.2e over 100 periods", drift));
    return {"dynamics: rolling first integral conserved over 100 periods", g.pass, g.detail};
}

inline CheckResult check_dynamics_sample_invariance(Rng&) {
    const auto p = example1_params();
    const auto coarse = integrate(spun_upright_state(155.0), p, FrictionModel{0.3}, 0.2, 1e-9,
                                  1e-12, 1e-3);
    const auto fine = integrate(spun_upright_state(155.0), p, FrictionModel{0.3}, 0.2, 1e-9,
                                1e-12, 5e-4);
    Gate g;
    g.require(fine.samples.size() + 2 >= 2 * coarse.samples.size(), "sample counts inconsistent");
    for (std::size_t k = 0; g.pass && k < coarse.samples.size() && 2 * k < fine.samples.size();
         ++k) {
        const auto& a = coarse.samples[k].state;
        const auto& b = fine.samples[2 * k].state;
        g.require(a.theta == b.theta && a.theta_dot == b.theta_dot && a.phi_dot == b.phi_dot &&
                      a.omega3 == b.omega3 && a.nu_x == b.nu_x && a.nu_y == b.nu_y,
                  strf("states differ at t=%.4f", coarse.samples[k].t));
    }
    return {"dynamics: halving sample_dt leaves common samples bit-identical", g.pass, g.detail};
}

inline CheckResult check_potential_ab(Rng& rng) {
    const auto p = example1_params();
    const double lt = lambda_threshold(p);
    Gate g;
    for (int i = 0; i < 200; ++i) {
        const double lambda = rng.uniform(0.1, 10.0) * lt;
        const auto bv = boundary_values(lambda, p);
        const double D = bv.D1 + rng.uniform(-0.5, 1.5) * (bv.D0 - bv.D1);
        const auto pp = ab_beta(D, lambda, p);
        const double rhs = lambda * p.gamma * p.alpha;
        g.require(std::abs(pp.b + p.alpha * pp.a - rhs) <= 1e-12 * std::abs(rhs),
                  "b + alpha a != lambda gamma alpha");
        g.require(pp.beta > 0.0, "beta not positive");
        const auto pp0 = ab_beta(bv.D0, lambda, p);
        const auto pp1 = ab_beta(bv.D1, lambda, p);
        const double s = std::max(std::abs(pp0.a), std::abs(pp0.b));
        g.require(std::abs(pp0.a + pp0.b) <= 1e-12 * s, "a+b != 0 at D0");
        g.require(std::abs(pp1.a - pp1.b) <= 1e-12 * s, "a-b != 0 at D1");
    }
    return {"potential: (a, b, beta) identities", g.pass, g.detail};
}

inline CheckResult check_potential_rational_vs_algebraic(Rng& rng) {
    const auto p = example1_params();
    const double lt = lambda_threshold(p);
    Gate g;
    for (int i = 0; i < 20; ++i) {
        const double lambda = rng.uniform(1.1, 5.0) * lt;
        const auto bv = boundary_values(lambda, p);
        const double D = bv.D1 + rng.uniform(0.0, 1.0) * (bv.D0 - bv.D1);
        for (int k = 0; k < 500; ++k) {
            const double z = -0.999 + 1.998 * k / 499.0;
            const double vr = v_rational(z, D, lambda, p);
            const double va = v_algebraic(z, D, lambda, p);
            g.require(std::abs(vr - va) <= 1e-11 * (std::abs(vr) + std::abs(va)),
                      strf("V mismatch %.2e at z=%.3f", std::abs(vr - va), z));
        }
    }
    // g(z): rational closed form against the general affine form
    for (int k = 0; k <= 100; ++k) {
        const double z = -1.0 + 2.0 * k / 100.0;
        const double general =
            0.5 * p.I3 * (p.sigma * (1.0 + p.alpha * p.alpha - 2.0 * p.alpha * z) + p.gamma);
        g.require(std::abs(g_coefficient(z, p) - general) <= 1e-12 * general,
                  "g(z) rational vs general mismatch");
    }
    return {"potential: rational V equals algebraic V on the rational manifold", g.pass, g.detail};
}

inline CheckResult check_potential_minimum_unique(Rng& rng) {
    const auto p = example1_params();
    const double lt = lambda_threshold(p);
    Gate g;
    for (int i = 0; i < 100; ++i) {
        const double lambda = rng.uniform(1.1, 10.0) * lt;
        const auto bv = boundary_values(lambda, p);
        const double D = bv.D1 + rng.uniform(0.02, 0.98) * (bv.D0 - bv.D1);
        g.require(count_roots(p_polynomial(D, lambda, p), -1.0, 1.0) == 1,
                  "p(z) does not have exactly one root in (-1,1]");
    }
    return {"potential: derivative numerator has a unique root in (-1,1)", g.pass, g.detail};
}

inline CheckResult check_nutation_factorization(Rng& rng) {
    const auto p = example1_params();
    const double lt = lambda_threshold(p);
    const double mgra = p.m * p.g * p.R * p.alpha;
    Gate g;
    for (int i = 0; i < 100; ++i) {
        const double lambda = rng.uniform(1.1, 10.0) * lt;
        const auto bv = boundary_values(lambda, p);
        const double D = bv.D1 + rng.uniform(0.05, 0.95) * (bv.D0 - bv.D1);
        const auto pp = ab_beta(D, lambda, p);
        const MinimumResult zm = find_minimum(D, lambda, p);
        const double vmin = v_rational(zm.z, D, lambda, p);
        const double E = vmin + std::pow(10.0, rng.uniform(-3.0, -0.3)) * p.m * p.g * p.R;
        const auto [z1, z2t] = turning_points(E, D, lambda, p);
        (void)z2t;
        const auto [z2, z3] = companion_roots(z1, pp);
        for (int k = 0; k < 1000; ++k) {
            const double z = -0.99 + 1.98 * k / 999.0;
            const double lhs = (1.0 - z * z) * (E - v_rational(z, D, lambda, p));
            const double rhs = mgra * (z1 - z) * (z2 - z) * (z3 - z);
            const double scale = std::abs(lhs) + std::abs(rhs) + std::abs(E);
            g.require(std::abs(lhs - rhs) <= 1e-9 * scale,
                      strf("factorization off by %.2e at z=%.3f", std::abs(lhs - rhs), z));
        }
    }
    return {"nutation: cubic factorization of (1-z^2)(E~-V)", g.pass, g.detail};
}

inline CheckResult check_nutation_elliptic(Rng&) {
    Gate g;
    const double pi = std::acos(-1.0);
    g.require(std::abs(elliptic_k(0.0) - 0.5 * pi) <= 1e-15 * pi, "K(0) != pi/2");
    double prev = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double k2 = 0.99 * i / 1000.0;
        const double K = elliptic_k(k2);
        g.require(i == 0 || K > prev, strf("K not increasing at k2=%.3f", k2));
        prev = K;
    }
    // series oracle at k2 = 0.1
    double series = 0.0, coef = 1.0;
    for (int n = 0; n <= 20; ++n) {
        if (n > 0) coef *= (2.0 * n - 1.0) / (2.0 * n);
        series += coef * coef * std::pow(0.1, n);
    }
    series *= 0.5 * pi;
    g.require(std::abs(elliptic_k(0.1) - series) <= 1e-12 * series, "K(0.1) series mismatch");
    g.require(elliptic_k(0.342) < 1.74, "K(0.342) >= 1.74");
    return {"nutation: K(k^2) by AGM against the series", g.pass, g.detail};
}

inline CheckResult check_nutation_h_identity(Rng& rng) {
    const auto p = example1_params();
    const double lt = lambda_threshold(p);
    Gate g;
    const double h1_bound = 2.0 / (3.0 * std::sqrt(3.0));
    const auto h1a = h_functions(-1.0 / std::sqrt(3.0), 0.0, 0.1);
    const auto h1b = h_functions(1.0 / std::sqrt(3.0), 0.0, 0.1);
    g.require(std::abs(h1a.h1 - h1_bound) <= 1e-14, "h1(-1/sqrt3, 0) != 2/(3 sqrt 3)");
    g.require(std::abs(h1b.h1 + h1_bound) <= 1e-14, "h1(1/sqrt3, 0) != -2/(3 sqrt 3)");
    g.require(h_functions(1.0, 0.5, 0.2).h2 == 0.0 && h_functions(-1.0, 0.5, 0.2).h2 == 0.0,
              "h2(+/-1, w) != 0");
    for (int i = 0; i < 2000; ++i) {
        const double z1 = rng.uniform(-1.0, 1.0);
        const double w = rng.uniform(-0.9999, 0.9999);
        const double eps = rng.uniform(0.0, 0.9);
        const auto h = h_functions(z1, w, eps);
        g.require(std::abs(h.h1) <= h1_bound + 1e-12, strf("|h1| = %.6f too large", h.h1));
        g.require(std::abs(h.h2) <= 1.0 + 1e-12, strf("|h2| = %.6f > 1", h.h2));
        g.require(h.h3 > 0.0, "h3 not positive");
    }
    // 1/sqrt(z2-z3) = sqrt(eps/2) sqrt((1-z1^2)/(1+w^2+2w z1)) h3
    for (int i = 0; i < 500; ++i) {
        const double lambda = rng.uniform(1.1, 10.0) * lt;
        const auto bv = boundary_values(lambda, p);
        const double D = bv.D1 + rng.uniform(0.02, 0.98) * (bv.D0 - bv.D1);
        const auto pp = ab_beta(D, lambda, p);
        const auto [eps, w] = epsilon_w(D, lambda, p);
        const double z1 = rng.uniform(-0.99, 0.99);
        const auto [z2, z3] = companion_roots(z1, pp);
        const double lhs = 1.0 / std::sqrt(z2 - z3);
        const double den = 1.0 + w * w + 2.0 * w * z1;
        const double rhs = std::sqrt(0.5 * eps) * std::sqrt((1.0 - z1 * z1) / den) *
                           h_functions(z1, w, eps).h3;
        g.require(std::abs(lhs - rhs) <= 1e-10 * lhs, strf("z2-z3 vs h3 identity off %.2e",
                                                           std::abs(lhs - rhs) / lhs));
    }
    return {"nutation: h-function bounds and the 1/sqrt(z2-z3) identity", g.pass, g.detail};
}

inline CheckResult check_nutation_small_epsilon(Rng&) {
    const auto p = example1_params();
    const double lt = lambda_threshold(p);
    const double w = 0.3, z1 = -0.45;
    Gate g;
    for (int k = 0; k < 4; ++k) {
        const double lambda = lt * 10.0 * std::pow(2.0, k);
        const double D = d_of_w(w, lambda, p);
        const double E = v_rational(z1, D, lambda, p);
        const auto [zl, z2] = turning_points(E, D, lambda, p);
        const auto [eps, ww] = epsilon_w(D, lambda, p);
        const double zmid = 0.5 * (zl + z2);
        const double den = 1.0 + ww * ww + 2.0 * ww * zl;
        const double pi = std::acos(-1.0);
        const double gm = g_coefficient(zmid, p);
        const double lead = 2.0 * pi * std::sqrt(gm) * std::sqrt((1.0 - zl * zl) / den) *
                            std::sqrt(eps) / std::sqrt(2.0 * p.m * p.g * p.R * p.alpha);
        const double ratio = period_exact(E, D, lambda, p) / lead;
        // The band does not shrink with eps at fixed z1, so averaging sqrt(g)
        // over it leaves a constant second-order offset below g(z_mid):
        //   ratio -> 1 - (g' (z2-z1) / (4 g))^2 / 4 + O(eps).
        const double half = 0.5 * (z2 - zl);
        const double bias = std::pow(g_coefficient_dz(p) * half / gm, 2) / 16.0;
        g.require(std::abs(ratio - 1.0) <= 3.0 * eps + 2.0 * bias,
                  strf("period law off: |ratio-1| = %.3e at eps = %.3e", std::abs(ratio - 1.0),
                       eps));
        g.require(std::abs(ratio - 1.0 + bias) <= 3.0 * eps + 1e-5,
                  strf("bias-corrected law off: %.3e at eps = %.3e",
                       std::abs(ratio - 1.0 + bias), eps));
        if (k == 3)
            g.note(strf("|ratio-1| = %.2e, predicted g-averaging bias %.2e, eps = %.2e",
                        std::abs(ratio - 1.0), bias, eps));
    }
    return {"nutation: sqrt(eps) period law as eps -> 0", g.pass, g.detail};
}

inline CheckResult check_nutation_two_routes(Rng& rng) {
    const auto p = example1_params();
    const double lt = lambda_threshold(p);
    const double mgra = p.m * p.g * p.R * p.alpha;
    Gate g;
    double worst = 0.0;
    for (int i = 0; i < 30; ++i) {
        const double lambda = rng.uniform(1.2, 6.0) * lt;
        const auto bv = boundary_values(lambda, p);
        const double D = bv.D1 + rng.uniform(0.05, 0.95) * (bv.D0 - bv.D1);
        const auto pp = ab_beta(D, lambda, p);
        const MinimumResult zm = find_minimum(D, lambda, p);
        const double vmin = v_rational(zm.z, D, lambda, p);
        const double E = vmin + std::pow(10.0, rng.uniform(-3.0, -0.5)) * p.m * p.g * p.R;
        const double direct = period_exact(E, D, lambda, p);
        const auto [z1, z2t] = turning_points(E, D, lambda, p);
        (void)z2t;
        const auto [z2, z3] = companion_roots(z1, pp);
        // factorized route: the sine substitution cancels (z-z1)(z2-z) exactly
        const double zmid = 0.5 * (z1 + z2), half = 0.5 * (z2 - z1);
        const double pi = std::acos(-1.0);
        const double fact = detail::adaptive_gauss(
            [&](double u) {
                const double z = zmid + half * std::sin(u);
                return 2.0 * std::sqrt(g_coefficient(z, p) / (mgra * (z - z3)));
            },
            -0.5 * pi, 0.5 * pi);
        worst = std::max(worst, std::abs(direct / fact - 1.0));
        g.require(std::abs(direct / fact - 1.0) <= 2e-6,
                  strf("two-route period mismatch %.2e", std::abs(direct / fact - 1.0)));
    }
    g.note(strf("worst agreement %.2e", worst));
    return {"nutation: direct and factorized period quadratures agree", g.pass, g.detail};
}

// ---------------------------------------------------------------------------
// acceptance criteria

inline bool within(double value, double target, double rel) {
    return std::abs(value - target) <= rel * std::abs(target);
}

inline CheckResult acceptance_example1(Rng&) {
    const auto p = example1_params();
    Gate g;
    g.require(within(p.gamma, 131.0 / 140.0, 1e-12), "gamma != 131/140");
    const double lt = lambda_threshold(p);
    g.require(within(lt, 3.44e-6, 0.005), strf("lambda_thres = %.4e vs 3.44e-6", lt));
    const double lambda = 2.0 * lt;
    g.require(within(lambda, 6.88e-6, 0.005), strf("lambda = %.4e vs 6.88e-6", lambda));
    const auto bv = boundary_values(lambda, p);
    g.require(within(bv.D1, -6.0e-4, 0.02), strf("D1 = %.4e vs -6.0e-4", bv.D1));
    const double dm = delta_minus(0.1, lambda, p);
    g.require(within(dm, 1.48e-7, 0.01), strf("delta_minus = %.4e vs 1.48e-7", dm));
    const double radius = dm / (p.R * (1.0 + p.alpha) * p.rational_root());
    g.require(within(radius, 3.5e-5, 0.02), strf("guard radius = %.4e vs 3.5e-5", radius));
    const double dm_tight = delta_minus(0.01, lambda, p);
    g.require(dm_tight < 0.2 * dm && dm_tight > 0.05 * dm,
              "delta_minus(0.01) not one order below delta_minus(0.1)");
    g.note(strf("lambda_thres %.4e, D1 %.4e, delta- %.4e", lt, bv.D1, dm));
    return {"criterion 1: Example 1 reproduction", g.pass, g.detail};
}

inline CheckResult acceptance_example2(Rng&) {
    const auto p = example1_params();
    const double lambda = 2.0 * lambda_threshold(p);
    const auto bv = boundary_values(lambda, p);
    Gate g;
    const double b_low = ab_beta(bv.D1, lambda, p).b;
    const double b_high = ab_beta(bv.D0, lambda, p).b;
    g.require(within(b_low, 1.4851e-6, 0.001), strf("b_low = %.5e vs 1.4851e-6", b_low));
    g.require(within(b_high, 2.7581e-6, 0.001), strf("b_high = %.5e vs 2.7581e-6", b_high));
    const double coeff = p.R * p.I3 * p.gamma * (p.alpha + 1.0 - p.gamma);
    g.require(within(coeff, 2.1816e-8, 0.001), strf("T_max coefficient = %.5e", coeff));
    const double t_fast = t_max(bv.D0, lambda, p);
    const double t_slow = t_max(bv.D1, lambda, p);
    g.require(within(t_fast, 0.0497, 0.01), strf("T_max(D0) = %.5f vs 0.0497", t_fast));
    g.require(within(t_slow, 0.0923, 0.01), strf("T_max(D1) = %.5f vs 0.0923", t_slow));
    for (int i = 1; i < 50; ++i) {
        const double D = bv.D1 + (bv.D0 - bv.D1) * i / 50.0;
        const double t = t_max(D, lambda, p);
        g.require(t > 0.0497 * 0.99 && t < 0.0923 * 1.01, "interior T_max outside Example 2 range");
    }
    g.note(strf("b in [%.5e, %.5e], T_max in [%.4f, %.4f]", b_low, b_high, t_fast, t_slow));
    return {"criterion 2: Example 2 reproduction", g.pass, g.detail};
}

inline CheckResult acceptance_fig3a(Rng&) {
    const auto& traj = fig3a_trajectory();
    const auto inv = detect_inversion(traj);
    const auto cons = conservation_report(traj);
    Gate g;
    g.require(traj.meta.reason == StopReason::Completed, "integration terminated abnormally");
    g.require(inv.completed, strf("final theta %.3f <= pi - 0.2", inv.final_theta));
    g.require(inv.inversion_time > 2.0 && inv.inversion_time < 8.0,
              strf("inversion duration %.2f s outside [2, 8]", inv.inversion_time));
    g.require(inv.sign_changes >= 10, strf("only %d theta_dot sign changes", inv.sign_changes));
    g.require(cons.lambda_drift < 1e-6, strf("lambda drift %.2e >= 1e-6", cons.lambda_drift));
    g.note(strf("onset %.2f s, duration %.2f s, %d sign changes, drift %.1e", inv.onset_time,
                inv.inversion_time, inv.sign_changes, cons.lambda_drift));
    return {"criterion 3: Fig 3a-b inversion", g.pass, g.detail};
}

inline CheckResult acceptance_cohen(Rng&) {
    const auto traj = integrate(spun_upright_state(100.0), cohen_params(), FrictionModel{0.3},
                                12.0, 1e-9, 1e-12, 1e-3);
    const auto inv = detect_inversion(traj);
    const auto cons = conservation_report(traj);
    Gate g;
    g.require(traj.meta.reason == StopReason::Completed, "integration terminated abnormally");
    g.require(inv.completed, strf("final theta %.3f <= pi - 0.2", inv.final_theta));
    g.require(cons.lambda_drift < 1e-6, strf("lambda drift %.2e >= 1e-6", cons.lambda_drift));
    g.require(cons.energy_monotone, strf("energy rose by %.3e J", cons.max_energy_rise));
    g.note(strf("onset %.2f s, duration %.2f s, drift %.1e", inv.onset_time, inv.inversion_time,
                cons.lambda_drift));
    return {"criterion 4: Cohen-parameter inversion", g.pass, g.detail};
}

inline CheckResult acceptance_convexity(Rng& rng) {
    const auto p = example1_params();
    const double lt = lambda_threshold(p);
    Gate g;
    // 1e4 random (D, lambda): witness true and grid second differences nonnegative
    for (int i = 0; i < 10000 && g.failures < 3; ++i) {
        const double lambda = rng.uniform(1e-3, 10.0) * lt;
        const auto bv = boundary_values(lambda, p);
        const double D = bv.D1 + rng.uniform(-0.5, 1.5) * (bv.D0 - bv.D1);
        g.require(convexity_witness(D, lambda, p), strf("witness false at i=%d", i));
        const double h = 1.998 / 999.0;
        double vm = v_rational(-0.999, D, lambda, p);
        double v0 = v_rational(-0.999 + h, D, lambda, p);
        for (int k = 1; k + 1 < 1000; ++k) {
            const double vp = v_rational(-0.999 + (k + 1) * h, D, lambda, p);
            const double d2 = vm - 2.0 * v0 + vp;
            const double scale = std::abs(vm) + 2.0 * std::abs(v0) + std::abs(vp);
            if (d2 < -1e-9 * scale) {
                g.require(false, strf("second difference %.2e at i=%d", d2, i));
                break;
            }
            vm = v0;
            v0 = vp;
        }
    }
    // Sturm counts against constructed roots and the eigenvalue oracle.
    // Roots are kept at least 0.2 apart in the complex plane: clusters
    // tighter than that push deep Sturm remainders toward the 1e-13 zero
    // threshold, where the square-free classification is legitimately fuzzy.
    for (int i = 0; i < 1000 && g.failures < 3; ++i) {
        const int degree = rng.uniform_int(1, 6);
        const int pairs = rng.uniform_int(0, degree / 2);
        const int nreal = degree - 2 * pairs;
        std::vector<double> roots;
        std::vector<std::pair<double, double>> points;  // (re, im >= 0)
        const auto clear_of_others = [&](double re, double im) {
            for (const auto& [r2, i2] : points)
                if (std::hypot(re - r2, im - i2) < 0.2) return false;
            return true;
        };
        while (static_cast<int>(roots.size()) < nreal) {
            const double root = rng.uniform(-2.0, 2.0);
            if (!clear_of_others(root, 0.0)) continue;
            roots.push_back(root);
            points.emplace_back(root, 0.0);
        }
        RealPolynomial q{{rng.uniform(0.5, 2.0) * (rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0)}};
        for (double root : roots) {
            RealPolynomial next{std::vector<double>(q.c.size() + 1, 0.0)};
            for (std::size_t k = 0; k < q.c.size(); ++k) {
                next.c[k] += -root * q.c[k];
                next.c[k + 1] += q.c[k];
            }
            q = next;
        }
        for (int pr = 0; pr < pairs;) {
            const double re = rng.uniform(-2.0, 2.0), im = rng.uniform(0.25, 2.0);
            if (!clear_of_others(re, im)) continue;
            points.emplace_back(re, im);
            ++pr;
            // multiply by (z - re)^2 + im^2
            const std::vector<double> factor{re * re + im * im, -2.0 * re, 1.0};
            RealPolynomial next{std::vector<double>(q.c.size() + 2, 0.0)};
            for (std::size_t k = 0; k < q.c.size(); ++k)
                for (std::size_t j = 0; j < 3; ++j) next.c[k + j] += q.c[k] * factor[j];
            q = next;
        }
        double c, d;
        for (;;) {
            c = rng.uniform(-2.5, 2.0);
            d = c + rng.uniform(0.1, 2.0);
            bool clear = true;
            for (double root : roots)
                if (std::abs(root - c) < 1e-3 || std::abs(root - d) < 1e-3) clear = false;
            if (clear) break;
        }
        int expected = 0;
        for (double root : roots)
            if (root > c && root <= d) ++expected;
        const int sturm = count_roots(q, c, d);
        const int eig = eigenvalue_root_count(q, c, d);
        g.require(sturm == expected && eig == expected,
                  strf("root counts differ at i=%d: sturm %d, eigen %d, constructed %d", i, sturm,
                       eig, expected));
    }
    return {"criterion 5: convexity certification and Sturm oracle", g.pass, g.detail};
}

inline CheckResult acceptance_prop2(Rng& rng) {
    const auto p = example1_params();
    const double lt = lambda_threshold(p);
    const double root = p.rational_root();
    Gate g;
    for (int i = 0; i < 100 && g.failures < 3; ++i) {
        const double eps = rng.uniform(0.01, 0.5);
        const double lambda = rng.uniform(1.1, 10.0) * lt;
        const auto bv = boundary_values(lambda, p);
        const double dm = delta_minus(eps, lambda, p);
        const double dp = delta_plus(eps, lambda, p);
        for (double sign : {-1.0, 1.0}) {
            const double D1s = bv.D1 + sign * 0.99 * dm / (p.R * (1.0 + p.alpha) * root);
            const double zmin1 = find_minimum(D1s, lambda, p).z;
            g.require(zmin1 >= -1.0 && zmin1 <= -1.0 + eps,
                      strf("z_min %.6f outside [-1, -1+%.3f] (i=%d)", zmin1, eps, i));
            const double D0s = bv.D0 + sign * 0.99 * dp / (p.R * (1.0 - p.alpha) * root);
            const double zmin0 = find_minimum(D0s, lambda, p).z;
            g.require(zmin0 >= 1.0 - eps && zmin0 <= 1.0,
                      strf("z_min %.6f outside [%.3f, 1] (i=%d)", zmin0, 1.0 - eps, i));
        }
    }
    return {"criterion 6: delta-guarded minimum containment", g.pass, g.detail};
}

inline CheckResult acceptance_period_oracle(Rng& rng) {
    const auto p = example1_params();
    const double lambda = 2.0 * lambda_threshold(p);
    const auto bv = boundary_values(lambda, p);
    Gate g;
    double worst_ode = 0.0;
    for (int i = 0; i < 100 && g.failures < 3; ++i) {
        const double D = bv.D1 + rng.uniform(0.05, 0.95) * (bv.D0 - bv.D1);
        const MinimumResult zm = find_minimum(D, lambda, p);
        const double vmin = v_rational(zm.z, D, lambda, p);
        const double E = vmin + std::pow(10.0, rng.uniform(-3.0, -0.3)) * p.m * p.g * p.R;
        const double T = period_exact(E, D, lambda, p);
        const auto br = period_elliptic(E, D, lambda, p);
        const double upp = t_upp(D, lambda, p);
        g.require(br.T_low <= T * (1.0 + 1e-9) && T <= br.T_high * (1.0 + 1e-9),
                  strf("bracket violated at i=%d", i));
        g.require(br.T_low <= br.T_mid && br.T_mid <= br.T_high, "bracket not ordered");
        g.require(br.T_high <= upp, strf("T_high %.4f > T_upp %.4f (i=%d)", br.T_high, upp, i));
        const double T_ode = rolling_period(E, D, lambda, p, T);
        g.require(std::isfinite(T_ode), strf("no rolling period found at i=%d", i));
        const double err = std::abs(T_ode / T - 1.0);
        worst_ode = std::max(worst_ode, err);
        g.require(err < 1e-3, strf("ODE oracle disagrees by %.2e at i=%d", err, i));
    }
    g.note(strf("worst ODE-oracle error %.2e", worst_ode));
    return {"criterion 7: period oracle agreement and bound chain", g.pass, g.detail};
}

inline CheckResult acceptance_section51_constants(Rng&) {
    // Sweep over admissible left turning points z1 <= z_min(w, eps); on the
    // unconstrained rectangle even sup h3 -> (1-eps)^(-1/2) = 3.1623 at the
    // corners, so the printed bound 3.15 presumes admissibility.
    Gate g;
    const int n = 2000;
    double h1max = 0.0, h2max = 0.0, h3max = 0.0, k2max = 0.0;
    double k2_at[3] = {0, 0, 0};
    for (int j = 0; j <= n; ++j) {
        const double w = -0.9999 + 2.0 * 0.9999 * j / n;
        for (int e = 1; e <= 9; ++e) {
            const double eps = 0.1 * e;
            const double zm = reduced_zmin(w, eps);
            if (!std::isfinite(zm)) continue;
            for (int i = 0; i <= n; ++i) {
                const double z1 = -1.0 + 2.0 * i / n;
                if (z1 > zm) break;
                const auto h = h_functions(z1, w, eps);
                h1max = std::max(h1max, std::abs(h.h1));
                h2max = std::max(h2max, std::abs(h.h2));
                h3max = std::max(h3max, h.h3);
                const double k2 = reduced_k2(z1, w, eps);
                if (k2 > k2max) {
                    k2max = k2;
                    k2_at[0] = z1;
                    k2_at[1] = w;
                    k2_at[2] = eps;
                }
            }
        }
    }
    const double Kmax = elliptic_k(k2max);  // K is increasing in k^2
    const double h1_ref = 2.0 / (3.0 * std::sqrt(3.0));
    g.require(std::abs(h1max - h1_ref) <= 1e-6, strf("max|h1| = %.9f vs 2/(3 sqrt 3)", h1max));
    g.require(h2max <= 1.0 + 1e-12, strf("max|h2| = %.6f > 1", h2max));
    g.require(h3max < 3.15, strf("max h3 = %.6f >= 3.15", h3max));
    g.require(k2max < 0.342, strf("max k2 = %.6f >= 0.342 at (z1=%.3f, w=%.4f, eps=%.1f)", k2max,
                                  k2_at[0], k2_at[1], k2_at[2]));
    g.require(Kmax < 1.74, strf("max K = %.6f >= 1.74", Kmax));
    g.note(strf("h1 %.9f, h2 %.4f, h3 %.4f, k2 %.4f, K %.4f", h1max, h2max, h3max, k2max, Kmax));
    return {"criterion 8: period-expansion grid constants", g.pass, g.detail};
}

inline CheckResult acceptance_epsilon_bound(Rng&) {
    const auto p = example1_params();
    const double lt = lambda_threshold(p);
    Gate g;
    for (double C : {1.1, 2.0, 5.0}) {
        const double lambda = C * lt;
        const auto bv = boundary_values(lambda, p);
        for (int i = 0; i < 100; ++i) {
            const double D = bv.D1 + (i + 0.5) / 100.0 * (bv.D0 - bv.D1);
            const double eps = epsilon_w(D, lambda, p).first;
            g.require(eps < 1.0 / (C * C),
                      strf("eps = %.4f >= 1/C^2 at C=%.1f, i=%d", eps, C, i));
        }
    }
    return {"criterion 9: epsilon < 1/C^2 on (D1, D0)", g.pass, g.detail};
}

inline CheckResult acceptance_quasi_integrals(Rng&) {
    const auto cons = conservation_report(fig3a_trajectory());
    Gate g;
    g.require(cons.d_derivative_residual < 1e-3,
              strf("dD/dt residual %.2e >= 1e-3", cons.d_derivative_residual));
    g.require(cons.e_tilde_derivative_residual < 1e-3,
              strf("dE~/dt residual %.2e >= 1e-3", cons.e_tilde_derivative_residual));
    g.note(strf("residuals: dD/dt %.2e, dE~/dt %.2e", cons.d_derivative_residual,
                cons.e_tilde_derivative_residual));
    return {"criterion 10: quasi-integral derivative identities", g.pass, g.detail};
}

// ---------------------------------------------------------------------------

struct Check {
    const char* name;
    bool acceptance;
    CheckResult (*fn)(Rng&);
};

inline const std::vector<Check>& all_checks() {
    static const std::vector<Check> checks = {
        {"model-rational-d", false, check_model_rational_d},
        {"model-energy", false, check_model_energy},
        {"model-purity", false, check_model_purity},
        {"model-threshold-monotone", false, check_model_threshold_monotone},
        {"dynamics-jellett", false, check_dynamics_jellett},
        {"dynamics-dissipation", false, check_dynamics_dissipation},
        {"dynamics-contact", false, check_dynamics_contact},
        {"dynamics-rolling-integral", false, check_dynamics_rolling_integral},
        {"dynamics-sample-invariance", false, check_dynamics_sample_invariance},
        {"potential-ab", false, check_potential_ab},
        {"potential-rational-vs-algebraic", false, check_potential_rational_vs_algebraic},
        {"potential-minimum-unique", false, check_potential_minimum_unique},
        {"nutation-factorization", false, check_nutation_factorization},
        {"nutation-elliptic", false, check_nutation_elliptic},
        {"nutation-h-identity", false, check_nutation_h_identity},
        {"nutation-small-epsilon", false, check_nutation_small_epsilon},
        {"nutation-two-routes", false, check_nutation_two_routes},
        {"acceptance-1-example1", true, acceptance_example1},
        {"acceptance-2-example2", true, acceptance_example2},
        {"acceptance-3-fig3a", true, acceptance_fig3a},
        {"acceptance-4-cohen", true, acceptance_cohen},
        {"acceptance-5-convexity", true, acceptance_convexity},
        {"acceptance-6-prop2", true, acceptance_prop2},
        {"acceptance-7-period-oracle", true, acceptance_period_oracle},
        {"acceptance-8-constants", true, acceptance_section51_constants},
        {"acceptance-9-epsilon-bound", true, acceptance_epsilon_bound},
        {"acceptance-10-quasi-integrals", true, acceptance_quasi_integrals},
    };
    return checks;
}

inline std::uint64_t fnv1a(const char* s) {
    std::uint64_t h = 1469598103934665603ull;
    for (; *s; ++s) h = (h ^ static_cast<unsigned char>(*s)) * 1099511628211ull;
    return h;
}

/// Runs the selected checks (all, or acceptance criteria only) with `jobs`
/// worker threads; results come back in registration order.
inline std::vector<CheckResult> run_checks(bool acceptance_only, std::uint64_t seed, int jobs) {
    const auto& checks = all_checks();
    std::vector<const Check*> todo;
    for (const auto& c : checks)
        if (!acceptance_only || c.acceptance) todo.push_back(&c);
    std::vector<CheckResult> results(todo.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= todo.size()) return;
            Rng rng(seed ^ fnv1a(todo[i]->name));
            try {
                results[i] = todo[i]->fn(rng);
            } catch (const std::exception& e) {
                results[i] = {todo[i]->name, false, std::string("exception: ") + e.what()};
            }
        }
    };
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return results;
}

/// Prints one pass/fail line per check; returns 0 when everything passed,
/// 4 otherwise.
inline int print_table(std::ostream& out, const std::vector<CheckResult>& results) {
    std::size_t width = 0;
    for (const auto& r : results) width = std::max(width, r.name.size());
    bool all_pass = true;
    for (const auto& r : results) {
        out << (r.pass ? "PASS  " : "FAIL  ") << r.name;
        for (std::size_t i = r.name.size(); i < width + 2; ++i) out << ' ';
        if (!r.detail.empty()) out << r.detail;
        out << '\n';
        all_pass = all_pass && r.pass;
    }
    out << (all_pass ? "all checks passed\n" : "some checks FAILED\n");
    return all_pass ? 0 : 4;
}

} // namespace tippetop::verify
