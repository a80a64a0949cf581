#pragma once

// Turning points of the one-dimensional energy relation, the cubic
// factorization (1-z^2)(E~ - V) = m g R alpha (z1-z)(z2-z)(z3-z), complete
// elliptic integrals, the exact nutation period and the bounds T_max, T_upp.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <tuple>
#include <utility>

#include "tippetop/elliptic.hpp"
#include "tippetop/errors.hpp"
#include "tippetop/model.hpp"
#include "tippetop/potential.hpp"

namespace tippetop {

/// Small parameters of the period expansion: epsilon = 2 beta / b^2 and w = a/b.
inline std::pair<double, double> epsilon_w(double D, double lambda, const TopParameters& p) {
    const PotentialParams pp = ab_beta(D, lambda, p);
    if (pp.b == 0.0) throw DegenerateB{};
    return {2.0 * pp.beta / (pp.b * pp.b), pp.a / pp.b};
}

namespace detail {

/// V(z) in terms of (a, b, beta); the degenerate branches a = -b and a = b
/// use the cancelled fraction so the removable pole at z = +1 (resp. z = -1)
/// evaluates cleanly.
inline double v_from_ab(double z, const PotentialParams& pp, const TopParameters& p) {
    const double k = p.gamma + p.alpha * p.alpha - 1.0;
    const double scale = 2.0 * p.I3 * p.R * p.R * p.gamma * p.gamma * k;
    const double a = pp.a, b = pp.b;
    const double cst = (p.alpha * p.alpha * a * a - (1.0 - p.gamma) * b * b) /
                       (p.alpha * p.alpha * scale);
    const double s = std::max(std::abs(a), std::abs(b));
    double frac;
    if (s > 0.0 && std::abs(a + b) <= 1e-9 * s)
        frac = a * a * (1.0 - z) / (1.0 + z);
    else if (s > 0.0 && std::abs(a - b) <= 1e-9 * s)
        frac = a * a * (1.0 + z) / (1.0 - z);
    else
        frac = (a * z + b) * (a * z + b) / (1.0 - z * z);
    return p.m * p.g * p.R * (1.0 - p.alpha * z) + frac / scale + cst;
}

/// dV/dz in terms of (a, b, beta), with the same cancelled degenerate branches.
inline double v_from_ab_dz(double z, const PotentialParams& pp, const TopParameters& p) {
    const double k = p.gamma + p.alpha * p.alpha - 1.0;
    const double scale = 2.0 * p.I3 * p.R * p.R * p.gamma * p.gamma * k;
    const double a = pp.a, b = pp.b;
    const double s = std::max(std::abs(a), std::abs(b));
    double dfrac;
    if (s > 0.0 && std::abs(a + b) <= 1e-9 * s)
        dfrac = -2.0 * a * a / ((1.0 + z) * (1.0 + z));
    else if (s > 0.0 && std::abs(a - b) <= 1e-9 * s)
        dfrac = 2.0 * a * a / ((1.0 - z) * (1.0 - z));
    else {
        const double omz2 = 1.0 - z * z;
        dfrac = 2.0 * (a * z + b) * (b * z + a) / (omz2 * omz2);
    }
    return -p.m * p.g * p.R * p.alpha + dfrac / scale;
}

/// Locates V = E on [lo, hi] where V is monotone: bisection to the residual
/// tolerance 1e-11 |E| followed by a few bracketed Newton steps, so the
/// returned point is a root of V - E to machine precision. Sharp roots keep
/// the period-integral radicand positive at all interior quadrature nodes.
inline double bisect_level(double E, double lo, double hi, bool decreasing,
                           const PotentialParams& pp, const TopParameters& p) {
    const double tol = 1e-11 * std::abs(E);
    double mid = 0.5 * (lo + hi);
    while (std::abs(hi - lo) > 1e-15) {
        mid = 0.5 * (lo + hi);
        const double v = v_from_ab(mid, pp, p);
        if (std::abs(v - E) <= tol) break;
        const bool above = v > E;
        if (above == decreasing)
            lo = mid;
        else
            hi = mid;
    }
    for (int i = 0; i < 4; ++i) {
        const double dv = v_from_ab_dz(mid, pp, p);
        if (dv == 0.0) break;
        const double next = mid - (v_from_ab(mid, pp, p) - E) / dv;
        if (!(next > lo && next < hi) || next == mid) break;
        mid = next;
    }
    return mid;
}

} // namespace detail

/// Turning points z1 <= z2 of the band { z : V(z, D, lambda) <= E~ }, located
/// by bisection on each side of the minimum to a V-residual of 1e-11 |E~|.
/// For the degenerate branches the band edge at the cancelled pole is the
/// exact boundary value +/-1.
inline std::pair<double, double> turning_points(double E_tilde, double D, double lambda,
                                                const TopParameters& p) {
    const PotentialParams pp = ab_beta(D, lambda, p);
    const MinimumResult zm = find_minimum(D, lambda, p);
    const double vmin = detail::v_from_ab(zm.z, pp, p);
    const double tol = 1e-11 * std::abs(E_tilde);
    if (E_tilde < vmin - tol) throw BelowMinimum{};
    // formula-level round-off band around V(z_min) counts as the degenerate case
    if (E_tilde <= vmin + 1e-13 * std::abs(E_tilde)) return {zm.z, zm.z};

    const double lo = -1.0 + 1e-12;
    const double hi = 1.0 - 1e-12;
    double z1, z2;
    if (zm.boundary && zm.z > 0.0) {
        z1 = detail::bisect_level(E_tilde, lo, zm.z, true, pp, p);
        z2 = 1.0;
    } else if (zm.boundary) {
        z1 = -1.0;
        z2 = detail::bisect_level(E_tilde, zm.z, hi, false, pp, p);
    } else {
        if (!(detail::v_from_ab(lo, pp, p) > E_tilde && detail::v_from_ab(hi, pp, p) > E_tilde))
            throw OutOfDomain("turning_points: band is not bracketed inside (-1,1)");
        z1 = detail::bisect_level(E_tilde, lo, zm.z, true, pp, p);
        z2 = detail::bisect_level(E_tilde, zm.z, hi, false, pp, p);
    }
    return {z1, z2};
}

/// Roots z2 >= z1 and z3 < -1 of the companion quadratic
///   z^2 + (a^2+b^2+2ab z1)/(beta(1-z1^2)) z - 1 + ((a^2+b^2) z1 + 2ab)/(beta(1-z1^2)) = 0,
/// which parametrizes the remaining roots of (1-z^2)(E~ - V) by the left
/// turning point z1.
inline std::pair<double, double> companion_roots(double z1, const PotentialParams& pp) {
    const double omz2 = 1.0 - z1 * z1;
    if (!(pp.beta * omz2 != 0.0) || !(z1 > -1.0 && z1 < 1.0))
        throw OutOfDomain("companion_roots requires beta (1 - z1^2) != 0");
    const double a = pp.a, b = pp.b;
    const double s2 = a * a + b * b;
    const double P = (s2 + 2.0 * a * b * z1) / (pp.beta * omz2);
    const double Q = -1.0 + (s2 * z1 + 2.0 * a * b) / (pp.beta * omz2);
    const double disc = P * P - 4.0 * Q;
    if (disc < 0.0) throw ComplexRoots{};
    // P > 0 on the admissible set, so -(P + sqrt(disc))/2 is the stable root.
    const double z3 = -0.5 * (P + std::sqrt(disc));
    const double z2 = Q / z3;
    return {z2, z3};
}

/// Elliptic parameter k^2 = (z2 - z1)/(z2 - z3) of the nutation band with
/// left edge z1. Round-off residue of the degenerate band (|k^2| below 1e-12)
/// is clamped to the exact 0.
inline double k_squared(double z1, const PotentialParams& pp) {
    const auto [z2, z3] = companion_roots(z1, pp);
    double k2 = (z2 - z1) / (z2 - z3);
    if (std::abs(k2) < 1e-12) k2 = 0.0;
    return k2;
}

/// The shape functions of the period expansion:
///   h1 = -(1 + z1 w)(w + z1)(1 - z1^2) / (1 + w^2 + 2 w z1)^2
///   h2 = (1 - z1^2)((1 + w^2) z1 + 2 w) / (2 (1 + w^2 + 2 w z1)^2)
///   h3 = (1 + A^2 eps^2 - 4 h2 eps)^(-1/4),  A = (1 - z1^2)/(1 + w^2 + 2 w z1).
struct HFunctions {
    double h1 = 0.0;
    double h2 = 0.0;
    double h3 = 0.0;
};

inline HFunctions h_functions(double z1, double w, double epsilon) {
    const double den = 1.0 + w * w + 2.0 * w * z1;
    if (!(den > 0.0)) throw DegenerateDenominator{};
    const double omz2 = 1.0 - z1 * z1;
    HFunctions h;
    h.h1 = -(1.0 + z1 * w) * (w + z1) * omz2 / (den * den);
    h.h2 = omz2 * ((1.0 + w * w) * z1 + 2.0 * w) / (2.0 * den * den);
    const double A = omz2 / den;
    const double inner = 1.0 + A * A * epsilon * epsilon - 4.0 * h.h2 * epsilon;
    if (!(inner > 0.0)) throw OutOfDomain("h3 inner expression not positive");
    h.h3 = std::pow(inner, -0.25);
    return h;
}

namespace detail {

/// Gauss-Legendre nodes and weights on [-1, 1], order 64 (positive half).
inline const std::array<std::pair<double, double>, 32>& gauss_legendre_64() {
    static const std::array<std::pair<double, double>, 32> table = [] {
        std::array<std::pair<double, double>, 32> t{};
        const int n = 64;
        const double pi = std::acos(-1.0);
        for (int i = 0; i < 32; ++i) {
            double x = std::cos(pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int j = 2; j <= n; ++j) {
                    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            t[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
        }
        return t;
    }();
    return table;
}

template <class F>
double gauss_panel(F&& f, double lo, double hi) {
    const auto& gl = gauss_legendre_64();
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    double sum = 0.0;
    for (const auto& [x, w] : gl) sum += w * (f(c + h * x) + f(c - h * x));
    return h * sum;
}

/// Panel-doubled Gauss-Legendre quadrature until the relative change drops
/// below tol (1e-10 by default).
template <class F>
double adaptive_gauss(F&& f, double lo, double hi, double tol = 1e-10) {
    double prev = gauss_panel(f, lo, hi);
    for (int panels = 2; panels <= 64; panels *= 2) {
        double sum = 0.0;
        const double w = (hi - lo) / panels;
        for (int i = 0; i < panels; ++i) sum += gauss_panel(f, lo + i * w, lo + (i + 1) * w);
        if (std::abs(sum - prev) <= tol * std::abs(sum)) return sum;
        prev = sum;
    }
    throw QuadratureNonConvergence{};
}

} // namespace detail

namespace detail {

/// T = 2 int_{z1}^{z2} sqrt(g(z)) dz / sqrt((1-z^2)(E~ - V(z))), with the
/// inverse-square-root endpoint singularities removed by the substitution
/// z = (z1+z2)/2 + ((z2-z1)/2) sin(u).
inline double period_from_band(double E_tilde, double z1, double z2, const PotentialParams& pp,
                               const TopParameters& p) {
    const double pi = std::acos(-1.0);
    const double zm = 0.5 * (z1 + z2);
    const double half = 0.5 * (z2 - z1);
    const auto integrand = [&](double u) {
        const double z = zm + half * std::sin(u);
        const double rad = (1.0 - z * z) * (E_tilde - v_from_ab(z, pp, p));
        if (!(rad > 0.0))
            throw QuadratureNonConvergence{};
        return 2.0 * std::sqrt(g_coefficient(z, p)) * half * std::cos(u) / std::sqrt(rad);
    };
    // The cancellation E~ - V carries relative noise ~ eps |E~| / depth near
    // the band edges; panel refinement cannot settle below that floor, so the
    // stop tolerance adapts to it for narrow bands.
    const double depth = E_tilde - v_from_ab(zm, pp, p);
    const double eps = std::numeric_limits<double>::epsilon();
    const double tol = std::max(1e-10, 2e4 * eps * std::abs(E_tilde) / std::abs(depth));
    return adaptive_gauss(integrand, -0.5 * pi, 0.5 * pi, tol);
}

} // namespace detail

/// Exact oscillation period at fixed (E~, D, lambda), by quadrature of the
/// period integral between the turning points.
inline double period_exact(double E_tilde, double D, double lambda, const TopParameters& p) {
    const PotentialParams pp = ab_beta(D, lambda, p);
    const auto [z1, z2] = turning_points(E_tilde, D, lambda, p);
    if (!(z2 > z1)) throw BelowMinimum{};
    return detail::period_from_band(E_tilde, z1, z2, pp, p);
}

/// Mean-value-theorem bracket of the period: T(g*) = 4 sqrt(g*) K(k^2) /
/// (sqrt(m g R alpha) sqrt(z2 - z3)) with g* evaluated at z2, the band
/// midpoint and z1. Since g decreases in z, T_low <= T_exact <= T_high.
struct PeriodBracket {
    double T_low = 0.0;
    double T_mid = 0.0;
    double T_high = 0.0;
};

inline PeriodBracket period_elliptic(double E_tilde, double D, double lambda,
                                     const TopParameters& p) {
    const PotentialParams pp = ab_beta(D, lambda, p);
    const auto [z1, z2b] = turning_points(E_tilde, D, lambda, p);
    (void)z2b;
    const auto [z2, z3] = companion_roots(z1, pp);
    const double k2 = k_squared(z1, pp);
    const double K = elliptic_k(k2);
    const double c = 4.0 * K / (std::sqrt(p.m * p.g * p.R * p.alpha) * std::sqrt(z2 - z3));
    PeriodBracket b;
    b.T_low = c * std::sqrt(g_coefficient(z2, p));
    b.T_mid = c * std::sqrt(g_coefficient(0.5 * (z1 + z2), p));
    b.T_high = c * std::sqrt(g_coefficient(z1, p));
    return b;
}

/// Bound on the leading factor of the period expansion:
/// T_max = 2 pi R I3 gamma (alpha + 1 - gamma) / b.
inline double t_max(double D, double lambda, const TopParameters& p) {
    const PotentialParams pp = ab_beta(D, lambda, p);
    if (!(pp.b > 0.0)) throw DegenerateB{};
    const double pi = std::acos(-1.0);
    return 2.0 * pi * p.R * p.I3 * p.gamma * (p.alpha + 1.0 - p.gamma) / pp.b;
}

/// Uniform period bound T_upp = 21.95 R I3 gamma (alpha + 1 - gamma) / b,
/// valid for epsilon < 0.9 and w in [-0.9999, 0.9999].
inline double t_upp(double D, double lambda, const TopParameters& p) {
    const PotentialParams pp = ab_beta(D, lambda, p);
    if (!(pp.b > 0.0)) throw DegenerateB{};
    const auto [eps, w] = epsilon_w(D, lambda, p);
    if (!(eps < 0.9)) throw EpsilonTooLarge{};
    if (!(w >= -0.9999 && w <= 0.9999)) throw WOutOfRange{};
    return 21.95 * p.R * p.I3 * p.gamma * (p.alpha + 1.0 - p.gamma) / pp.b;
}

/// Oscillatory-behaviour condition: the inversion time should exceed the
/// maximal nutation period by an order of magnitude.
struct OscillationCondition {
    double ratio = 0.0;
    bool verdict = false;
};

inline OscillationCondition oscillation_condition(double T_inv, double D, double lambda,
                                                  const TopParameters& p) {
    const double upp = t_upp(D, lambda, p);
    OscillationCondition c;
    c.ratio = T_inv / upp;
    c.verdict = c.ratio > 10.0;
    return c;
}

/// Full per-(D, E~) period analysis row.
struct PeriodReport {
    double z1 = 0.0;
    double z2 = 0.0;
    double z3 = 0.0;
    double k2 = 0.0;
    double K = 0.0;
    double T_exact = 0.0;
    double T_elliptic_low = 0.0;
    double T_elliptic_mid = 0.0;
    double T_elliptic_high = 0.0;
    double T_max = 0.0;
    double T_upp = std::numeric_limits<double>::quiet_NaN();
    double epsilon = 0.0;
    double w = 0.0;
    std::string status = "ok";  ///< "ok", "epsilon_too_large" or "w_out_of_range"
};

inline PeriodReport make_period_report(double E_tilde, double D, double lambda,
                                       const TopParameters& p) {
    const PotentialParams pp = ab_beta(D, lambda, p);
    PeriodReport r;
    std::tie(r.epsilon, r.w) = epsilon_w(D, lambda, p);
    const auto [z1, z2b] = turning_points(E_tilde, D, lambda, p);
    r.z1 = z1;
    if (z2b > z1) {
        const auto [z2, z3] = companion_roots(z1, pp);
        r.z2 = z2;
        r.z3 = z3;
        r.T_exact = detail::period_from_band(E_tilde, z1, z2b, pp, p);
    } else {
        const auto [z2, z3] = companion_roots(z1, pp);
        r.z2 = z2;
        r.z3 = z3;
        r.T_exact = std::numeric_limits<double>::quiet_NaN();
    }
    r.k2 = k_squared(z1, pp);
    r.K = elliptic_k(r.k2);
    const double c = 4.0 * r.K / (std::sqrt(p.m * p.g * p.R * p.alpha) * std::sqrt(r.z2 - r.z3));
    r.T_elliptic_low = c * std::sqrt(g_coefficient(r.z2, p));
    r.T_elliptic_mid = c * std::sqrt(g_coefficient(0.5 * (r.z1 + r.z2), p));
    r.T_elliptic_high = c * std::sqrt(g_coefficient(r.z1, p));
    r.T_max = t_max(D, lambda, p);
    try {
        r.T_upp = t_upp(D, lambda, p);
    } catch (const EpsilonTooLarge&) {
        r.status = "epsilon_too_large";
    } catch (const WOutOfRange&) {
        r.status = "w_out_of_range";
    }
    return r;
}

} // namespace tippetop
