#pragma once

// The effective potential V(z, D, lambda) governing theta-oscillations, in
// its general algebraic form and in the rational form valid when
// sigma = (1-gamma)/(gamma + alpha^2 - 1). The rational case is parametrized
// by (a, b, beta) so that, up to an additive constant and a positive overall
// factor, V reduces to f(z) = -beta z + (a z + b)^2 / (1 - z^2).

#include <cmath>
#include <utility>
#include <vector>

#include "tippetop/errors.hpp"
#include "tippetop/model.hpp"
#include "tippetop/polynomial.hpp"

namespace tippetop {

/// Parameters of the reduced rational potential f(z) = -beta z + (az+b)^2/(1-z^2):
///   a    = -(1-gamma) lambda - R D sqrt(gamma + alpha^2 - 1)
///   b    = alpha lambda + alpha R D sqrt(gamma + alpha^2 - 1)
///   beta = 2 m g R^3 alpha I3 gamma^2 (gamma + alpha^2 - 1)
/// a and b carry lambda's units, beta carries lambda^2 units, and
/// b + alpha a = lambda gamma alpha holds identically.
struct PotentialParams {
    double a = 0.0;
    double b = 0.0;
    double beta = 0.0;
    double lambda = 0.0;
    double D = 0.0;
};

inline void require_rational(const TopParameters& p, const char* who) {
    if (!p.rational_regime())
        throw RegimeViolation(std::string(who) + ": parameters are not in the rational regime");
}

inline PotentialParams ab_beta(double D, double lambda, const TopParameters& p) {
    require_rational(p, "ab_beta");
    if (!(lambda > 0.0)) throw OutOfDomain("ab_beta requires lambda > 0");
    const double root = p.rational_root();
    PotentialParams pp;
    pp.a = -(1.0 - p.gamma) * lambda - p.R * D * root;
    pp.b = p.alpha * lambda + p.alpha * p.R * D * root;
    pp.beta = 2.0 * p.m * p.g * p.R * p.R * p.R * p.alpha * p.I3 * p.gamma * p.gamma *
              (p.gamma + p.alpha * p.alpha - 1.0);
    pp.lambda = lambda;
    pp.D = D;
    return pp;
}

/// Rational effective potential, valid only in the rational regime:
///   V = m g R (1 - alpha z)
///     + (lambda (alpha - (1-gamma) z) + R D sqrt(gamma+alpha^2-1) (alpha - z))^2
///       / (2 I3 R^2 gamma^2 (gamma+alpha^2-1) (1 - z^2))
///     + (R^2 D^2 (gamma+alpha^2-1) - (1-gamma) lambda^2) / (2 R^2 I1 (gamma+alpha^2-1)).
inline double v_rational(double z, double D, double lambda, const TopParameters& p) {
    require_rational(p, "v_rational");
    if (!(z > -1.0 && z < 1.0)) throw PoleAtBoundary{};
    const double k = p.gamma + p.alpha * p.alpha - 1.0;
    const double root = std::sqrt(k);
    const double num = lambda * (p.alpha - (1.0 - p.gamma) * z) + p.R * D * root * (p.alpha - z);
    const double R2 = p.R * p.R;
    double v = p.m * p.g * p.R * (1.0 - p.alpha * z);
    v += num * num / (2.0 * p.I3 * R2 * p.gamma * p.gamma * k * (1.0 - z * z));
    v += (R2 * D * D * k - (1.0 - p.gamma) * lambda * lambda) / (2.0 * R2 * p.I1 * k);
    return v;
}

/// z-derivative of the rational potential; the numerator is the quartic
/// p(z) = 2(az+b)(bz+a) - beta (1-z^2)^2 divided by (1-z^2)^2 and the overall
/// factor 2 I3 R^2 gamma^2 (gamma+alpha^2-1).
inline double v_rational_dz(double z, double D, double lambda, const TopParameters& p) {
    require_rational(p, "v_rational_dz");
    if (!(z > -1.0 && z < 1.0)) throw PoleAtBoundary{};
    const double k = p.gamma + p.alpha * p.alpha - 1.0;
    const double root = std::sqrt(k);
    const double a = -(1.0 - p.gamma) * lambda - p.R * D * root;
    const double b = p.alpha * lambda + p.alpha * p.R * D * root;
    const double omz2 = 1.0 - z * z;
    const double scale = 2.0 * p.I3 * p.R * p.R * p.gamma * p.gamma * k;
    return -p.m * p.g * p.R * p.alpha + 2.0 * (a * z + b) * (b * z + a) / (omz2 * omz2) / scale;
}

/// General (algebraic) effective potential, Chaplygin's separation form:
///   V = m g R (1 - alpha z) + (lambda sqrt(d(z)) + R D (alpha - z))^2
///       / (2 I3 R^2 gamma^2 (1 - z^2)) + (R^2 D^2 - sigma lambda^2) / (2 R^2 I1).
inline double v_algebraic(double z, double D, double lambda, const TopParameters& p) {
    if (!(z > -1.0 && z < 1.0)) throw PoleAtBoundary{};
    const double num = lambda * std::sqrt(d_general(z, p)) + p.R * D * (p.alpha - z);
    const double R2 = p.R * p.R;
    double v = p.m * p.g * p.R * (1.0 - p.alpha * z);
    v += num * num / (2.0 * p.I3 * R2 * p.gamma * p.gamma * (1.0 - z * z));
    v += (R2 * D * D - p.sigma * lambda * lambda) / (2.0 * R2 * p.I1);
    return v;
}

/// Kinetic coefficient g(z) of the separation equation E~ = g(cos theta) theta_dot^2 + V.
/// Affine and strictly decreasing in z; in the rational regime the perfect-square
/// form of d(z) gives g(z) = I3 (alpha^2 + (1-gamma)^2 - 2 alpha (1-gamma) z) / (2 (gamma+alpha^2-1)).
inline double g_coefficient(double z, const TopParameters& p) {
    if (!(z >= -1.0 && z <= 1.0)) throw OutOfDomain("g_coefficient requires z in [-1,1]");
    if (p.rational_regime()) {
        const double k = p.gamma + p.alpha * p.alpha - 1.0;
        const double omg = 1.0 - p.gamma;
        return 0.5 * p.I3 * (p.alpha * p.alpha + omg * omg - 2.0 * p.alpha * omg * z) / k;
    }
    return 0.5 * p.I3 * (p.sigma * (1.0 + p.alpha * p.alpha - 2.0 * p.alpha * z) + p.gamma);
}

/// dg/dz; constant because g is affine in z.
inline double g_coefficient_dz(const TopParameters& p) {
    if (p.rational_regime())
        return -p.I3 * p.alpha * (1.0 - p.gamma) / (p.gamma + p.alpha * p.alpha - 1.0);
    return -p.I3 * p.sigma * p.alpha;
}

/// Numerator of f'(z): p(z) = 2(az+b)(bz+a) - beta (1-z^2)^2, with
/// p(-1) = -2(a-b)^2 and p(1) = 2(a+b)^2.
inline RealPolynomial p_polynomial(double D, double lambda, const TopParameters& p) {
    const PotentialParams pp = ab_beta(D, lambda, p);
    const double a = pp.a, b = pp.b, beta = pp.beta;
    return RealPolynomial{{2.0 * a * b - beta, 2.0 * (a * a + b * b), 2.0 * a * b + 2.0 * beta,
                           0.0, -beta}};
}

/// Convexity polynomial of (az+b)^2/(1-z^2):
/// q(z) = 2ab z^3 + 3(a^2+b^2) z^2 + 6ab z + a^2 + b^2.
inline RealPolynomial convexity_polynomial(double a, double b) {
    return RealPolynomial{{a * a + b * b, 6.0 * a * b, 3.0 * (a * a + b * b), 2.0 * a * b}};
}

namespace detail {

/// Sampled second-difference convexity check of u(z) = (az+b)^2/(1-z^2) on
/// (-0.999, 0.999); used for the degenerate branches a = +/-b and ab = 0.
inline bool convex_by_sampling(double a, double b) {
    const int n = 2001;
    const double lo = -0.999, hi = 0.999;
    const double h = (hi - lo) / (n - 1);
    const auto u = [&](double z) { return (a * z + b) * (a * z + b) / (1.0 - z * z); };
    for (int i = 1; i + 1 < n; ++i) {
        const double z = lo + i * h;
        const double um = u(z - h), u0 = u(z), up = u(z + h);
        const double d2 = um - 2.0 * u0 + up;
        if (d2 < -1e-9 * (std::abs(um) + 2.0 * std::abs(u0) + std::abs(up) + 1.0)) return false;
    }
    return true;
}

} // namespace detail

/// Certifies that (az+b)^2/(1-z^2) is convex on (-1,1): for generic a, b the
/// Sturm count of q(z) on (-1,1] must be zero with q(0) > 0; the degenerate
/// branches a = +/-b and ab = 0 are validated by second-difference sampling.
inline bool convexity_witness(double D, double lambda, const TopParameters& p) {
    const PotentialParams pp = ab_beta(D, lambda, p);
    const double a = pp.a, b = pp.b;
    const double s = std::max(std::abs(a), std::abs(b));
    const bool degenerate = s == 0.0 || std::abs(a - b) <= 1e-9 * s ||
                            std::abs(a + b) <= 1e-9 * s || std::abs(a * b) <= 1e-12 * s * s;
    if (degenerate) return detail::convex_by_sampling(a, b);
    const RealPolynomial q = convexity_polynomial(a, b);
    try {
        return count_roots(q, -1.0, 1.0) == 0 && q(0.0) > 0.0;
    } catch (const NotSquareFree&) {
        return detail::convex_by_sampling(a, b);
    }
}

/// Location of the unique minimum of V(z, D, lambda) on [-1, 1].
/// boundary is true for the degenerate branches where the minimum sits at
/// z = +/-1 exactly; V must not be evaluated there (v_rational has a pole
/// unless the numerator cancels it).
struct MinimumResult {
    double z = 0.0;
    bool boundary = false;
};

inline MinimumResult find_minimum(double D, double lambda, const TopParameters& p) {
    const PotentialParams pp = ab_beta(D, lambda, p);
    const double a = pp.a, b = pp.b, beta = pp.beta;
    const double s = std::max(std::abs(a), std::abs(b));
    if (s == 0.0) throw NoSignChange{};
    if (std::abs(a + b) <= 1e-9 * s) {
        // D = D0: f'(z) = -beta - 2a^2/(1+z)^2 < 0, minimum at the right boundary.
        return {1.0, true};
    }
    if (std::abs(a - b) <= 1e-9 * s) {
        // D = D1: f'(z) = -beta + 2a^2/(1-z)^2 > 0 on (-1,1) iff 2 beta < b^2.
        if (2.0 * beta < b * b) return {-1.0, true};
        throw NoSignChange{};
    }
    const RealPolynomial pz = p_polynomial(D, lambda, p);
    double lo = -1.0 + 1e-12, hi = 1.0 - 1e-12;
    double flo = pz(lo), fhi = pz(hi);
    if (!(flo < 0.0 && fhi > 0.0)) throw NoSignChange{};
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = pz(mid);
        if (fm < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    return {0.5 * (lo + hi), false};
}

namespace detail {

/// Positive solution of A d^2 + B d - C = 0 via the cancellation-free form
/// 2C / (B + sqrt(B^2 + 4AC)); for A < 0 this is the smaller positive root.
/// Returns infinity when no positive root exists (A < 0, discriminant < 0).
inline double positive_quadratic_root(double A, double B, double C) {
    const double disc = B * B + 4.0 * A * C;
    if (disc < 0.0) return std::numeric_limits<double>::infinity();
    return 2.0 * C / (B + std::sqrt(disc));
}

} // namespace detail

/// delta_-(epsilon, lambda): positive solution of
///   alpha (1-alpha) gamma lambda d + alpha d^2 + (d^2/eps^2)(1-eps)(1+alpha)^2
///     = alpha^2 gamma^2 lambda^2 - (beta/2)(2-eps)^2 (1+alpha)^2.
/// Guards the D-neighbourhood of D1 in which the minimum stays in [-1, -1+eps].
inline double delta_minus(double epsilon, double lambda, const TopParameters& p) {
    require_rational(p, "delta_minus");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw OutOfDomain("delta_minus requires 0 < eps < 1");
    if (!(lambda > lambda_threshold(p)))
        throw OutOfDomain("delta_minus requires lambda above threshold");
    const double beta = ab_beta(0.0, lambda, p).beta;
    const double opa = 1.0 + p.alpha;
    const double ag = p.alpha * p.gamma * lambda;
    const double A = p.alpha + (1.0 - epsilon) * opa * opa / (epsilon * epsilon);
    const double B = p.alpha * (1.0 - p.alpha) * p.gamma * lambda;
    const double C = ag * ag - 0.5 * beta * (2.0 - epsilon) * (2.0 - epsilon) * opa * opa;
    if (!(C > 0.0)) throw NonPositiveRHS{};
    return detail::positive_quadratic_root(A, B, C);
}

/// delta_+(epsilon, lambda) = min(delta_1, delta_2) with delta_1 = gamma (1+alpha) lambda
/// and delta_2 the positive solution of
///   (d^2/eps^2)(1-eps)(1-alpha)^2 + alpha gamma lambda d (1+alpha) - alpha d^2
///     = alpha^2 gamma^2 lambda^2 + (beta/2)(2-eps)^2 (1-alpha)^2.
inline double delta_plus(double epsilon, double lambda, const TopParameters& p) {
    require_rational(p, "delta_plus");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw OutOfDomain("delta_plus requires 0 < eps < 1");
    if (!(lambda > lambda_threshold(p)))
        throw OutOfDomain("delta_plus requires lambda above threshold");
    const double beta = ab_beta(0.0, lambda, p).beta;
    const double oma = 1.0 - p.alpha;
    const double ag = p.alpha * p.gamma * lambda;
    const double delta1 = p.gamma * (1.0 + p.alpha) * lambda;
    const double A = (1.0 - epsilon) * oma * oma / (epsilon * epsilon) - p.alpha;
    const double B = p.alpha * p.gamma * lambda * (1.0 + p.alpha);
    const double C = ag * ag + 0.5 * beta * (2.0 - epsilon) * (2.0 - epsilon) * oma * oma;
    const double delta2 = detail::positive_quadratic_root(A, B, C);
    return std::min(delta1, delta2);
}

/// Tabulates find_minimum on n evenly spaced D values from D0 down to D1.
inline std::vector<std::pair<double, MinimumResult>> minimum_path(double lambda,
                                                                  const TopParameters& p, int n) {
    require_rational(p, "minimum_path");
    if (n < 2) throw OutOfDomain("minimum_path requires n >= 2");
    if (!(lambda > lambda_threshold(p)))
        throw OutOfDomain("minimum_path requires lambda above threshold");
    const BoundaryValues bv = boundary_values(lambda, p);
    std::vector<std::pair<double, MinimumResult>> path;
    path.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / (n - 1);
        const double D = i == 0 ? bv.D0 : i == n - 1 ? bv.D1 : bv.D0 + f * (bv.D1 - bv.D0);
        path.emplace_back(D, find_minimum(D, lambda, p));
    }
    return path;
}

} // namespace tippetop
