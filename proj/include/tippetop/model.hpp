#pragma once

// Physical parameters, dynamical state and the integrals / quasi-integrals
// (Jellett lambda, Routh D, modified energy, total energy) of the rolling
// and gliding tippe top.

#include <array>
#include <cmath>
#include <limits>

#include "tippetop/errors.hpp"

namespace tippetop {

/// Minimal 3-vector for body-frame assembly.
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

/// Derives the transverse moment of inertia that makes the effective
/// potential rational: I1 = (I3^2 + m R^2 I3 (1 - alpha^2)) / (I3 + m R^2).
/// The resulting gamma = I1/I3 lies in (1 - alpha^2, 1).
inline double derive_rational_inertia(double I3, double m, double R, double alpha) {
    if (!(I3 > 0.0 && m > 0.0 && R > 0.0))
        throw OutOfDomain("derive_rational_inertia: I3, m, R must be positive");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw OutOfDomain("derive_rational_inertia: alpha must lie in (0,1)");
    const double mR2 = m * R * R;
    return (I3 * I3 + mR2 * I3 * (1.0 - alpha * alpha)) / (I3 + mR2);
}

/// Physical constants of the top plus the derived ratios gamma = I1/I3 and
/// sigma = m R^2 / I3. Always construct through make() or make_rational();
/// the ratios are recomputed, never set independently.
struct TopParameters {
    double m = 0.0;      ///< mass [kg]
    double R = 0.0;      ///< sphere radius [m]
    double alpha = 0.0;  ///< center-of-mass eccentricity, in (0,1)
    double I1 = 0.0;     ///< transverse moment of inertia [kg m^2]
    double I3 = 0.0;     ///< axial moment of inertia [kg m^2]
    double g = 9.81;     ///< gravitational acceleration [m/s^2]

    double gamma = 0.0;  ///< I1/I3
    double sigma = 0.0;  ///< m R^2 / I3

    static TopParameters make(double m, double R, double alpha, double I1, double I3,
                              double g = 9.81) {
        if (!(m > 0.0 && R > 0.0 && g > 0.0 && I1 > 0.0 && I3 > 0.0))
            throw OutOfDomain("TopParameters: m, R, g, I1, I3 must be positive");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw OutOfDomain("TopParameters: alpha must lie in (0,1)");
        TopParameters p;
        p.m = m;
        p.R = R;
        p.alpha = alpha;
        p.I1 = I1;
        p.I3 = I3;
        p.g = g;
        p.gamma = I1 / I3;
        p.sigma = m * R * R / I3;
        return p;
    }

    /// Constructor variant that derives I1 from the rational condition.
    static TopParameters make_rational(double m, double R, double alpha, double I3,
                                       double g = 9.81) {
        return make(m, R, alpha, derive_rational_inertia(I3, m, R, alpha), I3, g);
    }

    /// True iff 1 - alpha < gamma < 1 + alpha (complete inversion possible).
    bool inversion_regime() const { return gamma > 1.0 - alpha && gamma < 1.0 + alpha; }

    /// True iff 1 - alpha^2 < gamma < 1 and sigma (gamma + alpha^2 - 1) = 1 - gamma,
    /// which makes d(z) a perfect square and the effective potential rational.
    bool rational_regime() const {
        if (!(gamma > 1.0 - alpha * alpha && gamma < 1.0)) return false;
        const double lhs = sigma * (gamma + alpha * alpha - 1.0);
        return std::abs(lhs - (1.0 - gamma)) <= 1e-12 * (1.0 - gamma);
    }

    /// sqrt(gamma + alpha^2 - 1); only meaningful when gamma + alpha^2 > 1.
    double rational_root() const { return std::sqrt(gamma + alpha * alpha - 1.0); }
};

/// The six dynamical variables of the reduced rolling-and-gliding system.
struct GlideState {
    double theta = 0.0;      ///< inclination angle [rad], in (0, pi)
    double theta_dot = 0.0;  ///< d theta / dt [rad/s]
    double phi_dot = 0.0;    ///< d phi / dt [rad/s]
    double omega3 = 0.0;     ///< spin omega_3 = psi_dot + phi_dot cos(theta) [rad/s]
    double nu_x = 0.0;       ///< gliding velocity along 2^ x z^ [m/s]
    double nu_y = 0.0;       ///< gliding velocity along 2^ [m/s]

    bool valid() const {
        const auto fin = [](double v) { return std::isfinite(v); };
        return theta > 0.0 && theta < std::acos(-1.0) && fin(theta) && fin(theta_dot) &&
               fin(phi_dot) && fin(omega3) && fin(nu_x) && fin(nu_y);
    }
};

/// Integral / quasi-integral values evaluated at one state.
struct IntegralSnapshot {
    double lambda = 0.0;   ///< Jellett value [kg m^3/s]
    double D = 0.0;        ///< Routh function value [kg m^2/s]
    double E_tilde = 0.0;  ///< modified energy [J]
    double E_total = 0.0;  ///< total energy [J]
    double g_n = 0.0;      ///< normal force [N]
};

/// d(z) = gamma + sigma (alpha - z)^2 + sigma gamma (1 - z^2); strictly positive
/// on [-1,1]. In the rational regime it equals (alpha - (1-gamma) z)^2 / (gamma + alpha^2 - 1).
inline double d_general(double z, const TopParameters& p) {
    const double az = p.alpha - z;
    return p.gamma + p.sigma * az * az + p.sigma * p.gamma * (1.0 - z * z);
}

/// Jellett integral lambda = R I1 phi_dot sin^2(theta) - R I3 omega3 (alpha - cos(theta)).
/// Exactly conserved by the rolling-and-gliding equations, friction included.
inline double jellett(const GlideState& s, const TopParameters& p) {
    const double st = std::sin(s.theta);
    const double ct = std::cos(s.theta);
    return p.R * p.I1 * s.phi_dot * st * st - p.R * p.I3 * s.omega3 * (p.alpha - ct);
}

/// Routh function D = I3 omega3 sqrt(d(cos theta)); an exact integral for pure
/// rolling, a slowly varying quasi-integral under gliding.
inline double routh(const GlideState& s, const TopParameters& p) {
    return p.I3 * s.omega3 * std::sqrt(d_general(std::cos(s.theta), p));
}

/// Modified energy: the part of the total energy independent of the gliding velocity,
///   E~ = 1/2 (I1 phi_dot^2 sin^2 + I1 theta_dot^2 + I3 omega3^2) + m g R (1 - alpha cos)
///      + 1/2 m R^2 [ (alpha-cos)^2 (theta_dot^2 + phi_dot^2 sin^2)
///                    + sin^2 (theta_dot^2 + omega3^2 + 2 omega3 phi_dot (alpha-cos)) ].
inline double modified_energy(const GlideState& s, const TopParameters& p) {
    const double st = std::sin(s.theta);
    const double ct = std::cos(s.theta);
    const double st2 = st * st;
    const double ac = p.alpha - ct;
    const double td2 = s.theta_dot * s.theta_dot;
    const double pd2 = s.phi_dot * s.phi_dot;
    const double w3 = s.omega3;
    double e = 0.5 * (p.I1 * pd2 * st2 + p.I1 * td2 + p.I3 * w3 * w3);
    e += p.m * p.g * p.R * (1.0 - p.alpha * ct);
    e += 0.5 * p.m * p.R * p.R *
         (ac * ac * (td2 + pd2 * st2) + st2 * (td2 + w3 * w3 + 2.0 * w3 * s.phi_dot * ac));
    return e;
}

/// Body-frame angular velocity (-phi_dot sin, theta_dot, omega3).
inline Vec3 body_angular_velocity(const GlideState& s) {
    return {-s.phi_dot * std::sin(s.theta), s.theta_dot, s.omega3};
}

/// Vector a = R (alpha 3^ - z^) from the center of mass to the contact point,
/// expressed in the body frame where z^ = (-sin, 0, cos).
inline Vec3 contact_arm(const GlideState& s, const TopParameters& p) {
    return {p.R * std::sin(s.theta), 0.0, p.R * (p.alpha - std::cos(s.theta))};
}

/// Gliding velocity v_A = (nu_x cos, nu_y, nu_x sin) in the body frame.
inline Vec3 gliding_velocity(const GlideState& s) {
    return {s.nu_x * std::cos(s.theta), s.nu_y, s.nu_x * std::sin(s.theta)};
}

/// Total energy E = 1/2 m (v_A - omega x a)^2 + 1/2 omega . L + m g s.z^,
/// assembled in the body frame. Equals the modified energy when v_A = 0.
inline double total_energy(const GlideState& s, const TopParameters& p) {
    const Vec3 omega = body_angular_velocity(s);
    const Vec3 a = contact_arm(s, p);
    const Vec3 vA = gliding_velocity(s);
    const Vec3 s_dot = vA - cross(omega, a);
    const Vec3 L{p.I1 * omega.x, p.I1 * omega.y, p.I3 * omega.z};
    const double height = p.R * (1.0 - p.alpha * std::cos(s.theta));
    return 0.5 * p.m * dot(s_dot, s_dot) + 0.5 * dot(omega, L) + p.m * p.g * height;
}

/// Threshold Jellett value above which only the inverted spinning position is
/// asymptotically stable:
///   lambda_thres = sqrt(m g R^3 I3 alpha) (1+alpha)^2 / sqrt(1 + alpha - gamma).
inline double lambda_threshold(const TopParameters& p) {
    if (!p.inversion_regime())
        throw RegimeViolation("threshold undefined outside the inversion regime");
    const double opa = 1.0 + p.alpha;
    return std::sqrt(p.m * p.g * p.R * p.R * p.R * p.I3 * p.alpha) * opa * opa /
           std::sqrt(1.0 + p.alpha - p.gamma);
}

/// Boundary values of (D, E~) for an inverting solution: the upright limit
/// (D0, E~0) as t -> -inf and the inverted limit (D1, E~1) as t -> +inf.
struct BoundaryValues {
    double D0 = 0.0;
    double E_tilde_0 = 0.0;
    double D1 = 0.0;
    double E_tilde_1 = 0.0;
};

inline BoundaryValues boundary_values(double lambda, const TopParameters& p) {
    if (!(lambda > 0.0)) throw OutOfDomain("boundary_values requires lambda > 0");
    const double oma = 1.0 - p.alpha;
    const double opa = 1.0 + p.alpha;
    BoundaryValues b;
    b.D0 = lambda * std::sqrt(d_general(1.0, p)) / (p.R * oma);
    b.D1 = -lambda * std::sqrt(d_general(-1.0, p)) / (p.R * opa);
    const double c = lambda * lambda / (2.0 * p.R * p.R * p.I3);
    b.E_tilde_0 = c / (oma * oma) + p.m * p.g * p.R * oma;
    b.E_tilde_1 = c / (opa * opa) + p.m * p.g * p.R * opa;
    return b;
}

} // namespace tippetop
