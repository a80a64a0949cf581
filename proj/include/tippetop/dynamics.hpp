#pragma once

// Reduced equations of motion of the rolling and gliding tippe top, the
// normal force from the contact constraint, adaptive integration with dense
// sampling, the pure-rolling theta-system, and inversion / conservation
// diagnostics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tippetop/errors.hpp"
#include "tippetop/model.hpp"
#include "tippetop/potential.hpp"
#include "tippetop/rk45.hpp"

namespace tippetop {

/// Viscous gliding-friction model: F = g_n z^ - mu g_n v_A with constant mu.
struct FrictionModel {
    double mu = 0.0;
};

/// Normal force from the contact constraint z^.(a+s) = 0:
///   g_n = [ m g I1 + m R alpha (cos (I1 phi_dot^2 sin^2 + I1 theta_dot^2)
///                               - I3 phi_dot omega3 sin^2) ]
///       / [ I1 + m R^2 alpha^2 sin^2 - m R^2 alpha sin (1 - alpha cos) mu nu_x ].
inline double normal_force(const GlideState& s, const TopParameters& p, const FrictionModel& f) {
    const double st = std::sin(s.theta);
    const double ct = std::cos(s.theta);
    const double st2 = st * st;
    const double mR2 = p.m * p.R * p.R;
    const double num =
        p.m * p.g * p.I1 +
        p.m * p.R * p.alpha *
            (ct * (p.I1 * s.phi_dot * s.phi_dot * st2 + p.I1 * s.theta_dot * s.theta_dot) -
             p.I3 * s.phi_dot * s.omega3 * st2);
    const double den = p.I1 + mR2 * p.alpha * p.alpha * st2 -
                       mR2 * p.alpha * st * (1.0 - p.alpha * ct) * f.mu * s.nu_x;
    if (!(den > 0.0)) throw NonPositiveDenominator{};
    const double gn = num / den;
    if (gn < 0.0) throw NegativeNormalForce{};
    return gn;
}

/// Time derivative (theta_dot, theta_ddot, phi_ddot, omega3_dot, nu_x_dot, nu_y_dot)
/// of the reduced system.
inline ode::State<6> glide_derivative(const GlideState& s, const TopParameters& p,
                                      const FrictionModel& f) {
    const double st = std::sin(s.theta);
    if (!(st >= 1e-8)) throw SinThetaUnderflow{};
    const double ct = std::cos(s.theta);
    const double st2 = st * st;
    const double gn = normal_force(s, p, f);
    const double mu_gn = f.mu * gn;
    const double R = p.R, I1 = p.I1, I3 = p.I3, m = p.m, al = p.alpha;
    const double td = s.theta_dot, pd = s.phi_dot, w3 = s.omega3;

    const double theta_ddot = (st / I1) * (I1 * pd * pd * ct - I3 * w3 * pd - R * al * gn) +
                              R * mu_gn * s.nu_x * (1.0 - al * ct) / I1;

    const double phi_ddot =
        (I3 * td * w3 - 2.0 * I1 * td * pd * ct - mu_gn * s.nu_y * R * (al - ct)) / (I1 * st);

    const double omega3_dot = -mu_gn * s.nu_y * R * st / I3;

    const double nu_x_dot =
        (R * st / I1) * (pd * w3 * (I3 * (1.0 - al * ct) - I1) + gn * R * al * (1.0 - al * ct) -
                         I1 * al * (td * td + pd * pd * st2)) -
        (mu_gn * s.nu_x / (m * I1)) * (I1 + m * R * R * (1.0 - al * ct) * (1.0 - al * ct)) +
        pd * s.nu_y;

    const double nu_y_dot =
        -(mu_gn * s.nu_y / (m * I1 * I3)) *
            (I1 * I3 + m * R * R * I3 * (al - ct) * (al - ct) + m * R * R * I1 * st2) +
        (w3 * td * R / I1) * (I3 * (al - ct) + I1 * ct) - pd * s.nu_x;

    return {td, theta_ddot, phi_ddot, omega3_dot, nu_x_dot, nu_y_dot};
}

inline GlideState state_from_array(const ode::State<6>& y) {
    return {y[0], y[1], y[2], y[3], y[4], y[5]};
}

inline ode::State<6> array_from_state(const GlideState& s) {
    return {s.theta, s.theta_dot, s.phi_dot, s.omega3, s.nu_x, s.nu_y};
}

inline IntegralSnapshot snapshot(const GlideState& s, const TopParameters& p,
                                 const FrictionModel& f) {
    IntegralSnapshot d;
    d.lambda = jellett(s, p);
    d.D = routh(s, p);
    d.E_tilde = modified_energy(s, p);
    d.E_total = total_energy(s, p);
    d.g_n = normal_force(s, p, f);
    return d;
}

enum class StopReason {
    Completed,
    NegativeNormalForce,
    NonPositiveDenominator,
    SinThetaUnderflow,
    StepSizeUnderflow,
};

inline const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::Completed: return "completed";
        case StopReason::NegativeNormalForce: return "negative_normal_force";
        case StopReason::NonPositiveDenominator: return "nonpositive_denominator";
        case StopReason::SinThetaUnderflow: return "sin_theta_underflow";
        case StopReason::StepSizeUnderflow: return "step_size_underflow";
    }
    return "unknown";
}

struct TrajectorySample {
    double t = 0.0;
    GlideState state;
    IntegralSnapshot diag;
};

struct TrajectoryMeta {
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    double max_error_estimate = 0.0;
    StopReason reason = StopReason::Completed;
    double rtol = 0.0;
    double atol = 0.0;
    double sample_dt = 0.0;
};

/// Time-sampled trajectory; every diagnostic is recomputed from its sample's
/// state. Immutable after construction, safe to share across threads.
struct Trajectory {
    TopParameters params;
    FrictionModel friction;
    std::vector<TrajectorySample> samples;
    TrajectoryMeta meta;
};

/// Integrates the gliding system from s0 to t_end with the embedded 5(4)
/// pair, sampling the dense interpolant at every multiple of sample_dt.
/// Derivative-domain errors terminate the run early; the partial trajectory
/// is returned with the reason recorded in meta.
inline Trajectory integrate(const GlideState& s0, const TopParameters& p, const FrictionModel& f,
                            double t_end, double rtol, double atol, double sample_dt) {
    if (!(t_end > 0.0)) throw OutOfDomain("integrate requires t_end > 0");
    if (!(sample_dt > 0.0)) throw OutOfDomain("integrate requires sample_dt > 0");
    if (!s0.valid()) throw OutOfDomain("integrate: invalid initial state");

    const auto deriv = [&p, &f](double, const ode::State<6>& y, ode::State<6>& dydt) {
        dydt = glide_derivative(state_from_array(y), p, f);
    };
    ode::DormandPrince<6, decltype(deriv)> stepper(deriv, rtol, atol);

    Trajectory traj;
    traj.params = p;
    traj.friction = f;
    traj.meta.rtol = rtol;
    traj.meta.atol = atol;
    traj.meta.sample_dt = sample_dt;

    StopReason reason = StopReason::Completed;
    std::size_t next_sample = 0;
    try {
        stepper.init(0.0, array_from_state(s0), t_end);
        traj.samples.push_back({0.0, s0, snapshot(s0, p, f)});
        ++next_sample;
        while (!stepper.finished()) {
            stepper.step();
            for (;;) {
                const double ts = static_cast<double>(next_sample) * sample_dt;
                if (ts > stepper.t() || ts > t_end) break;
                const GlideState s = state_from_array(stepper.dense(ts));
                traj.samples.push_back({ts, s, snapshot(s, p, f)});
                ++next_sample;
            }
        }
    } catch (const NegativeNormalForce&) {
        reason = StopReason::NegativeNormalForce;
    } catch (const NonPositiveDenominator&) {
        reason = StopReason::NonPositiveDenominator;
    } catch (const SinThetaUnderflow&) {
        reason = StopReason::SinThetaUnderflow;
    } catch (const StepSizeUnderflow&) {
        reason = StopReason::StepSizeUnderflow;
    }
    traj.meta.accepted_steps = stepper.accepted_steps();
    traj.meta.rejected_steps = stepper.rejected_steps();
    traj.meta.max_error_estimate = stepper.max_error_estimate();
    traj.meta.reason = reason;
    return traj;
}

/// Inversion diagnostics. onset_time is the first time theta exceeds
/// theta(0) + 0.1 rad; inversion_time the duration from onset until theta
/// first exceeds pi - 0.2. Both are NaN when the event never occurs.
/// Sign changes of theta_dot are counted from onset (or from the start when
/// there is no onset) with a |theta_dot| > 1e-6 hysteresis band.
struct InversionReport {
    double onset_time = std::numeric_limits<double>::quiet_NaN();
    double inversion_time = std::numeric_limits<double>::quiet_NaN();
    double final_theta = 0.0;
    int sign_changes = 0;
    bool completed = false;
};

inline InversionReport detect_inversion(const Trajectory& traj) {
    if (traj.samples.empty()) throw OutOfDomain("detect_inversion: empty trajectory");
    const double pi = std::acos(-1.0);
    const double theta0 = traj.samples.front().state.theta;
    InversionReport rep;
    rep.final_theta = traj.samples.back().state.theta;
    rep.completed = rep.final_theta > pi - 0.2;

    double cross_time = std::numeric_limits<double>::quiet_NaN();
    for (const auto& s : traj.samples) {
        if (std::isnan(rep.onset_time) && s.state.theta > theta0 + 0.1) rep.onset_time = s.t;
        if (std::isnan(cross_time) && s.state.theta > pi - 0.2) cross_time = s.t;
    }
    if (!std::isnan(rep.onset_time) && !std::isnan(cross_time))
        rep.inversion_time = cross_time - rep.onset_time;

    const double t_count = std::isnan(rep.onset_time) ? 0.0 : rep.onset_time;
    int prev = 0;
    for (const auto& s : traj.samples) {
        if (s.t < t_count) continue;
        const double td = s.state.theta_dot;
        if (std::abs(td) <= 1e-6) continue;
        const int sign = td > 0.0 ? 1 : -1;
        if (prev != 0 && sign != prev) ++rep.sign_changes;
        prev = sign;
    }
    return rep;
}

/// Drift and monotonicity diagnostics plus the quasi-integral derivative
/// identities dD/dt = gamma m R sin(theta) (phi_dot nu_x + nu_y_dot) / sqrt(d)
/// and dE~/dt = m v_A_dot . (omega x a), checked against centred differences
/// of the sampled D(t) and E~(t). Residuals are taken relative to the
/// identity's right-hand side, restricted to samples where it exceeds 5% of
/// its maximum (the centred-difference noise floor); nu_x_dot and nu_y_dot
/// come from glide_derivative, not from finite differences.
struct ConservationReport {
    double lambda_drift = 0.0;
    bool energy_monotone = true;
    double max_energy_rise = 0.0;
    double d_derivative_residual = 0.0;
    double e_tilde_derivative_residual = 0.0;
};

inline ConservationReport conservation_report(const Trajectory& traj, double energy_tol = -1.0) {
    if (traj.samples.size() < 3) throw OutOfDomain("conservation_report needs >= 3 samples");
    const TopParameters& p = traj.params;
    const auto& ss = traj.samples;
    ConservationReport rep;

    const double lambda0 = ss.front().diag.lambda;
    for (const auto& s : ss)
        rep.lambda_drift =
            std::max(rep.lambda_drift, std::abs(s.diag.lambda - lambda0) / std::abs(lambda0));

    if (energy_tol < 0.0)
        energy_tol =
            100.0 * (traj.meta.atol + traj.meta.rtol * std::abs(ss.front().diag.E_total));
    for (std::size_t k = 0; k + 1 < ss.size(); ++k) {
        const double rise = ss[k + 1].diag.E_total - ss[k].diag.E_total;
        rep.max_energy_rise = std::max(rep.max_energy_rise, rise);
        if (rise > energy_tol) rep.energy_monotone = false;
    }

    // Identity right-hand sides at every sample.
    std::vector<double> rhs_d(ss.size()), rhs_e(ss.size());
    double max_d = 0.0, max_e = 0.0;
    for (std::size_t k = 0; k < ss.size(); ++k) {
        const GlideState& s = ss[k].state;
        const auto dydt = glide_derivative(s, p, traj.friction);
        const double st = std::sin(s.theta);
        rhs_d[k] = p.gamma * p.m * p.R * st * (s.phi_dot * s.nu_x + dydt[5]) /
                   std::sqrt(d_general(std::cos(s.theta), p));
        const double c = std::cos(s.theta);
        const Vec3 vA_dot{(dydt[4] - s.phi_dot * s.nu_y) * c, dydt[5] + s.phi_dot * s.nu_x,
                          (dydt[4] - s.phi_dot * s.nu_y) * st};
        rhs_e[k] = p.m * dot(vA_dot, cross(body_angular_velocity(s), contact_arm(s, p)));
        max_d = std::max(max_d, std::abs(rhs_d[k]));
        max_e = std::max(max_e, std::abs(rhs_e[k]));
    }
    for (std::size_t k = 1; k + 1 < ss.size(); ++k) {
        const double h2 = ss[k + 1].t - ss[k - 1].t;
        const double fd_d = (ss[k + 1].diag.D - ss[k - 1].diag.D) / h2;
        const double fd_e = (ss[k + 1].diag.E_tilde - ss[k - 1].diag.E_tilde) / h2;
        if (std::abs(rhs_d[k]) > 0.05 * max_d)
            rep.d_derivative_residual = std::max(rep.d_derivative_residual,
                                                 std::abs(fd_d - rhs_d[k]) / std::abs(rhs_d[k]));
        if (std::abs(rhs_e[k]) > 0.05 * max_e)
            rep.e_tilde_derivative_residual =
                std::max(rep.e_tilde_derivative_residual,
                         std::abs(fd_e - rhs_e[k]) / std::abs(rhs_e[k]));
    }
    return rep;
}

/// Pure-rolling theta-system: theta_ddot = sin(theta) / (2 g(cos theta)) *
/// (g'(cos theta) theta_dot^2 + V'(cos theta, D, lambda)). The quantity
/// g(cos theta) theta_dot^2 + V(cos theta) is a first integral of this flow.
inline ode::State<2> rolling_derivative(double theta, double theta_dot, double D,
                                        const TopParameters& p, double lambda) {
    const double st = std::sin(theta);
    if (!(st >= 1e-8)) throw SinThetaUnderflow{};
    const double z = std::cos(theta);
    const double acc = st / (2.0 * g_coefficient(z, p)) *
                       (g_coefficient_dz(p) * theta_dot * theta_dot + v_rational_dz(z, D, lambda, p));
    return {theta_dot, acc};
}

struct RollingSample {
    double t = 0.0;
    double theta = 0.0;
    double theta_dot = 0.0;
};

/// Integrates the rolling theta-system at fixed (D, lambda), sampling at
/// multiples of sample_dt.
inline std::vector<RollingSample> integrate_rolling(double theta0, double theta_dot0, double D,
                                                    double lambda, const TopParameters& p,
                                                    double t_end, double rtol, double atol,
                                                    double sample_dt) {
    const auto deriv = [&](double, const ode::State<2>& y, ode::State<2>& dydt) {
        dydt = rolling_derivative(y[0], y[1], D, p, lambda);
    };
    ode::DormandPrince<2, decltype(deriv)> stepper(deriv, rtol, atol);
    stepper.init(0.0, {theta0, theta_dot0}, t_end);
    std::vector<RollingSample> out;
    out.push_back({0.0, theta0, theta_dot0});
    std::size_t next = 1;
    while (!stepper.finished()) {
        stepper.step();
        for (;;) {
            const double ts = static_cast<double>(next) * sample_dt;
            if (ts > stepper.t() || ts > t_end) break;
            const auto y = stepper.dense(ts);
            out.push_back({ts, y[0], y[1]});
            ++next;
        }
    }
    return out;
}

} // namespace tippetop
