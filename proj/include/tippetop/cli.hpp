#pragma once

// Config ingestion, command implementations and bit-exact tabular output.
// Configs are strict JSON: unknown keys are errors, all numerics validated at
// load. Numbers are written as shortest round-trip decimals so identical
// configs produce byte-identical outputs.
//
// Exit codes: 0 ok, 2 config error, 3 integration terminated abnormally,
// 4 regime violation / verification failure.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tippetop/dynamics.hpp"
#include "tippetop/model.hpp"
#include "tippetop/nutation.hpp"
#include "tippetop/potential.hpp"

namespace tippetop::cli {

using json = nlohmann::ordered_json;

struct ConfigError : Error {
    using Error::Error;
};

/// Shortest decimal that round-trips to the same double (17 significant
/// digits at most).
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline void check_keys(const json& j, std::initializer_list<const char*> allowed,
                       const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (key == k) ok = true;
        if (!ok) throw ConfigError("unknown key \"" + key + "\" in " + where);
    }
}

inline double require_number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(std::string("missing \"") + key + "\" in " + where);
    if (!j.at(key).is_number()) throw ConfigError(std::string("\"") + key + "\" must be a number");
    const double v = j.at(key).get<double>();
    if (!std::isfinite(v)) throw ConfigError(std::string("\"") + key + "\" must be finite");
    return v;
}

inline double optional_number(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ConfigError(std::string("\"") + key + "\" must be a number");
    const double v = j.at(key).get<double>();
    if (!std::isfinite(v)) throw ConfigError(std::string("\"") + key + "\" must be finite");
    return v;
}

inline GlideState parse_initial(const json& j) {
    check_keys(j, {"theta", "theta_dot", "phi_dot", "omega3", "nu_x", "nu_y"}, "\"initial\"");
    GlideState s;
    s.theta = require_number(j, "theta", "\"initial\"");
    s.theta_dot = require_number(j, "theta_dot", "\"initial\"");
    s.phi_dot = require_number(j, "phi_dot", "\"initial\"");
    s.omega3 = require_number(j, "omega3", "\"initial\"");
    s.nu_x = require_number(j, "nu_x", "\"initial\"");
    s.nu_y = require_number(j, "nu_y", "\"initial\"");
    if (!s.valid()) throw ConfigError("\"initial\" state invalid (theta must lie in (0,pi))");
    return s;
}

inline TopParameters parse_params(const json& j) {
    const double m = require_number(j, "m", "config");
    const double R = require_number(j, "R", "config");
    const double alpha = require_number(j, "alpha", "config");
    const double I3 = require_number(j, "I3", "config");
    const double g = optional_number(j, "g", 9.81);
    const bool rational = j.contains("rational") && j.at("rational").is_boolean() &&
                          j.at("rational").get<bool>();
    if (j.contains("rational") && !j.at("rational").is_boolean())
        throw ConfigError("\"rational\" must be a boolean");
    if (rational == j.contains("I1"))
        throw ConfigError("config needs exactly one of \"I1\" or \"rational\": true");
    try {
        if (rational) return TopParameters::make_rational(m, R, alpha, I3, g);
        return TopParameters::make(m, R, alpha, require_number(j, "I1", "config"), I3, g);
    } catch (const OutOfDomain& e) {
        throw ConfigError(e.what());
    }
}

} // namespace detail

struct RunConfig {
    TopParameters params;
    FrictionModel friction;
    GlideState initial;
    double t_end = 0.0;
    double rtol = 1e-9;
    double atol = 1e-12;
    double sample_dt = 0.0;
    std::string output;
    json echo;  ///< normalized config (defaults materialized)
};

inline RunConfig parse_run_config(const json& j) {
    detail::check_keys(j,
                       {"m", "R", "alpha", "I1", "I3", "rational", "g", "mu", "initial", "t_end",
                        "rtol", "atol", "sample_dt", "output"},
                       "config");
    RunConfig c;
    c.params = detail::parse_params(j);
    const double mu = detail::require_number(j, "mu", "config");
    if (!(mu >= 0.0)) throw ConfigError("\"mu\" must be >= 0");
    c.friction.mu = mu;
    if (!j.contains("initial") || !j.at("initial").is_object())
        throw ConfigError("missing \"initial\" object");
    c.initial = detail::parse_initial(j.at("initial"));
    c.t_end = detail::require_number(j, "t_end", "config");
    c.rtol = detail::optional_number(j, "rtol", 1e-9);
    c.atol = detail::optional_number(j, "atol", 1e-12);
    c.sample_dt = detail::require_number(j, "sample_dt", "config");
    if (!(c.t_end > 0.0)) throw ConfigError("\"t_end\" must be > 0");
    if (!(c.rtol > 0.0 && c.atol > 0.0)) throw ConfigError("\"rtol\" and \"atol\" must be > 0");
    if (!(c.sample_dt > 0.0)) throw ConfigError("\"sample_dt\" must be > 0");
    if (!j.contains("output") || !j.at("output").is_string())
        throw ConfigError("missing \"output\" string");
    c.output = j.at("output").get<std::string>();

    c.echo = j;
    c.echo["g"] = c.params.g;
    c.echo["rtol"] = c.rtol;
    c.echo["atol"] = c.atol;
    return c;
}

struct AnalysisConfig {
    TopParameters params;
    double lambda = 0.0;
    double epsilon = 0.1;
    int d_grid = 101;
    std::vector<double> e_offsets{0.001, 0.01, 0.1};  ///< E~ offsets above V(z_min), in units of m g R
    std::vector<double> v_scan_fractions{0.0, 0.25, 0.5, 0.75, 1.0};
    int v_scan_points = 401;
    std::string output;
    json echo;
};

inline AnalysisConfig parse_analysis_config(const json& j) {
    detail::check_keys(j,
                       {"m", "R", "alpha", "I1", "I3", "rational", "g", "lambda", "initial",
                        "epsilon", "d_grid", "e_offsets", "v_scan_fractions", "v_scan_points",
                        "output"},
                       "config");
    AnalysisConfig c;
    c.params = detail::parse_params(j);
    if (j.contains("lambda") == j.contains("initial"))
        throw ConfigError("config needs exactly one of \"lambda\" or \"initial\"");
    if (j.contains("lambda")) {
        c.lambda = detail::require_number(j, "lambda", "config");
    } else {
        if (!j.at("initial").is_object()) throw ConfigError("\"initial\" must be an object");
        c.lambda = jellett(detail::parse_initial(j.at("initial")), c.params);
    }
    if (!(c.lambda > 0.0)) throw ConfigError("lambda must be positive");
    c.epsilon = detail::optional_number(j, "epsilon", 0.1);
    if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) throw ConfigError("\"epsilon\" must lie in (0,1)");
    if (j.contains("d_grid")) {
        if (!j.at("d_grid").is_number_integer()) throw ConfigError("\"d_grid\" must be an integer");
        c.d_grid = j.at("d_grid").get<int>();
        if (c.d_grid < 2) throw ConfigError("\"d_grid\" must be >= 2");
    }
    const auto parse_array = [&j](const char* key, std::vector<double>& out) {
        if (!j.contains(key)) return;
        if (!j.at(key).is_array()) throw ConfigError(std::string("\"") + key + "\" must be an array");
        out.clear();
        for (const auto& v : j.at(key)) {
            if (!v.is_number()) throw ConfigError(std::string("\"") + key + "\" must hold numbers");
            out.push_back(v.get<double>());
        }
        if (out.empty()) throw ConfigError(std::string("\"") + key + "\" must not be empty");
    };
    parse_array("e_offsets", c.e_offsets);
    for (double e : c.e_offsets)
        if (!(e >= 0.0)) throw ConfigError("\"e_offsets\" must be nonnegative");
    parse_array("v_scan_fractions", c.v_scan_fractions);
    for (double f : c.v_scan_fractions)
        if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("\"v_scan_fractions\" must lie in [0,1]");
    if (j.contains("v_scan_points")) {
        if (!j.at("v_scan_points").is_number_integer())
            throw ConfigError("\"v_scan_points\" must be an integer");
        c.v_scan_points = j.at("v_scan_points").get<int>();
        if (c.v_scan_points < 2) throw ConfigError("\"v_scan_points\" must be >= 2");
    }
    if (!j.contains("output") || !j.at("output").is_string())
        throw ConfigError("missing \"output\" string");
    c.output = j.at("output").get<std::string>();

    c.echo = j;
    c.echo["g"] = c.params.g;
    c.echo["epsilon"] = c.epsilon;
    c.echo["d_grid"] = c.d_grid;
    c.echo["e_offsets"] = c.e_offsets;
    c.echo["v_scan_fractions"] = c.v_scan_fractions;
    c.echo["v_scan_points"] = c.v_scan_points;
    return c;
}

namespace detail {

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
}

inline void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << body;
}

inline json inversion_json(const InversionReport& r) {
    return json{{"onset_time", r.onset_time},
                {"inversion_time", r.inversion_time},
                {"final_theta", r.final_theta},
                {"sign_changes", r.sign_changes},
                {"completed", r.completed}};
}

inline json conservation_json(const ConservationReport& r) {
    return json{{"lambda_drift", r.lambda_drift},
                {"energy_monotone", r.energy_monotone},
                {"max_energy_rise", r.max_energy_rise},
                {"d_derivative_residual", r.d_derivative_residual},
                {"e_tilde_derivative_residual", r.e_tilde_derivative_residual}};
}

} // namespace detail

/// `simulate`: integrate a gliding trajectory, write the sample table as CSV
/// and an InversionReport/ConservationReport JSON sidecar.
inline int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
    RunConfig c;
    try {
        c = parse_run_config(detail::load_json(config_path));
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    Trajectory traj;
    try {
        traj = integrate(c.initial, c.params, c.friction, c.t_end, c.rtol, c.atol, c.sample_dt);
    } catch (const Error& e) {
        std::cerr << "integration error: " << e.what() << "\n";
        return 3;
    }

    std::string csv = "t,theta,theta_dot,phi_dot,omega3,nu_x,nu_y,g_n,lambda,D,E_tilde,E_total\n";
    for (const auto& s : traj.samples) {
        csv += format_double(s.t);
        for (double v : {s.state.theta, s.state.theta_dot, s.state.phi_dot, s.state.omega3,
                         s.state.nu_x, s.state.nu_y, s.diag.g_n, s.diag.lambda, s.diag.D,
                         s.diag.E_tilde, s.diag.E_total}) {
            csv += ',';
            csv += format_double(v);
        }
        csv += '\n';
    }

    json side;
    side["config"] = c.echo;
    side["termination"] = to_string(traj.meta.reason);
    side["steps"] = json{{"accepted", traj.meta.accepted_steps},
                         {"rejected", traj.meta.rejected_steps},
                         {"max_error_estimate", traj.meta.max_error_estimate}};
    side["inversion"] =
        traj.samples.empty() ? json(nullptr) : detail::inversion_json(detect_inversion(traj));
    side["conservation"] = traj.samples.size() >= 3
                               ? detail::conservation_json(conservation_report(traj))
                               : json(nullptr);

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    detail::write_file(dir / (c.output + ".csv"), csv);
    detail::write_file(dir / (c.output + ".json"), side.dump(2) + "\n");
    return traj.meta.reason == StopReason::Completed ? 0 : 3;
}

/// `potential`: tabulate V(z) scans and the minimum path, plus threshold,
/// boundary values and the delta guards as JSON. Rational regime only.
inline int cmd_potential(const std::string& config_path, const std::string& out_dir) {
    AnalysisConfig c;
    try {
        c = parse_analysis_config(detail::load_json(config_path));
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (!c.params.rational_regime()) {
        std::cerr << "regime violation: potential analysis requires the rational regime\n";
        return 4;
    }
    const TopParameters& p = c.params;
    const double lt = lambda_threshold(p);
    const BoundaryValues bv = boundary_values(c.lambda, p);

    std::string vscan = "D,z,V\n";
    for (double f : c.v_scan_fractions) {
        const double D = bv.D1 + f * (bv.D0 - bv.D1);
        for (int i = 0; i < c.v_scan_points; ++i) {
            const double z = -0.999 + 1.998 * i / (c.v_scan_points - 1);
            vscan += format_double(D) + ',' + format_double(z) + ',' +
                     format_double(v_rational(z, D, c.lambda, p)) + '\n';
        }
    }

    std::string minpath = "D,z_min\n";
    if (c.lambda > lt)
        for (const auto& [D, zm] : minimum_path(c.lambda, p, c.d_grid))
            minpath += format_double(D) + ',' + format_double(zm.z) + '\n';

    json out;
    out["config"] = c.echo;
    out["lambda"] = c.lambda;
    out["lambda_thres"] = lt;
    out["lambda_over_thres"] = c.lambda / lt;
    out["D0"] = bv.D0;
    out["D1"] = bv.D1;
    out["E_tilde_0"] = bv.E_tilde_0;
    out["E_tilde_1"] = bv.E_tilde_1;
    const double root = p.rational_root();
    if (c.lambda > lt) {
        const double dm = delta_minus(c.epsilon, c.lambda, p);
        const double dp = delta_plus(c.epsilon, c.lambda, p);
        out["delta_minus"] = dm;
        out["delta_plus"] = dp;
        out["guard_radius_minus"] = dm / (p.R * (1.0 + p.alpha) * root);
        out["guard_radius_plus"] = dp / (p.R * (1.0 - p.alpha) * root);
    } else {
        out["delta_minus"] = nullptr;
        out["delta_plus"] = nullptr;
    }

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    detail::write_file(dir / (c.output + "_vscan.csv"), vscan);
    detail::write_file(dir / (c.output + "_minpath.csv"), minpath);
    detail::write_file(dir / (c.output + "_potential.json"), out.dump(2) + "\n");
    return 0;
}

/// `period`: PeriodReport rows over the (D, E~) grid. Rows where T_upp is
/// undefined are marked in the status column, not fatal.
inline int cmd_period(const std::string& config_path, const std::string& out_dir) {
    AnalysisConfig c;
    try {
        c = parse_analysis_config(detail::load_json(config_path));
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (!c.params.rational_regime()) {
        std::cerr << "regime violation: period analysis requires the rational regime\n";
        return 4;
    }
    const TopParameters& p = c.params;
    const BoundaryValues bv = boundary_values(c.lambda, p);

    std::string csv =
        "D,E_tilde,z1,z2,z3,k2,K,T_exact,T_low,T_mid,T_high,T_max,T_upp,epsilon,w,status\n";
    int rows = 0;
    for (int i = 0; i < c.d_grid; ++i) {
        // interior D grid: the endpoints D0, D1 are the degenerate branches
        const double f = (i + 0.5) / c.d_grid;
        const double D = bv.D1 + f * (bv.D0 - bv.D1);
        const MinimumResult zm = find_minimum(D, c.lambda, p);
        const double vmin = v_rational(zm.z, D, c.lambda, p);
        for (double off : c.e_offsets) {
            const double E = vmin + off * p.m * p.g * p.R;
            csv += format_double(D) + ',' + format_double(E);
            try {
                const PeriodReport r = make_period_report(E, D, c.lambda, p);
                for (double v : {r.z1, r.z2, r.z3, r.k2, r.K, r.T_exact, r.T_elliptic_low,
                                 r.T_elliptic_mid, r.T_elliptic_high, r.T_max, r.T_upp, r.epsilon,
                                 r.w}) {
                    csv += ',';
                    csv += format_double(v);
                }
                csv += ',' + r.status + '\n';
            } catch (const Error&) {
                for (int k = 0; k < 13; ++k) csv += ",nan";
                csv += ",error\n";
            }
            ++rows;
        }
    }

    json out;
    out["config"] = c.echo;
    out["lambda"] = c.lambda;
    out["lambda_thres"] = lambda_threshold(p);
    out["D0"] = bv.D0;
    out["D1"] = bv.D1;
    out["rows"] = rows;

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    detail::write_file(dir / (c.output + "_period.csv"), csv);
    detail::write_file(dir / (c.output + "_period.json"), out.dump(2) + "\n");
    return 0;
}

} // namespace tippetop::cli
