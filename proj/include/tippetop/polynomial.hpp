#pragma once

// Dense real polynomials and Sturm-sequence root counting.
//
// Coefficients are stored in ascending degree. The Sturm machinery works in
// double precision with an explicit zero threshold: remainder coefficients
// whose relative magnitude falls below 1e-13 of the dividend scale are
// treated as exact zeros.

#include <cmath>
#include <cstddef>
#include <vector>

#include "tippetop/errors.hpp"

namespace tippetop {

struct RealPolynomial {
    std::vector<double> c;  ///< coefficients, ascending degree

    RealPolynomial() = default;
    explicit RealPolynomial(std::vector<double> coeffs) : c(std::move(coeffs)) {}

    int degree() const { return static_cast<int>(c.size()) - 1; }

    bool is_zero() const { return c.empty(); }

    double max_magnitude() const {
        double m = 0.0;
        for (double v : c) m = std::max(m, std::abs(v));
        return m;
    }

    /// Horner evaluation.
    double operator()(double x) const {
        double r = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
        return r;
    }

    RealPolynomial derivative() const {
        if (c.size() <= 1) return RealPolynomial{};
        std::vector<double> d(c.size() - 1);
        for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
        return RealPolynomial{std::move(d)};
    }

    /// Drops trailing coefficients with magnitude below tol.
    void trim(double tol) {
        while (!c.empty() && std::abs(c.back()) <= tol) c.pop_back();
    }
};

namespace detail {

/// Remainder of dividend / divisor, accumulated in long double; coefficients
/// below 1e-13 of the operand scale are zeroed so that exact algebraic
/// cancellations terminate the Euclidean chain.
inline RealPolynomial remainder(const RealPolynomial& dividend, const RealPolynomial& divisor) {
    std::vector<long double> r(dividend.c.begin(), dividend.c.end());
    const std::size_t dn = divisor.c.size();
    const long double lead = divisor.c.back();
    while (r.size() >= dn) {
        const long double q = r.back() / lead;
        const std::size_t shift = r.size() - dn;
        for (std::size_t i = 0; i < dn; ++i)
            r[shift + i] -= q * static_cast<long double>(divisor.c[i]);
        r.pop_back();  // leading term cancels by construction
    }
    RealPolynomial rem;
    rem.c.assign(r.begin(), r.end());
    const double tol = 1e-13 * std::max(dividend.max_magnitude(), divisor.max_magnitude());
    for (double& v : rem.c)
        if (std::abs(v) <= tol) v = 0.0;
    rem.trim(tol);
    return rem;
}

} // namespace detail

/// Sturm sequence q0 = q, q1 = q', q_i = -rem(q_{i-2}, q_{i-1}), ending with a
/// constant. Throws NotSquareFree when the Euclidean chain hits a zero
/// remainder before reaching a constant (gcd(q, q') is then nonconstant).
inline std::vector<RealPolynomial> sturm_sequence(RealPolynomial q) {
    q.trim(1e-13 * q.max_magnitude());
    if (q.is_zero()) throw OutOfDomain("sturm_sequence: zero polynomial");
    std::vector<RealPolynomial> seq;
    seq.push_back(q);
    if (q.degree() == 0) return seq;
    seq.push_back(q.derivative());
    while (seq.back().degree() >= 1) {
        RealPolynomial r = detail::remainder(seq[seq.size() - 2], seq.back());
        if (r.is_zero()) throw NotSquareFree{};
        for (double& v : r.c) v = -v;
        seq.push_back(std::move(r));
    }
    return seq;
}

namespace detail {

inline int sign_changes(const std::vector<RealPolynomial>& seq, double x) {
    int changes = 0;
    int prev = 0;
    for (const auto& p : seq) {
        const double v = p(x);
        const int s = (v > 0.0) - (v < 0.0);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

/// Sturm chain with every member rescaled to unit max magnitude. Positive
/// scaling preserves all sign patterns while keeping the division steps
/// well-conditioned when intermediate members swing over many orders of
/// magnitude.
inline std::vector<RealPolynomial> normalized_sturm_chain(RealPolynomial q) {
    const auto normalize = [](RealPolynomial& p) {
        const double m = p.max_magnitude();
        if (m > 0.0)
            for (double& v : p.c) v /= m;
    };
    q.trim(1e-13 * q.max_magnitude());
    if (q.is_zero()) throw OutOfDomain("count_roots: zero polynomial");
    normalize(q);
    std::vector<RealPolynomial> seq;
    seq.push_back(q);
    if (q.degree() == 0) return seq;
    RealPolynomial d = q.derivative();
    normalize(d);
    seq.push_back(std::move(d));
    while (seq.back().degree() >= 1) {
        RealPolynomial r = remainder(seq[seq.size() - 2], seq.back());
        if (r.is_zero()) throw NotSquareFree{};
        for (double& v : r.c) v = -v;
        normalize(r);
        seq.push_back(std::move(r));
    }
    return seq;
}

} // namespace detail

/// Exact number of distinct real roots of a square-free q in the half-open
/// interval (c, d], by Sturm's theorem.
inline int count_roots(const RealPolynomial& q, double c, double d) {
    if (!(c < d)) throw OutOfDomain("count_roots requires c < d");
    const auto seq = detail::normalized_sturm_chain(q);
    return detail::sign_changes(seq, c) - detail::sign_changes(seq, d);
}

} // namespace tippetop
