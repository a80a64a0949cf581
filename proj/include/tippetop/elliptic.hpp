#pragma once

#include <cmath>

#include "tippetop/errors.hpp"

namespace tippetop {

/// Complete elliptic integral of the first kind,
///   K(k^2) = integral_0^1 ds / sqrt((1-s^2)(1-k^2 s^2)),
/// computed by the arithmetic-geometric mean iteration: K = pi / (2 agm(1, k')).
/// Converges quadratically; the loop is iterated to 1e-15 relative.
inline double elliptic_k(double k2) {
    if (!(k2 >= 0.0 && k2 < 1.0)) throw OutOfDomain("elliptic_k requires 0 <= k^2 < 1");
    double a = 1.0;
    double g = std::sqrt(1.0 - k2);
    for (int i = 0; i < 64 && std::abs(a - g) > 1e-15 * a; ++i) {
        const double an = 0.5 * (a + g);
        g = std::sqrt(a * g);
        a = an;
    }
    const double pi = std::acos(-1.0);
    return pi / (a + g);
}

} // namespace tippetop
