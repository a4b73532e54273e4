#pragma once

#include <cmath>
#include <stdexcept>

#include "vw/geometry.hpp"

namespace vw {

/// Gamma function, Lanczos approximation (g = 7, 9 terms). Relative accuracy
/// is ~2e-15 on the arguments used here (validated in tests against an
/// independent evaluation).
inline double gamma_fn(double z) {
    static const double c[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7};
    if (z <= 0.0 && z == std::floor(z))
        throw std::domain_error("gamma_fn: pole at non-positive integer");
    if (z < 0.5) return pi / (std::sin(pi * z) * gamma_fn(1.0 - z));
    z -= 1.0;
    double x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (z + i);
    double t = z + 7.5;
    return std::sqrt(two_pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

/// Shared smooth radial transition profile:
///   p(r) = 1 for r <= 1/2, 0 for r >= 1,
///   p(r) = exp(1 - 1/(1 - rho^2)) with rho = 2r - 1 in between.
/// Monotone, 0 <= p <= 1, with exact support values at the endpoints. Used
/// both as the Littlewood-Paley cut-off phi(|xi|) and as the kernel cutoff
/// chi(|x|).
inline double transition_profile(double r) {
    if (r <= 0.5) return 1.0;
    if (r >= 1.0) return 0.0;
    double rho = 2.0 * r - 1.0;
    return std::exp(1.0 - 1.0 / (1.0 - rho * rho));
}

} // namespace vw
