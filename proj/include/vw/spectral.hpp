#pragma once

#include <cmath>
#include <stdexcept>

#include "vw/field.hpp"

namespace vw {

namespace detail {

/// Apply a scalar multiplier m(xi) mode-wise. The multiplier must satisfy
/// m(-xi) = conj(m(xi)) so Hermitian symmetry is preserved.
template <typename Fn>
SpectralField apply_multiplier(const SpectralField& f, Fn&& m) {
    const GridSpec& g = f.grid();
    SpectralField out(g);
    for (int row = 0; row < g.resolution; ++row) {
        double ky = g.xi(g.signed_index(row));
        for (int col = 0; col < g.spectral_cols(); ++col) {
            double kx = g.xi(col == g.resolution / 2 ? -g.resolution / 2 : col);
            out.at(row, col) = m(kx, ky) * f.at(row, col);
        }
    }
    return out;
}

} // namespace detail

/// (-Delta)^power: coefficient at xi multiplied by |xi|^(2*power).
/// The zero mode maps to zero for power < 0 and is kept for power >= 0
/// (|0|^0 = 1 convention at power = 0).
inline SpectralField fractional_laplacian(const SpectralField& f, double power) {
    return detail::apply_multiplier(f, [power](double kx, double ky) -> double {
        double s2 = kx * kx + ky * ky;
        if (s2 == 0.0) return power == 0.0 ? 1.0 : 0.0;
        return std::pow(s2, power);
    });
}

/// Sharp Galerkin truncation E_N: zero all modes with |xi| > N.
inline SpectralField spectral_cutoff(const SpectralField& f, double N) {
    if (!(N > 0.0)) throw std::invalid_argument("spectral_cutoff: N must be positive");
    return detail::apply_multiplier(f, [N2 = N * N](double kx, double ky) -> double {
        return (kx * kx + ky * ky) <= N2 ? 1.0 : 0.0;
    });
}

/// Spectral partial derivatives. Odd multipliers zero the Nyquist row/column
/// so real fields stay real.
inline SpectralField derivative_x(const SpectralField& f) {
    const int half = f.grid().resolution / 2;
    const double xin = f.grid().xi(half);
    return detail::apply_multiplier(f, [xin](double kx, double ky) -> complexd {
        (void)ky;
        if (std::abs(kx) == xin) return 0.0;
        return complexd(0.0, kx);
    });
}

inline SpectralField derivative_y(const SpectralField& f) {
    const int half = f.grid().resolution / 2;
    const double xin = f.grid().xi(half);
    return detail::apply_multiplier(f, [xin](double kx, double ky) -> complexd {
        (void)kx;
        if (std::abs(ky) == xin) return 0.0;
        return complexd(0.0, ky);
    });
}

inline VectorField gradient(const SpectralField& f) {
    VectorField g(f.grid());
    g.x = derivative_x(f);
    g.y = derivative_y(f);
    return g;
}

inline SpectralField divergence(const VectorField& v) {
    SpectralField d = derivative_x(v.x);
    d += derivative_y(v.y);
    return d;
}

/// Biot-Savart velocity of the generalized SQG law, v = -grad^perp (-Delta)^-s theta:
///   v_hat(xi) = -i xi^perp |xi|^(-2s) theta_hat(xi),  v(0-mode) = 0.
/// The sign matches convolution with K_s(x) = c_s x^perp / |x|^(4-2s).
/// Divergence-free mode by mode since xi . xi^perp = 0.
inline VectorField biot_savart(const SpectralField& theta, double s) {
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("biot_savart: s must lie in (0, 1)");
    const GridSpec& g = theta.grid();
    const double xin = g.xi(g.resolution / 2);
    VectorField v(g);
    for (int row = 0; row < g.resolution; ++row) {
        double ky = g.xi(g.signed_index(row));
        for (int col = 0; col < g.spectral_cols(); ++col) {
            double kx = g.xi(col == g.resolution / 2 ? -g.resolution / 2 : col);
            double s2 = kx * kx + ky * ky;
            if (s2 == 0.0 || std::abs(kx) == xin || std::abs(ky) == xin) {
                v.x.at(row, col) = 0.0;
                v.y.at(row, col) = 0.0;
                continue;
            }
            complexd m = complexd(0.0, std::pow(s2, -s)) * theta.at(row, col);
            v.x.at(row, col) = ky * m;  // -xi^perp = (xi_y, -xi_x)
            v.y.at(row, col) = -kx * m;
        }
    }
    return v;
}

/// Mode-wise Leray projection onto divergence-free fields:
///   u_hat -> u_hat - xi (xi . u_hat)/|xi|^2.
inline VectorField leray_project(const VectorField& u) {
    const GridSpec& g = u.grid();
    VectorField out(g);
    for (int row = 0; row < g.resolution; ++row) {
        double ky = g.xi(g.signed_index(row));
        for (int col = 0; col < g.spectral_cols(); ++col) {
            double kx = g.xi(col == g.resolution / 2 ? -g.resolution / 2 : col);
            double s2 = kx * kx + ky * ky;
            complexd ux = u.x.at(row, col), uy = u.y.at(row, col);
            if (s2 == 0.0) {
                out.x.at(row, col) = ux;
                out.y.at(row, col) = uy;
                continue;
            }
            complexd proj = (kx * ux + ky * uy) / s2;
            out.x.at(row, col) = ux - kx * proj;
            out.y.at(row, col) = uy - ky * proj;
        }
    }
    return out;
}

/// Largest |xi . v_hat(xi)| over all modes, normalized by the largest
/// |xi||v_hat|; zero for exactly divergence-free fields.
inline double divergence_residual(const VectorField& v) {
    const GridSpec& g = v.grid();
    double worst = 0.0, scale = 0.0;
    for (int row = 0; row < g.resolution; ++row) {
        double ky = g.xi(g.signed_index(row));
        for (int col = 0; col < g.spectral_cols(); ++col) {
            double kx = g.xi(col == g.resolution / 2 ? -g.resolution / 2 : col);
            complexd d = kx * v.x.at(row, col) + ky * v.y.at(row, col);
            worst = std::max(worst, std::abs(d));
            double mag = std::hypot(kx, ky) *
                         std::max(std::abs(v.x.at(row, col)), std::abs(v.y.at(row, col)));
            scale = std::max(scale, mag);
        }
    }
    return scale > 0.0 ? worst / scale : worst;
}

namespace detail {

/// Parseval sum of w(|xi|^2) |c|^2 over the full lattice (stored half counted
/// with multiplicity two away from the self-paired columns).
template <typename Fn>
double parseval_sum(const SpectralField& f, Fn&& weight) {
    const GridSpec& g = f.grid();
    double acc = 0.0;
    for (int row = 0; row < g.resolution; ++row) {
        double ky = g.xi(g.signed_index(row));
        for (int col = 0; col < g.spectral_cols(); ++col) {
            double kx = g.xi(col == g.resolution / 2 ? -g.resolution / 2 : col);
            double mult = (col == 0 || col == g.resolution / 2) ? 1.0 : 2.0;
            acc += mult * weight(kx * kx + ky * ky) * std::norm(f.at(row, col));
        }
    }
    return acc;
}

} // namespace detail

/// Inhomogeneous Sobolev norm. Normalized so sobolev_norm(f, 0) equals the
/// grid L2 norm sqrt(sum |f(x)|^2 h^2).
inline double sobolev_norm(const SpectralField& f, double k) {
    const double L2 = f.grid().side_length * f.grid().side_length;
    double s = detail::parseval_sum(f, [k](double s2) { return std::pow(1.0 + s2, k); });
    return std::sqrt(L2 * s);
}

/// Homogeneous Sobolev norm; for k < 0 the zero mode must vanish.
inline double homogeneous_sobolev_norm(const SpectralField& f, double k) {
    if (k < 0.0 && std::abs(f.mean_mode()) > 1e-14 * (1.0 + f.max_coeff_abs()))
        throw std::invalid_argument("homogeneous Sobolev norm with k<0 requires zero mean");
    const double L2 = f.grid().side_length * f.grid().side_length;
    double s = detail::parseval_sum(f, [k](double s2) {
        if (s2 == 0.0) return k == 0.0 ? 1.0 : 0.0;
        return std::pow(s2, k);
    });
    return std::sqrt(L2 * s);
}

/// Grid-quadrature Lp norm (p >= 1, infinity = sup of |f|).
inline double lp_norm(const PhysicalField& p, double pexp) {
    if (!(pexp >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    const double cell = p.grid.spacing() * p.grid.spacing();
    if (std::isinf(pexp)) return p.max_abs();
    if (pexp == 1.0) {
        double acc = 0.0;
        for (double v : p.values) acc += std::abs(v);
        return acc * cell;
    }
    if (pexp == 2.0) {
        double acc = 0.0;
        for (double v : p.values) acc += v * v;
        return std::sqrt(acc * cell);
    }
    double acc = 0.0;
    for (double v : p.values) acc += std::pow(std::abs(v), pexp);
    return std::pow(acc * cell, 1.0 / pexp);
}

inline double lp_norm(const SpectralField& f, double pexp) {
    return lp_norm(to_physical(f), pexp);
}

/// Grid quadrature of the product of two real fields, sum f g h^2.
inline double inner_product(const PhysicalField& a, const PhysicalField& b) {
    if (a.grid != b.grid) throw std::invalid_argument("inner_product: grids differ");
    double acc = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) acc += a.values[i] * b.values[i];
    return acc * a.grid.spacing() * a.grid.spacing();
}

} // namespace vw
