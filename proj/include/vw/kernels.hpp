#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "vw/littlewood_paley.hpp"
#include "vw/numerics.hpp"
#include "vw/special.hpp"
#include "vw/spectral.hpp"

namespace vw {

/// Normalization constant of the Biot-Savart kernel,
///   c_s = (1-s) Gamma(1-s) / (2^(2s-1) pi Gamma(s)),
/// evaluated as Gamma(2-s) / (2^(2s-1) pi Gamma(s)) which is smooth through
/// s = 1 (limit 1/(2 pi)).
inline double c_s_constant(double s) {
    if (!(s > 0.0 && s <= 1.0))
        throw std::invalid_argument("c_s_constant: s must lie in (0, 1]");
    return gamma_fn(2.0 - s) / (std::pow(2.0, 2.0 * s - 1.0) * pi * gamma_fn(s));
}

struct KernelParams {
    double s = 0.5;
    double eps = 0.0; // 0 means unregularized

    KernelParams() = default;
    KernelParams(double s_, double eps_) : s(s_), eps(eps_) {
        if (!(s > 0.0 && s <= 1.0))
            throw std::invalid_argument("KernelParams: s must lie in (0, 1]");
        if (eps < 0.0) throw std::invalid_argument("KernelParams: eps must be >= 0");
    }

    // recomputed on demand, never stored
    double c_s() const { return c_s_constant(s); }
};

/// Smooth radial cutoff chi at scale eps: 1 on |x| <= eps/2, 0 on |x| >= eps.
struct Cutoff {
    double eps = 1.0;
    double operator()(Vec2 x) const { return transition_profile(x.norm() / eps); }
};

/// Unregularized kernel K_s(x) = c_s x^perp / |x|^(4-2s). Singular at 0.
inline Vec2 eval_K_s(Vec2 x, const KernelParams& params) {
    double r = x.norm();
    if (r == 0.0) throw std::domain_error("eval_K_s: singular at x = 0");
    double mag = params.c_s() * std::pow(r, 2.0 * params.s - 4.0);
    return mag * x.perp();
}

/// Regularized kernel K_{s,eps}(x) = (1 - chi_eps(x)) K_s(x): zero on
/// |x| <= eps/2, equal to K_s bit-exactly on |x| >= eps, smooth and odd.
inline Vec2 eval_K_s_eps(Vec2 x, const KernelParams& params) {
    if (!(params.eps > 0.0))
        throw std::invalid_argument("eval_K_s_eps: eps must be positive");
    double r = x.norm();
    if (r >= params.eps) {
        if (r == 0.0) return {0.0, 0.0}; // eps == 0 cannot reach here
        return eval_K_s(x, params);
    }
    if (r <= 0.5 * params.eps) return {0.0, 0.0};
    double factor = 1.0 - transition_profile(r / params.eps);
    double mag = factor * params.c_s() * std::pow(r, 2.0 * params.s - 4.0);
    return mag * x.perp();
}

/// Kernel magnitude bound c_s / |x|^(3-2s); equality for the unregularized
/// kernel, upper bound for the regularized one.
inline double kernel_bound(double r, const KernelParams& params) {
    return params.c_s() * std::pow(r, 2.0 * params.s - 3.0);
}

/// Kernel values on the torus grid, displacement taken from the nearest
/// periodic image of `center` only. The singular lattice point (if eps = 0)
/// is set to zero, consistent with the odd symmetry.
inline std::pair<PhysicalField, PhysicalField> rasterize_kernel(const GridSpec& g,
                                                                const KernelParams& params,
                                                                Vec2 center = {0.0, 0.0}) {
    PhysicalField kx(g), ky(g);
    const int n = g.resolution;
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            Vec2 d = wrap_delta(g.point(ix, iy) - center, g.side_length);
            double r = d.norm();
            Vec2 k{0.0, 0.0};
            if (params.eps > 0.0)
                k = eval_K_s_eps(d, params);
            else if (r > 0.0)
                k = eval_K_s(d, params);
            kx.at(ix, iy) = k.x;
            ky.at(ix, iy) = k.y;
        }
    }
    return {std::move(kx), std::move(ky)};
}

/// FFT convolution v = K_{s,eps} * theta with the rasterized kernel. For
/// theta supported away from the torus boundary this approximates the
/// free-space convolution.
inline VectorField convolve_kernel(const SpectralField& theta, const KernelParams& params) {
    const GridSpec& g = theta.grid();
    if (!(params.eps > 0.0 || params.s > 0.5))
        throw std::invalid_argument("convolve_kernel: need eps > 0 or s > 1/2");
    auto [kx, ky] = rasterize_kernel(g, params);
    SpectralField khx = from_physical(kx), khy = from_physical(ky);
    const double area = g.side_length * g.side_length;
    VectorField v(g);
    for (int row = 0; row < g.resolution; ++row)
        for (int col = 0; col < g.spectral_cols(); ++col) {
            v.x.at(row, col) = area * khx.at(row, col) * theta.at(row, col);
            v.y.at(row, col) = area * khy.at(row, col) * theta.at(row, col);
        }
    return v;
}

/// Integral of K_{s,eps} over the ball B(center, r) by a midpoint tensor
/// quadrature whose node set is symmetric under x -> -x. For center = 0 the
/// summands cancel in exact pairs and the residual is zero to round-off.
inline Vec2 ball_mean_zero_check(const KernelParams& params, double r, int order,
                                 Vec2 center = {0.0, 0.0}) {
    if (!(r > 0.0)) throw std::invalid_argument("ball_mean_zero_check: r must be positive");
    if (order < 2) throw std::invalid_argument("ball_mean_zero_check: order too small");
    const int m = 2 * order; // nodes per axis, even so the set is symmetric
    const double step = 2.0 * r / m;
    const double w = step * step;
    Vec2 acc{0.0, 0.0};
    auto eval = [&](Vec2 p) -> Vec2 {
        Vec2 q = p + center;
        if ((q - center).norm() > r) return {0.0, 0.0};
        if (params.eps > 0.0) return eval_K_s_eps(q, params);
        return q.norm() > 0.0 ? eval_K_s(q, params) : Vec2{0.0, 0.0};
    };
    // iterate node pairs (p, -p) together so exact cancellations survive
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            int pi = m - 1 - i, pj = m - 1 - j;
            if (std::make_pair(i, j) > std::make_pair(pi, pj)) continue;
            Vec2 p{-r + (i + 0.5) * step, -r + (j + 0.5) * step};
            Vec2 contrib = eval(p);
            if (std::make_pair(i, j) != std::make_pair(pi, pj)) contrib += eval(-p);
            acc += contrib;
        }
    }
    return w * acc;
}

struct ConvergenceRate {
    std::vector<double> eps_values;
    std::vector<double> norms;
    double fitted_slope = 0.0;
};

/// Measures || K_s - K_{s,eps} ||_{B^sigma_{1,inf}} (homogeneous, on the
/// grid) along a ladder of eps values and fits the log-log slope. The
/// difference field is chi_eps K_s, supported in |x| <= eps.
inline ConvergenceRate kernel_convergence_rate(const GridSpec& g, double s, double sigma,
                                               const std::vector<double>& eps_ladder) {
    if (eps_ladder.size() < 3)
        throw std::invalid_argument("kernel_convergence_rate: ladder too short (<3 points)");
    ConvergenceRate out;
    out.eps_values = eps_ladder;
    std::vector<double> lx, ly;
    for (double eps : eps_ladder) {
        KernelParams params(s, eps);
        PhysicalField dx(g), dy(g);
        const int n = g.resolution;
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                Vec2 d = wrap_delta(g.point(ix, iy), g.side_length);
                double r = d.norm();
                if (r == 0.0 || r >= eps) continue;
                double chi = transition_profile(r / eps);
                double mag = chi * params.c_s() * std::pow(r, 2.0 * s - 4.0);
                Vec2 k = mag * d.perp();
                dx.at(ix, iy) = k.x;
                dy.at(ix, iy) = k.y;
            }
        VectorField diff(g);
        diff.x = from_physical(dx);
        diff.y = from_physical(dy);
        double norm = besov_norm(diff, sigma, 1.0,
                                 std::numeric_limits<double>::infinity(), true);
        out.norms.push_back(norm);
        lx.push_back(std::log2(eps));
        ly.push_back(std::log2(norm));
    }
    out.fitted_slope = fit_line(lx, ly).slope;
    return out;
}

} // namespace vw
