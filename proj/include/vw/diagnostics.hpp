#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "vw/kernels.hpp"
#include "vw/numerics.hpp"
#include "vw/pointvortex.hpp"
#include "vw/spectral.hpp"

namespace vw {

/// One time sample of every monitored quantity.
struct DiagnosticsRecord {
    double t = 0.0;
    double lp1 = 0.0, lp2 = 0.0, lp4 = 0.0, lp_inf = 0.0;
    double h1 = 0.0, h2 = 0.0, h3 = 0.0, h4 = 0.0;
    double h_frac = 0.0; // H^{3-2s}
    std::vector<double> plateau_r;  // per vortex
    std::vector<double> blowup_n;   // per vortex, signed
    std::vector<double> v_at_vortex; // |v(z_i)| per vortex
    double energy = 0.0;      // ||theta||_{H^4}^2 + 1/min_i R_i
    double grad_v_sup = 0.0;  // sup of the Frobenius norm of grad v
    double hamiltonian = 0.0;
    double moment = 0.0;
    double min_dist = 0.0;
    std::vector<Vec2> positions;
};

/// Largest radius r (on the half-spacing ladder, capped at L/4) such that
/// |theta - beta| <= tol on every fine-grid sample of B(z, r). The field is
/// evaluated on a 2x refined grid by trigonometric interpolation. Returns 0
/// when theta(z) itself deviates beyond the tolerance.
inline double plateau_radius(const SpectralField& theta, Vec2 z, double beta, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("plateau_radius: tol must be positive");
    const GridSpec& g = theta.grid();
    const double L = g.side_length;
    const double cap = 0.25 * L;
    if (std::abs(evaluate_at(theta, z) - beta) > tol) return 0.0;

    PhysicalField fine = to_physical(upsample2(theta));
    const GridSpec& fg = fine.grid;
    const double step = 0.5 * g.spacing();
    const int bins = static_cast<int>(std::floor(cap / step));
    std::vector<double> worst(bins + 1, 0.0);
    for (int iy = 0; iy < fg.resolution; ++iy)
        for (int ix = 0; ix < fg.resolution; ++ix) {
            Vec2 d = wrap_delta(fg.point(ix, iy) - z, L);
            double r = d.norm();
            if (r > cap) continue;
            int bin = static_cast<int>(std::ceil(r / step));
            if (bin > bins) continue;
            double dev = std::abs(fine.at(ix, iy) - beta);
            if (dev > worst[bin]) worst[bin] = dev;
        }
    double radius = 0.0;
    for (int b = 0; b <= bins; ++b) {
        if (worst[b] > tol) break;
        radius = b * step;
    }
    return std::min(radius, cap);
}

/// Variant of the plateau test on |grad theta| <= tol instead of
/// |theta - beta|; the two coincide on connected plateaus.
inline double plateau_radius_gradient(const SpectralField& theta, Vec2 z, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("plateau_radius_gradient: tol must be positive");
    VectorField grad = gradient(theta);
    const GridSpec& g = theta.grid();
    const double L = g.side_length;
    const double cap = 0.25 * L;
    Vec2 gz = evaluate_at(grad, z);
    if (gz.norm() > tol) return 0.0;

    PhysicalField gx = to_physical(upsample2(grad.x));
    PhysicalField gy = to_physical(upsample2(grad.y));
    const GridSpec& fg = gx.grid;
    const double step = 0.5 * g.spacing();
    const int bins = static_cast<int>(std::floor(cap / step));
    std::vector<double> worst(bins + 1, 0.0);
    for (int iy = 0; iy < fg.resolution; ++iy)
        for (int ix = 0; ix < fg.resolution; ++ix) {
            Vec2 d = wrap_delta(fg.point(ix, iy) - z, L);
            double r = d.norm();
            if (r > cap) continue;
            int bin = static_cast<int>(std::ceil(r / step));
            if (bin > bins) continue;
            double dev = std::hypot(gx.at(ix, iy), gy.at(ix, iy));
            if (dev > worst[bin]) worst[bin] = dev;
        }
    double radius = 0.0;
    for (int b = 0; b <= bins; ++b) {
        if (worst[b] > tol) break;
        radius = b * step;
    }
    return std::min(radius, cap);
}

/// Evaluate both components of a vector field at many points, sharing the
/// per-point phase tables.
inline std::vector<Vec2> evaluate_many(const VectorField& v, const std::vector<Vec2>& pts) {
    const GridSpec& g = v.grid();
    const int n = g.resolution;
    const int nc = g.spectral_cols();
    std::vector<Vec2> out;
    out.reserve(pts.size());
    std::vector<complexd> px(nc), py(n);
    for (Vec2 p : pts) {
        const double ux = two_pi * p.x / g.side_length;
        const double uy = two_pi * p.y / g.side_length;
        for (int kx = 0; kx < nc; ++kx) px[kx] = std::polar(1.0, ux * kx);
        for (int row = 0; row < n; ++row) py[row] = std::polar(1.0, uy * g.signed_index(row));
        complexd ax(0.0, 0.0), ay(0.0, 0.0);
        for (int row = 0; row < n; ++row) {
            complexd ix(0.0, 0.0), iy(0.0, 0.0);
            for (int kx = 1; kx < nc - 1; ++kx) {
                ix += v.x.at(row, kx) * px[kx];
                iy += v.y.at(row, kx) * px[kx];
            }
            complexd ny = std::conj(px[nc - 1]) * py[row];
            ax += (v.x.at(row, 0) + 2.0 * ix) * py[row] + v.x.at(row, nc - 1) * ny;
            ay += (v.y.at(row, 0) + 2.0 * iy) * py[row] + v.y.at(row, nc - 1) * ny;
        }
        out.push_back({ax.real(), ay.real()});
    }
    return out;
}

/// Directional log-Lipschitz functional
///   N(v, z, R) = max_{|x-z|=R} -(x-z).(v(x)-v(z)) / (R^2 (1 - ln R)).
/// Sampled at n_samples equi-angular points plus one refinement at twice as
/// many; the maximum of both is returned. Requires R^2 (1 - ln R) > 0.
inline double blowup_functional(const VectorField& v, Vec2 z, double R, int n_samples = 256) {
    if (!(R > 0.0)) throw std::invalid_argument("blowup_functional: R must be positive");
    double denom = R * R * (1.0 - std::log(R));
    if (!(denom > 0.0))
        throw std::invalid_argument("blowup_functional: requires 1 - ln R > 0 (R < e)");
    Vec2 vz = evaluate_at(v, z);
    auto max_over = [&](int m) {
        std::vector<Vec2> pts;
        pts.reserve(m);
        for (int i = 0; i < m; ++i) {
            double ang = two_pi * i / m;
            pts.push_back(z + R * Vec2{std::cos(ang), std::sin(ang)});
        }
        std::vector<Vec2> vals = evaluate_many(v, pts);
        double best = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            Vec2 dx = pts[i] - z;
            best = std::max(best, -dx.dot(vals[i] - vz) / denom);
        }
        return best;
    };
    return std::max(max_over(n_samples), max_over(2 * n_samples));
}

struct LogLipschitzReport {
    double ll_sup = 0.0;     // sampled sup of |v(x)-v(y)| / (|x-y|(1-ln|x-y|))
    double n_value = 0.0;    // blow-up functional at the matched (z, R)
    bool dominated = false;  // n_value <= ll_sup
};

/// Sampled log-Lipschitz norm of v over random grid pairs plus the circle
/// pairs used by the blow-up functional; checks the domination
/// |N(v,z,R)| <= ||v||_LL.
inline LogLipschitzReport log_lipschitz_bound_check(const VectorField& v, Vec2 z, double R,
                                                    int n_pairs, uint64_t seed) {
    PhysicalField vx = to_physical(v.x), vy = to_physical(v.y);
    const GridSpec& g = v.grid();
    const int n = g.resolution;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    double sup = 0.0;
    auto quotient = [&](Vec2 xa, Vec2 va, Vec2 xb, Vec2 vb) {
        double dist = wrap_delta(xa - xb, g.side_length).norm();
        if (dist <= 0.0 || dist >= 1.0) return 0.0;
        return (va - vb).norm() / (dist * (1.0 - std::log(dist)));
    };
    for (int i = 0; i < n_pairs; ++i) {
        int ix1 = pick(rng), iy1 = pick(rng), ix2 = pick(rng), iy2 = pick(rng);
        Vec2 xa = g.point(ix1, iy1), xb = g.point(ix2, iy2);
        Vec2 va{vx.at(ix1, iy1), vy.at(ix1, iy1)};
        Vec2 vb{vx.at(ix2, iy2), vy.at(ix2, iy2)};
        sup = std::max(sup, quotient(xa, va, xb, vb));
    }
    // the circle pairs that feed N
    Vec2 vz = evaluate_at(v, z);
    std::vector<Vec2> pts;
    for (int i = 0; i < 256; ++i) {
        double ang = two_pi * i / 256;
        pts.push_back(z + R * Vec2{std::cos(ang), std::sin(ang)});
    }
    std::vector<Vec2> vals = evaluate_many(v, pts);
    for (size_t i = 0; i < pts.size(); ++i) sup = std::max(sup, quotient(pts[i], vals[i], z, vz));

    LogLipschitzReport rep;
    rep.ll_sup = sup;
    rep.n_value = blowup_functional(v, z, R);
    rep.dominated = std::abs(rep.n_value) <= sup + 1e-12 * (1.0 + sup);
    return rep;
}

/// Sup over the grid of the Frobenius norm of grad v (spectral derivatives).
inline double grad_sup_norm(const VectorField& v) {
    PhysicalField dxx = to_physical(derivative_x(v.x));
    PhysicalField dxy = to_physical(derivative_y(v.x));
    PhysicalField dyx = to_physical(derivative_x(v.y));
    PhysicalField dyy = to_physical(derivative_y(v.y));
    double sup = 0.0;
    for (size_t i = 0; i < dxx.values.size(); ++i) {
        double f = dxx.values[i] * dxx.values[i] + dxy.values[i] * dxy.values[i] +
                   dyx.values[i] * dyx.values[i] + dyy.values[i] * dyy.values[i];
        sup = std::max(sup, f);
    }
    return std::sqrt(sup);
}

struct AuditSeries {
    std::vector<double> times;
    std::vector<double> bound;  // lower bound for R(t)
    std::vector<double> margin; // R(t) - bound(t)
    double worst_margin = 0.0;
};

/// Exponential lower bound R(t) >= R(0) exp(-int ||grad v||_inf); margins
/// use trapezoidal time integration of the sampled series.
inline AuditSeries radius_lower_bound_audit(const std::vector<double>& times,
                                            const std::vector<double>& radius,
                                            const std::vector<double>& grad_v_sup) {
    if (times.size() != radius.size() || times.size() != grad_v_sup.size() || times.empty())
        throw std::invalid_argument("radius_lower_bound_audit: mismatched series");
    AuditSeries out;
    out.times = times;
    std::vector<double> integral = cumulative_trapezoid(times, grad_v_sup);
    out.worst_margin = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < times.size(); ++i) {
        double b = radius.front() * std::exp(-integral[i]);
        out.bound.push_back(b);
        out.margin.push_back(radius[i] - b);
        out.worst_margin = std::min(out.worst_margin, out.margin.back());
    }
    return out;
}

/// Osgood lower bound R(t) >= exp(-exp(int N dt + ln(1 - ln R(0))) + 1),
/// using the signed blow-up functional series. Requires R(0) < 1.
inline AuditSeries osgood_lower_bound_audit(const std::vector<double>& times,
                                            const std::vector<double>& radius,
                                            const std::vector<double>& blowup_n) {
    if (times.size() != radius.size() || times.size() != blowup_n.size() || times.empty())
        throw std::invalid_argument("osgood_lower_bound_audit: mismatched series");
    if (!(radius.front() < 1.0))
        throw std::invalid_argument("osgood_lower_bound_audit: requires R(0) < 1");
    AuditSeries out;
    out.times = times;
    std::vector<double> integral = cumulative_trapezoid(times, blowup_n);
    const double log_term = std::log(1.0 - std::log(radius.front()));
    out.worst_margin = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < times.size(); ++i) {
        double b = std::exp(-std::exp(integral[i] + log_term) + 1.0);
        out.bound.push_back(b);
        out.margin.push_back(radius[i] - b);
        out.worst_margin = std::min(out.worst_margin, out.margin.back());
    }
    return out;
}

struct EnergyReport {
    std::vector<double> times;
    std::vector<double> energy;        // E(t) = ||theta||_{H^k}^2 + 1/R(t)
    std::vector<double> growth_ladder; // sup_{t' <= t} E(t') / E(0) per sample
    double growth_factor = 0.0;        // sup over the whole series
    double reference_timescale = 0.0;  // 1 / (E(0)^{5+3k-6s} + E(0)^{1/2})
};

/// Energy series and the existence-time reference scale (the constant in
/// front is not explicit, so only the shape is reported). The growth ladder
/// gives sup_{t <= T} E / E(0) for every sampled horizon T.
inline EnergyReport energy_and_time_bound(const std::vector<double>& times,
                                          const std::vector<double>& hk_norm,
                                          const std::vector<double>& radius, int k, double s) {
    if (times.size() != hk_norm.size() || times.size() != radius.size() || times.empty())
        throw std::invalid_argument("energy_and_time_bound: mismatched series");
    EnergyReport rep;
    rep.times = times;
    for (size_t i = 0; i < times.size(); ++i) {
        if (radius[i] <= 0.0) {
            rep.energy.push_back(std::numeric_limits<double>::infinity());
            break; // stream truncates at the singularity
        }
        rep.energy.push_back(hk_norm[i] * hk_norm[i] + 1.0 / radius[i]);
    }
    double e0 = rep.energy.front();
    for (double e : rep.energy) {
        rep.growth_factor = std::max(rep.growth_factor, e / e0);
        rep.growth_ladder.push_back(rep.growth_factor);
    }
    double q = 5.0 + 3.0 * k - 6.0 * s;
    rep.reference_timescale = 1.0 / (std::pow(e0, q) + std::sqrt(e0));
    return rep;
}

struct StabilityGapReport {
    std::vector<double> times;
    std::vector<double> gap; // ||theta2-theta1||_{H^ell} + sum_i |z2_i-z1_i|
    double fitted_rate = 0.0;
    double fit_r_squared = 0.0;
    bool identically_zero = false;
};

/// Gap series between two runs sampled on matching time grids, with an
/// exponential fit gap(t) ~ gap(0) e^{lambda t} over the window.
inline StabilityGapReport stability_gap(const std::vector<double>& times,
                                        const std::vector<SpectralField>& theta1,
                                        const std::vector<SpectralField>& theta2,
                                        const std::vector<std::vector<Vec2>>& z1,
                                        const std::vector<std::vector<Vec2>>& z2, double ell) {
    const size_t m = times.size();
    if (theta1.size() != m || theta2.size() != m || z1.size() != m || z2.size() != m || m < 2)
        throw std::invalid_argument("stability_gap: mismatched series");
    StabilityGapReport rep;
    rep.times = times;
    for (size_t i = 0; i < m; ++i) {
        if (theta1[i].grid() != theta2[i].grid())
            throw std::invalid_argument("stability_gap: grids differ");
        double g = sobolev_norm(theta2[i] - theta1[i], ell);
        if (z1[i].size() != z2[i].size())
            throw std::invalid_argument("stability_gap: vortex counts differ");
        for (size_t k = 0; k < z1[i].size(); ++k) g += (z2[i][k] - z1[i][k]).norm();
        rep.gap.push_back(g);
    }
    rep.identically_zero = true;
    for (double g : rep.gap)
        if (g != 0.0) rep.identically_zero = false;
    if (!rep.identically_zero && rep.gap.front() > 0.0) {
        std::vector<double> ts, ln_gap;
        for (size_t i = 0; i < m; ++i) {
            if (rep.gap[i] <= 0.0) continue;
            ts.push_back(times[i]);
            ln_gap.push_back(std::log(rep.gap[i]));
        }
        if (ts.size() >= 2) {
            LineFit fit = fit_line(ts, ln_gap);
            rep.fitted_rate = fit.slope;
            rep.fit_r_squared = fit.r_squared;
        }
    }
    return rep;
}

/// Relative residual of the commutator identity
///   int theta (K_s*theta).grad phi
///     = 1/2 int (K_s*theta).[grad phi, (-D)^s](-D)^{-s} theta
/// (the operator order follows from summing the two integration-by-parts
/// routes; expanding, the bracket applied to (-D)^{-s} theta reads
/// grad phi theta - (-D)^s(grad phi (-D)^{-s} theta)).
/// All products are computed pseudo-spectrally; inputs must be dealias-safe
/// (band-limited with headroom) for the two routes to agree to round-off.
inline double commutator_residual(const SpectralField& theta, const SpectralField& phi,
                                  double s) {
    if (std::abs(theta.mean_mode()) > 1e-13 * (1.0 + theta.max_coeff_abs()))
        throw std::invalid_argument("commutator_residual: theta must have zero mean");
    VectorField v = biot_savart(theta, s);
    PhysicalField vx = to_physical(v.x), vy = to_physical(v.y);
    PhysicalField tp = to_physical(theta);
    PhysicalField gx = to_physical(derivative_x(phi));
    PhysicalField gy = to_physical(derivative_y(phi));

    // LHS: quadrature of theta v . grad phi
    double lhs = 0.0;
    for (size_t i = 0; i < tp.values.size(); ++i)
        lhs += tp.values[i] * (vx.values[i] * gx.values[i] + vy.values[i] * gy.values[i]);
    lhs *= tp.grid.spacing() * tp.grid.spacing();

    // RHS: 1/2 int v . [ grad phi theta - (-D)^s (grad phi (-D)^{-s} theta) ]
    PhysicalField w = to_physical(fractional_laplacian(theta, -s));
    PhysicalField ax(tp.grid), ay(tp.grid);
    for (size_t i = 0; i < w.values.size(); ++i) {
        ax.values[i] = gx.values[i] * w.values[i];
        ay.values[i] = gy.values[i] * w.values[i];
    }
    PhysicalField bx = to_physical(fractional_laplacian(from_physical(ax), s));
    PhysicalField by = to_physical(fractional_laplacian(from_physical(ay), s));
    double rhs = 0.0;
    for (size_t i = 0; i < bx.values.size(); ++i) {
        double cx = gx.values[i] * tp.values[i] - bx.values[i];
        double cy = gy.values[i] * tp.values[i] - by.values[i];
        rhs += vx.values[i] * cx + vy.values[i] * cy;
    }
    rhs *= 0.5 * tp.grid.spacing() * tp.grid.spacing();

    return std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
}

struct CollapseBoundMargin {
    double velocity_magnitude = 0.0;
    double bound = 0.0; // c_s ||theta||_L1 / R^{3-2s} + tol
    double margin = 0.0;
};

/// Pointwise audit of |v(z_i)| <= c_s ||theta||_{L1} / R_i^{3-2s} + tol.
inline CollapseBoundMargin collapse_velocity_bound_audit(const SpectralField& theta,
                                                         const VectorField& v, Vec2 z, double R,
                                                         double s, double tol = 1e-8) {
    if (!(R > 0.0)) throw std::invalid_argument("collapse_velocity_bound_audit: R must be > 0");
    CollapseBoundMargin out;
    out.velocity_magnitude = evaluate_at(v, z).norm();
    double l1 = lp_norm(theta, 1.0);
    out.bound = c_s_constant(s) * l1 * std::pow(R, 2.0 * s - 3.0) + tol;
    out.margin = out.bound - out.velocity_magnitude;
    return out;
}

} // namespace vw
