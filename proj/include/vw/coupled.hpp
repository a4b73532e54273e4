#pragma once

#include <functional>
#include <string>

#include "vw/diagnostics.hpp"
#include "vw/kernels.hpp"
#include "vw/littlewood_paley.hpp"
#include "vw/pointvortex.hpp"

namespace vw {

enum class VelocityPath { multiplier, convolution };
enum class VortexVelocityMode { dirac, mollifier };
enum class DtPolicy { fixed, cfl };

struct SimConfig {
    double s = 0.75;
    double eps = 0.1; // kernel regularization length
    double galerkin_N = std::numeric_limits<double>::infinity(); // inf = grid Nyquist
    GridSpec grid{two_pi, 128};
    DtPolicy dt_policy = DtPolicy::cfl;
    double dt = 1e-2;         // fixed-dt policy
    double cfl_factor = 0.5;  // cfl policy
    double dt_max = 0.05;     // cap in cfl mode (zero-velocity states)
    double t_end = 1.0;
    VelocityPath velocity_path = VelocityPath::multiplier;
    VortexVelocityMode vortex_mode = VortexVelocityMode::dirac;
    double delta_q = 0.0; // mollifier width (mollifier mode)
    int diag_every = 10;
    double tol_plateau = 0.0; // 0: resolved to 1e-6 ||theta0||_inf at start
    double tol_ode = 1e-10;

    void validate() const {
        grid.validate();
        if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("SimConfig: s must lie in (0,1)");
        if (!(eps >= 2.0 * grid.spacing()))
            throw std::invalid_argument("SimConfig: kernel unresolvable, need eps >= 2h");
        if (vortex_mode == VortexVelocityMode::mollifier && !(delta_q >= grid.spacing()))
            throw std::invalid_argument("SimConfig: mollifier width must be >= h");
        if (dt_policy == DtPolicy::fixed && !(dt > 0.0))
            throw std::invalid_argument("SimConfig: fixed dt must be positive");
        if (!(t_end > 0.0)) throw std::invalid_argument("SimConfig: t_end must be positive");
        if (diag_every < 1) throw std::invalid_argument("SimConfig: diag_every must be >= 1");
    }
};

struct CoupledState {
    double time = 0.0;
    SpectralField theta;
    VortexEnsemble vortices;
};

enum class StopReason { completed, plateau_collapse, vortex_collapse, cfl_collapse, nan_detected };

inline const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::completed: return "completed";
        case StopReason::plateau_collapse: return "plateau-collapse";
        case StopReason::vortex_collapse: return "vortex-collapse";
        case StopReason::cfl_collapse: return "cfl-collapse";
        case StopReason::nan_detected: return "nan";
    }
    return "unknown";
}

/// Regularized initial datum: low-pass at 2^{j_eps} with
/// j_eps = ceil(log2(1/eps)), then a physical-space cutoff at scale
/// min(1/eps, L/4) centered in the domain, then dealias.
inline SpectralField regularize_initial_datum(const SpectralField& theta0, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("regularize_initial_datum: eps must be > 0");
    const GridSpec& g = theta0.grid();
    int j_eps = static_cast<int>(std::ceil(std::log2(1.0 / eps)));
    SpectralField low = low_pass(theta0, j_eps);
    double scale = std::min(1.0 / eps, 0.25 * g.side_length);
    Vec2 center{0.5 * g.side_length, 0.5 * g.side_length};
    PhysicalField p = to_physical(low);
    for (int iy = 0; iy < g.resolution; ++iy)
        for (int ix = 0; ix < g.resolution; ++ix) {
            Vec2 d = wrap_delta(g.point(ix, iy) - center, g.side_length);
            p.at(ix, iy) *= transition_profile(d.norm() / scale);
        }
    SpectralField out = from_physical(p);
    out.dealias();
    return out;
}

namespace detail {

inline SpectralField apply_galerkin(const SpectralField& f, double N) {
    if (std::isinf(N)) return f;
    return spectral_cutoff(f, N);
}

} // namespace detail

/// Smooth velocity field v of the current state: the exact multiplier
/// applied to E_N theta, or the K_{s,eps} convolution, per config.
inline VectorField smooth_velocity(const CoupledState& state, const SimConfig& cfg) {
    SpectralField theta_n = detail::apply_galerkin(state.theta, cfg.galerkin_N);
    if (cfg.velocity_path == VelocityPath::multiplier)
        return biot_savart(theta_n, cfg.s);
    return convolve_kernel(theta_n, KernelParams(cfg.s, cfg.eps));
}

/// Total advecting field u = v + sum_i a_i H_i. The vortex fields are
/// rasterized from K_{s,eps}, band-limited to the dealias cutoff and
/// Leray-projected so the discrete field is exactly divergence-free (the
/// continuum H_i is; the projection removes only the sampling residue).
inline VectorField advecting_field(const CoupledState& state, const SimConfig& cfg,
                                   const VectorField& v) {
    const GridSpec& g = state.theta.grid();
    KernelParams params(cfg.s, cfg.eps);
    PhysicalField hx(g), hy(g);
    bool any = false;
    for (size_t i = 0; i < state.vortices.count(); ++i) {
        double a = state.vortices.intensities[i];
        Vec2 z = state.vortices.positions[i];
        const int n = g.resolution;
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                Vec2 d = wrap_delta(g.point(ix, iy) - z, g.side_length);
                Vec2 k = eval_K_s_eps(d, params);
                hx.at(ix, iy) += a * k.x;
                hy.at(ix, iy) += a * k.y;
            }
        any = true;
    }
    VectorField u = v;
    if (any) {
        VectorField h(g);
        h.x = from_physical(hx);
        h.y = from_physical(hy);
        h.x.dealias();
        h.y.dealias();
        h = leray_project(h);
        u += h;
    }
    u.x.dealias();
    u.y.dealias();
    return u;
}

/// Velocity moving each vortex: the smooth field at z_i (exact Fourier
/// summation in dirac mode, chi-mollified grid average in mollifier mode)
/// plus the pairwise point-vortex terms.
inline std::vector<Vec2> vortex_velocity(const CoupledState& state, const SimConfig& cfg,
                                         const VectorField& v) {
    std::vector<Vec2> vel(state.vortices.count(), Vec2{0.0, 0.0});
    if (cfg.vortex_mode == VortexVelocityMode::dirac) {
        std::vector<Vec2> pts = state.vortices.positions;
        vel = evaluate_many(v, pts);
    } else {
        const GridSpec& g = state.theta.grid();
        PhysicalField vx = to_physical(v.x), vy = to_physical(v.y);
        const int n = g.resolution;
        for (size_t i = 0; i < state.vortices.count(); ++i) {
            Vec2 z = state.vortices.positions[i];
            double wsum = 0.0;
            Vec2 acc{0.0, 0.0};
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    Vec2 d = wrap_delta(g.point(ix, iy) - z, g.side_length);
                    double w = transition_profile(d.norm() / cfg.delta_q);
                    if (w == 0.0) continue;
                    wsum += w;
                    acc += w * Vec2{vx.at(ix, iy), vy.at(ix, iy)};
                }
            // renormalized so the discrete integral of chi is one
            vel[i] = (1.0 / wsum) * acc;
        }
    }
    if (state.vortices.count() > 1) {
        std::vector<Vec2> pair_terms = vortex_rhs(state.vortices, cfg.s);
        for (size_t i = 0; i < vel.size(); ++i) vel[i] += pair_terms[i];
    }
    return vel;
}

struct CoupledRhs {
    SpectralField dtheta;
    std::vector<Vec2> dz;
};

/// True while every vortex stays at least L/8 clear of the wrap seam
/// (inside the centered box of half-width 3L/8).
inline bool vortices_in_safe_region(const CoupledState& state) {
    const double L = state.theta.grid().side_length;
    Vec2 center{0.5 * L, 0.5 * L};
    for (Vec2 z : state.vortices.positions) {
        Vec2 d = wrap_delta(z - center, L);
        if (std::abs(d.x) > 3.0 * L / 8.0 || std::abs(d.y) > 3.0 * L / 8.0) return false;
    }
    return true;
}

/// Right-hand side of the coupled system:
///   dtheta/dt = -E_N div((v + sum a_i H_i) theta), products in physical
///   space, divergence and cutoffs in spectral space, dealiased;
///   dz_i/dt per vortex_velocity.
inline CoupledRhs coupled_rhs(const CoupledState& state, const SimConfig& cfg) {
    if (!vortices_in_safe_region(state))
        throw std::runtime_error("coupled_rhs: vortex within L/8 of wraparound influence");
    VectorField v = smooth_velocity(state, cfg);
    VectorField u = advecting_field(state, cfg, v);

    PhysicalField tp = to_physical(state.theta);
    PhysicalField ux = to_physical(u.x), uy = to_physical(u.y);
    PhysicalField fx(tp.grid), fy(tp.grid);
    for (size_t i = 0; i < tp.values.size(); ++i) {
        fx.values[i] = ux.values[i] * tp.values[i];
        fy.values[i] = uy.values[i] * tp.values[i];
    }
    VectorField flux(state.theta.grid());
    flux.x = from_physical(fx);
    flux.y = from_physical(fy);
    SpectralField div = divergence(flux);
    div.dealias();
    div = detail::apply_galerkin(div, cfg.galerkin_N);
    div *= -1.0;

    CoupledRhs rhs;
    rhs.dtheta = std::move(div);
    rhs.dz = vortex_velocity(state, cfg, v);
    return rhs;
}

/// Max pointwise speed of the advecting field, for the CFL control.
inline double max_speed(const CoupledState& state, const SimConfig& cfg) {
    VectorField v = smooth_velocity(state, cfg);
    VectorField u = advecting_field(state, cfg, v);
    PhysicalField ux = to_physical(u.x), uy = to_physical(u.y);
    double m = 0.0;
    for (size_t i = 0; i < ux.values.size(); ++i)
        m = std::max(m, std::hypot(ux.values[i], uy.values[i]));
    return m;
}

/// One RK4 step of the joint state (theta coefficients and vortex positions
/// advanced with the same tableau); theta is dealiased after every stage.
inline CoupledState advance(const CoupledState& state, const SimConfig& cfg, double dt) {
    auto shift = [&](const CoupledState& base, const CoupledRhs& k, double h) {
        CoupledState out = base;
        SpectralField dth = k.dtheta;
        dth *= h;
        out.theta += dth;
        out.theta.dealias();
        for (size_t i = 0; i < out.vortices.count(); ++i)
            out.vortices.positions[i] += h * k.dz[i];
        return out;
    };
    CoupledRhs k1 = coupled_rhs(state, cfg);
    CoupledState s2 = shift(state, k1, 0.5 * dt);
    CoupledRhs k2 = coupled_rhs(s2, cfg);
    CoupledState s3 = shift(state, k2, 0.5 * dt);
    CoupledRhs k3 = coupled_rhs(s3, cfg);
    CoupledState s4 = shift(state, k3, dt);
    CoupledRhs k4 = coupled_rhs(s4, cfg);

    CoupledState out = state;
    out.time = state.time + dt;
    SpectralField dtheta = k1.dtheta;
    dtheta += k4.dtheta;
    SpectralField mid = k2.dtheta;
    mid += k3.dtheta;
    mid *= 2.0;
    dtheta += mid;
    dtheta *= dt / 6.0;
    out.theta += dtheta;
    out.theta.dealias();
    for (size_t i = 0; i < out.vortices.count(); ++i)
        out.vortices.positions[i] +=
            (dt / 6.0) * (k1.dz[i] + 2.0 * k2.dz[i] + 2.0 * k3.dz[i] + k4.dz[i]);
    return out;
}

/// Builds the full diagnostics record for a state. v is recomputed from the
/// state so samplers can run on copies.
inline DiagnosticsRecord sample_diagnostics(const CoupledState& state, const SimConfig& cfg,
                                            double tol_plateau) {
    DiagnosticsRecord rec;
    rec.t = state.time;
    PhysicalField tp = to_physical(state.theta);
    rec.lp1 = lp_norm(tp, 1.0);
    rec.lp2 = lp_norm(tp, 2.0);
    rec.lp4 = lp_norm(tp, 4.0);
    rec.lp_inf = lp_norm(tp, std::numeric_limits<double>::infinity());
    rec.h1 = sobolev_norm(state.theta, 1.0);
    rec.h2 = sobolev_norm(state.theta, 2.0);
    rec.h3 = sobolev_norm(state.theta, 3.0);
    rec.h4 = sobolev_norm(state.theta, 4.0);
    rec.h_frac = sobolev_norm(state.theta, 3.0 - 2.0 * cfg.s);

    VectorField v = smooth_velocity(state, cfg);
    rec.grad_v_sup = grad_sup_norm(v);
    std::vector<Vec2> vz = evaluate_many(v, state.vortices.positions);
    double min_r = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < state.vortices.count(); ++i) {
        double r = plateau_radius(state.theta, state.vortices.positions[i],
                                  state.vortices.plateau_values[i], tol_plateau);
        rec.plateau_r.push_back(r);
        min_r = std::min(min_r, r);
        rec.v_at_vortex.push_back(vz[i].norm());
        double denom_ok = r > 0.0 && 1.0 - std::log(r) > 0.0;
        rec.blowup_n.push_back(denom_ok ? blowup_functional(v, state.vortices.positions[i], r)
                                        : std::numeric_limits<double>::quiet_NaN());
    }
    rec.energy = rec.h4 * rec.h4 + (min_r > 0.0 ? 1.0 / min_r
                                                : std::numeric_limits<double>::infinity());
    rec.hamiltonian = state.vortices.count() > 1 ? hamiltonian(state.vortices, cfg.s) : 0.0;
    rec.moment = moment_of_inertia(state.vortices);
    rec.min_dist = min_pairwise_distance(state.vortices);
    rec.positions = state.vortices.positions;
    return rec;
}

struct SimResult {
    StopReason reason = StopReason::completed;
    CoupledState final_state;
    std::vector<DiagnosticsRecord> records;
    double tol_plateau = 0.0;
    std::string detail;
};

/// Full simulation driver. Samples diagnostics every diag_every steps (and
/// at t = 0 and the final state); stops early with a structured reason on
/// blow-up triggers. The optional on_sample callback also receives every
/// sampled state (stability pairs, snapshot writers).
inline SimResult simulate(
    const SimConfig& cfg, const SpectralField& theta0, const VortexEnsemble& vortices0,
    const std::function<void(const CoupledState&, const DiagnosticsRecord&)>& on_sample = {}) {
    cfg.validate();
    if (theta0.grid() != cfg.grid)
        throw std::invalid_argument("simulate: theta0 grid does not match config");

    SimResult result;
    CoupledState state{0.0, theta0, vortices0};
    state.theta.dealias();

    double tol_plateau = cfg.tol_plateau;
    if (tol_plateau <= 0.0) {
        double sup = lp_norm(state.theta, std::numeric_limits<double>::infinity());
        tol_plateau = 1e-6 * (sup > 0.0 ? sup : 1.0);
    }
    result.tol_plateau = tol_plateau;

    const double h = cfg.grid.spacing();
    const double d_min = 1e-6 * (vortices0.count() > 1
                                     ? min_pairwise_distance(vortices0)
                                     : cfg.grid.side_length);

    auto sample = [&](const CoupledState& st) {
        DiagnosticsRecord rec = sample_diagnostics(st, cfg, tol_plateau);
        result.records.push_back(rec);
        if (on_sample) on_sample(st, rec);
        return rec;
    };

    DiagnosticsRecord rec0 = sample(state);
    for (double r : rec0.plateau_r) {
        if (r < 2.0 * h) {
            result.reason = StopReason::plateau_collapse;
            result.detail = "initial plateau below 2h";
            result.final_state = std::move(state);
            return result;
        }
    }

    long step_index = 0;
    while (state.time < cfg.t_end * (1.0 - 1e-12)) {
        double umax = max_speed(state, cfg);
        double dt;
        if (cfg.dt_policy == DtPolicy::fixed) {
            dt = std::min(cfg.dt, cfg.t_end - state.time);
            if (umax > 0.0 && dt > cfg.cfl_factor * h / umax)
                throw std::runtime_error("simulate: fixed dt violates the CFL bound");
        } else {
            dt = umax > 0.0 ? cfg.cfl_factor * h / umax : cfg.dt_max;
            dt = std::min({dt, cfg.dt_max, cfg.t_end - state.time});
            if (dt < 1e-12) {
                result.reason = StopReason::cfl_collapse;
                result.detail = "cfl step size collapsed";
                break;
            }
        }

        CoupledState next = advance(state, cfg, dt);
        ++step_index;

        if (next.theta.has_nan() ||
            std::any_of(next.vortices.positions.begin(), next.vortices.positions.end(),
                        [](Vec2 p) { return std::isnan(p.x) || std::isnan(p.y); })) {
            result.reason = StopReason::nan_detected;
            result.detail = "nan detected; last valid state returned";
            break; // state keeps the last valid step
        }
        if (next.vortices.count() > 1 && min_pairwise_distance(next.vortices) < d_min) {
            state = std::move(next);
            result.reason = StopReason::vortex_collapse;
            result.detail = "vortex separation below guard";
            break;
        }
        state = std::move(next);

        bool final_step = state.time >= cfg.t_end * (1.0 - 1e-12);
        if (step_index % cfg.diag_every == 0 || final_step) {
            DiagnosticsRecord rec = sample(state);
            bool plateau_gone = false;
            for (double r : rec.plateau_r) plateau_gone = plateau_gone || r < 2.0 * h;
            if (plateau_gone && !final_step) {
                result.reason = StopReason::plateau_collapse;
                result.detail = "plateau radius below 2h";
                break;
            }
        }
    }

    result.final_state = std::move(state);
    return result;
}

} // namespace vw
