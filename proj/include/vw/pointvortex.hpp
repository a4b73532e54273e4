#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "vw/kernels.hpp"

namespace vw {

/// Positions, intensities and plateau reference values of the point vortices.
struct VortexEnsemble {
    std::vector<Vec2> positions;
    std::vector<double> intensities;
    std::vector<double> plateau_values;

    VortexEnsemble() = default;
    VortexEnsemble(std::vector<Vec2> z, std::vector<double> a, std::vector<double> beta = {})
        : positions(std::move(z)), intensities(std::move(a)), plateau_values(std::move(beta)) {
        if (positions.empty() || positions.size() != intensities.size())
            throw std::invalid_argument("VortexEnsemble: need matching non-empty z and a");
        if (plateau_values.empty()) plateau_values.assign(positions.size(), 0.0);
        if (plateau_values.size() != positions.size())
            throw std::invalid_argument("VortexEnsemble: plateau values size mismatch");
        for (double a_i : intensities)
            if (a_i == 0.0) throw std::invalid_argument("VortexEnsemble: zero intensity");
        validate_distances();
    }

    size_t count() const { return positions.size(); }

    void validate_distances() const {
        for (size_t i = 0; i < count(); ++i)
            for (size_t j = i + 1; j < count(); ++j)
                if ((positions[i] - positions[j]).norm_sq() == 0.0)
                    throw std::invalid_argument("VortexEnsemble: coincident vortices");
    }
};

struct VortexDiagnostics {
    double hamiltonian = 0.0;
    double moment = 0.0;
    double min_distance = 0.0;
};

/// Raised when the adaptive stepper cannot proceed without violating the
/// minimum-distance guard.
class NearCollapseError : public std::runtime_error {
public:
    explicit NearCollapseError(double min_distance)
        : std::runtime_error("vortex configuration approaching collapse, min distance " +
                             std::to_string(min_distance)),
          min_distance_(min_distance) {}
    double min_distance() const { return min_distance_; }

private:
    double min_distance_;
};

/// Point-vortex velocities
///   dz_i/dt = c_s sum_{j != i} a_j (z_i - z_j)^perp / |z_i - z_j|^(4-2s).
/// No self-interaction term; a single vortex is stationary.
inline std::vector<Vec2> vortex_rhs(const VortexEnsemble& ens, double s) {
    const double cs = c_s_constant(s);
    const double expo = 2.0 * s - 4.0;
    std::vector<Vec2> vel(ens.count(), Vec2{0.0, 0.0});
    for (size_t i = 0; i < ens.count(); ++i) {
        for (size_t j = 0; j < ens.count(); ++j) {
            if (j == i) continue;
            Vec2 d = ens.positions[i] - ens.positions[j];
            double r2 = d.norm_sq();
            if (r2 == 0.0) throw std::invalid_argument("vortex_rhs: singular configuration");
            vel[i] += (cs * ens.intensities[j] * std::pow(r2, 0.5 * expo)) * d.perp();
        }
    }
    return vel;
}

/// H(t) = sum over ordered pairs i != j of a_i a_j / |z_i - z_j|^(2-2s).
/// Each unordered pair is counted twice.
inline double hamiltonian(const VortexEnsemble& ens, double s) {
    double acc = 0.0;
    for (size_t i = 0; i < ens.count(); ++i)
        for (size_t j = 0; j < ens.count(); ++j) {
            if (j == i) continue;
            double r2 = (ens.positions[i] - ens.positions[j]).norm_sq();
            if (r2 == 0.0) throw std::invalid_argument("hamiltonian: singular configuration");
            acc += ens.intensities[i] * ens.intensities[j] * std::pow(r2, s - 1.0);
        }
    return acc;
}

inline double moment_of_inertia(const VortexEnsemble& ens) {
    double acc = 0.0;
    for (size_t i = 0; i < ens.count(); ++i)
        acc += ens.intensities[i] * ens.positions[i].norm_sq();
    return acc;
}

inline double min_pairwise_distance(const VortexEnsemble& ens) {
    if (ens.count() < 2) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < ens.count(); ++i)
        for (size_t j = i + 1; j < ens.count(); ++j)
            best = std::min(best, (ens.positions[i] - ens.positions[j]).norm());
    return best;
}

inline VortexDiagnostics vortex_diagnostics(const VortexEnsemble& ens, double s) {
    return {hamiltonian(ens, s), moment_of_inertia(ens), min_pairwise_distance(ens)};
}

namespace detail {

inline VortexEnsemble shifted(const VortexEnsemble& ens, const std::vector<Vec2>& k, double h) {
    VortexEnsemble out = ens;
    for (size_t i = 0; i < out.count(); ++i) out.positions[i] += h * k[i];
    return out;
}

} // namespace detail

/// One classical RK4 step.
inline VortexEnsemble step_rk4(const VortexEnsemble& ens, double s, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_rk4: dt must be positive");
    auto k1 = vortex_rhs(ens, s);
    auto k2 = vortex_rhs(detail::shifted(ens, k1, 0.5 * dt), s);
    auto k3 = vortex_rhs(detail::shifted(ens, k2, 0.5 * dt), s);
    auto k4 = vortex_rhs(detail::shifted(ens, k3, dt), s);
    VortexEnsemble out = ens;
    for (size_t i = 0; i < out.count(); ++i)
        out.positions[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

struct AdaptiveStep {
    VortexEnsemble state;
    double dt_used = 0.0;
    double dt_next = 0.0;
};

/// One accepted Dormand-Prince 4(5) step with error control. Steps whose
/// local error exceeds tol or whose result dips below d_min are rejected
/// with a shrunken dt; more than 50 rejections raises NearCollapseError.
inline AdaptiveStep step_rk45(const VortexEnsemble& ens, double s, double dt, double tol,
                              double d_min) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_rk45: dt must be positive");
    // Dormand-Prince tableau
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const size_t n = ens.count();
    int rejections = 0;
    double step = dt;
    while (true) {
        auto k1 = vortex_rhs(ens, s);
        auto mix = [&](std::initializer_list<std::pair<const std::vector<Vec2>*, double>> terms) {
            VortexEnsemble st = ens;
            for (size_t i = 0; i < n; ++i) {
                Vec2 acc{0.0, 0.0};
                for (auto& [k, c] : terms) acc += c * (*k)[i];
                st.positions[i] += step * acc;
            }
            return st;
        };
        auto k2 = vortex_rhs(mix({{&k1, a21}}), s);
        auto k3 = vortex_rhs(mix({{&k1, a31}, {&k2, a32}}), s);
        auto k4 = vortex_rhs(mix({{&k1, a41}, {&k2, a42}, {&k3, a43}}), s);
        auto k5 = vortex_rhs(mix({{&k1, a51}, {&k2, a52}, {&k3, a53}, {&k4, a54}}), s);
        auto k6 = vortex_rhs(mix({{&k1, a61}, {&k2, a62}, {&k3, a63}, {&k4, a64}, {&k5, a65}}), s);

        VortexEnsemble next = ens;
        for (size_t i = 0; i < n; ++i)
            next.positions[i] += step * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                         b6 * k6[i]);
        auto k7 = vortex_rhs(next, s);

        double err = 0.0;
        for (size_t i = 0; i < n; ++i) {
            Vec2 e = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                             e7 * k7[i]);
            double scale = tol * (1.0 + ens.positions[i].norm());
            err = std::max(err, std::max(std::abs(e.x), std::abs(e.y)) / scale);
        }

        bool distance_ok = min_pairwise_distance(next) >= d_min;
        if (err <= 1.0 && distance_ok) {
            double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            AdaptiveStep out;
            out.state = std::move(next);
            out.dt_used = step;
            out.dt_next = step * std::clamp(grow, 0.2, 5.0);
            return out;
        }
        if (++rejections > 50)
            throw NearCollapseError(min_pairwise_distance(next));
        double shrink = distance_ok && err > 0.0
                            ? std::clamp(0.9 * std::pow(err, -0.25), 0.1, 0.9)
                            : 0.5;
        step *= shrink;
    }
}

struct VortexTrajectory {
    std::vector<double> times;
    std::vector<VortexEnsemble> states;
    double s = 0.5;
};

enum class VortexMethod { rk4, rk45 };

/// Single step with the method selected at runtime. The adaptive method may
/// use less than dt; it never exceeds it.
inline VortexEnsemble step(const VortexEnsemble& ens, double s, double dt, VortexMethod method,
                           double tol = 1e-10, double d_min = 0.0) {
    if (method == VortexMethod::rk4) return step_rk4(ens, s, dt);
    return step_rk45(ens, s, dt, tol, d_min).state;
}

/// Integrates the vortex system to t_end, recording every step. For rk4 the
/// dt is fixed (the final step is shortened to land on t_end); the adaptive
/// method uses dt as the initial try. d_min defaults to 1e-6 of the initial
/// minimum distance.
inline VortexTrajectory integrate_vortices(const VortexEnsemble& ens0, double s, double t_end,
                                           double dt, VortexMethod method = VortexMethod::rk4,
                                           double tol = 1e-10, double d_min_factor = 1e-6) {
    if (!(t_end > 0.0) || !(dt > 0.0))
        throw std::invalid_argument("integrate_vortices: t_end and dt must be positive");
    VortexTrajectory traj;
    traj.s = s;
    traj.times.push_back(0.0);
    traj.states.push_back(ens0);
    double d_min = d_min_factor * min_pairwise_distance(ens0);
    double t = 0.0;
    VortexEnsemble state = ens0;
    double dt_next = dt;
    while (t < t_end - 1e-15 * t_end) {
        if (method == VortexMethod::rk4) {
            double step = std::min(dt, t_end - t);
            state = step_rk4(state, s, step);
            t += step;
        } else {
            double step = std::min(dt_next, t_end - t);
            AdaptiveStep res = step_rk45(state, s, step, tol, d_min);
            state = std::move(res.state);
            t += res.dt_used;
            dt_next = res.dt_next;
        }
        traj.times.push_back(t);
        traj.states.push_back(state);
    }
    return traj;
}

struct DriftReport {
    double hamiltonian_drift = 0.0; // max |H(t)-H(0)| / max(|H(0)|, 1)
    double moment_drift = 0.0;
};

inline DriftReport conservation_audit(const VortexTrajectory& traj) {
    if (traj.states.size() < 2)
        throw std::invalid_argument("conservation_audit: need at least two samples");
    DriftReport rep;
    double h0 = hamiltonian(traj.states.front(), traj.s);
    double i0 = moment_of_inertia(traj.states.front());
    double hden = std::abs(h0) > 0.0 ? std::abs(h0) : 1.0;
    double iden = std::abs(i0) > 0.0 ? std::abs(i0) : 1.0;
    for (const auto& st : traj.states) {
        rep.hamiltonian_drift =
            std::max(rep.hamiltonian_drift, std::abs(hamiltonian(st, traj.s) - h0) / hden);
        rep.moment_drift =
            std::max(rep.moment_drift, std::abs(moment_of_inertia(st) - i0) / iden);
    }
    return rep;
}

} // namespace vw
