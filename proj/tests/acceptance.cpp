// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exit code = number of failed criteria.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "vw/checks.hpp"
#include "vw/config.hpp"
#include "vw/runner.hpp"

using namespace vw;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SpectralField random_band_field(const GridSpec& g, int kmax, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SpectralField f(g);
    for (int ky = -kmax; ky <= kmax; ++ky)
        for (int kx = 0; kx <= kmax; ++kx) {
            if (kx == 0 && ky <= 0) continue;
            f.set_mode(kx, ky, {u(rng), u(rng)});
        }
    return f;
}

std::string fmt(double v) { return format_double(v); }

// --- criterion 1: kernel exactness -----------------------------------------
Criterion kernel_exactness() {
    KernelParams p(0.7, 0.31);
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    int outside_checked = 0;
    for (int i = 0; i < 10000; ++i) {
        Vec2 x{u(rng), u(rng)};
        double r = x.norm();
        if (r == 0.0) continue;
        Vec2 ke = eval_K_s_eps(x, p);
        Vec2 kn = eval_K_s_eps(-x, p);
        if (ke.x != -kn.x || ke.y != -kn.y)
            return {false, "oddness violated at " + fmt(x.x) + "," + fmt(x.y)};
        if (ke.norm() > kernel_bound(r, p) * (1.0 + 1e-14))
            return {false, "domination violated at |x| = " + fmt(r)};
        if (r >= p.eps) {
            Vec2 k = eval_K_s(x, p);
            if (ke.x != k.x || ke.y != k.y)
                return {false, "not bit-exact outside eps at |x| = " + fmt(r)};
            ++outside_checked;
        }
    }
    return {true, "bit-exact outside eps (" + std::to_string(outside_checked) +
                      " pts), dominated and odd at 10^4 points"};
}

// --- criterion 2: kernel constant -------------------------------------------
Criterion kernel_constant() {
    double worst = 0.0;
    for (double s = 0.1; s < 0.95; s += 0.1) {
        double independent = (1.0 - s) * std::tgamma(1.0 - s) /
                             (std::pow(2.0, 2.0 * s - 1.0) * pi * std::tgamma(s));
        worst = std::max(worst, std::abs(c_s_constant(s) - independent) / independent);
    }
    bool gamma_ok = worst < 1e-12;
    double limit_gap = std::abs(c_s_constant(0.999) - 1.0 / two_pi);
    bool limit_ok = limit_gap < 1e-6;
    std::string detail = "gamma agreement worst rel " + fmt(worst) + "; |c(0.999) - 1/2pi| = " +
                         fmt(limit_gap) +
                         " (formula slope dc/ds ~ -0.035 near s=1, so the gap at "
                         "s=0.999 is ~3.5e-5 by calculus)";
    return {gamma_ok && limit_ok, detail};
}

// --- criterion 3: two-vortex oracle -----------------------------------------
Criterion two_vortex_oracle() {
    auto t0 = std::chrono::steady_clock::now();
    double d = 1.0, a = 1.0, s = 0.75;
    double cs = c_s_constant(s);
    // co-rotating pair, analytic period T = 2 pi d^{4-2s} / (2 c_s a)
    double T = two_pi * std::pow(d, 4.0 - 2.0 * s) / (2.0 * cs * a);
    VortexEnsemble pair({{d / 2, 0.0}, {-d / 2, 0.0}}, {a, a});
    VortexEnsemble state = pair;
    int steps = 2000;
    for (int i = 0; i < steps; ++i) state = step_rk4(state, s, T / steps);
    double period_err = std::max((state.positions[0] - pair.positions[0]).norm(),
                                 (state.positions[1] - pair.positions[1]).norm());

    // opposite-sign pair translates at speed c_s a / d^{3-2s}
    VortexEnsemble dipole({{d / 2, 0.0}, {-d / 2, 0.0}}, {a, -a});
    double t_tr = 0.5;
    VortexEnsemble moved = dipole;
    int steps2 = 1000;
    for (int i = 0; i < steps2; ++i) moved = step_rk4(moved, s, t_tr / steps2);
    double speed = cs * a / std::pow(d, 3.0 - 2.0 * s);
    Vec2 expected_shift{0.0, -speed * t_tr};
    double translate_err =
        std::max((moved.positions[0] - dipole.positions[0] - expected_shift).norm(),
                 (moved.positions[1] - dipole.positions[1] - expected_shift).norm()) /
        (speed * t_tr);
    double elapsed = seconds_since(t0);
    bool pass = period_err < 1e-8 * d && translate_err < 1e-8 && elapsed < 1.0;
    return {pass, "period return err " + fmt(period_err) + ", translation rel err " +
                      fmt(translate_err) + ", runtime " + fmt(elapsed) + " s"};
}

// --- criterion 4: vortex conservation ---------------------------------------
Criterion vortex_conservation() {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    std::vector<Vec2> z;
    std::vector<double> a;
    for (int i = 0; i < 5; ++i) {
        z.push_back({u(rng), u(rng)});
        a.push_back(0.5 + 0.2 * i);
    }
    VortexTrajectory traj =
        integrate_vortices(VortexEnsemble(z, a), 0.75, 1.0, 0.01, VortexMethod::rk45, 1e-10);
    DriftReport rep = conservation_audit(traj);
    bool pass = rep.hamiltonian_drift < 1e-7 && rep.moment_drift < 1e-7;
    return {pass, "H drift " + fmt(rep.hamiltonian_drift) + ", I drift " +
                      fmt(rep.moment_drift) + " over t in [0,1]"};
}

// --- criterion 5: theta conservation ----------------------------------------
Criterion theta_conservation() {
    std::ostringstream detail;
    bool pass = true;
    for (double s : {0.5, 0.75}) {
        SimConfig cfg;
        cfg.grid = GridSpec(two_pi, 256);
        cfg.s = s;
        cfg.eps = 8.0 * cfg.grid.spacing();
        cfg.t_end = 1.0;
        cfg.cfl_factor = 0.25;
        cfg.diag_every = 1000000; // endpoint records only
        cfg.tol_plateau = 1e-3;
        SpectralField theta0 = make_gaussian_blob(cfg.grid, {pi - 0.9, pi}, 0.35, 1.0);
        VortexEnsemble vortices({{pi + 1.2, pi}}, {0.3});
        PhysicalField p0 = to_physical(theta0);
        double l1_0 = lp_norm(p0, 1.0), l2_0 = lp_norm(p0, 2.0), l4_0 = lp_norm(p0, 4.0);
        double li_0 = lp_norm(p0, std::numeric_limits<double>::infinity());
        double mean0 = theta0.mean_mode().real();

        SimResult res = simulate(cfg, theta0, vortices);
        if (res.reason != StopReason::completed) {
            return {false, std::string("run terminated early: ") + to_string(res.reason)};
        }
        double t = res.final_state.time;
        PhysicalField pf = to_physical(res.final_state.theta);
        double mean_drift = std::abs(res.final_state.theta.mean_mode().real() - mean0);
        double l2_drift = std::abs(lp_norm(pf, 2.0) - l2_0) / (l2_0 * t);
        double l1_drift = std::abs(lp_norm(pf, 1.0) - l1_0) / (l1_0 * t);
        double l4_drift = std::abs(lp_norm(pf, 4.0) - l4_0) / (l4_0 * t);
        double li_drift =
            std::abs(lp_norm(pf, std::numeric_limits<double>::infinity()) - li_0) / (li_0 * t);
        bool ok = mean_drift < 1e-13 && l2_drift < 1e-6 && l1_drift < 1e-3 &&
                  l4_drift < 1e-3 && li_drift < 1e-3;
        pass = pass && ok;
        detail << "s=" << s << ": mean " << fmt(mean_drift) << ", L2/t " << fmt(l2_drift)
               << ", L1/t " << fmt(l1_drift) << ", L4/t " << fmt(l4_drift) << ", Linf/t "
               << fmt(li_drift) << "; ";
    }
    return {pass, detail.str()};
}

// --- criterion 6: commutator identity ---------------------------------------
Criterion commutator() {
    auto t0 = std::chrono::steady_clock::now();
    GridSpec g(two_pi, 128);
    double worst = 0.0;
    for (double s : {0.5, 0.6, 0.75, 0.9}) {
        SpectralField theta = random_band_field(g, 20, 600 + static_cast<int>(100 * s));
        SpectralField phi = random_band_field(g, 10, 700 + static_cast<int>(100 * s));
        worst = std::max(worst, commutator_residual(theta, phi, s));
    }
    double elapsed = seconds_since(t0);
    bool pass = worst < 1e-8 && elapsed < 10.0;
    return {pass, "worst residual " + fmt(worst) + ", runtime " + fmt(elapsed) + " s"};
}

// --- criterion 7: velocity-path equivalence ---------------------------------
Criterion velocity_path() {
    GridSpec g(two_pi, 256);
    double s = 0.75;
    SpectralField theta = make_gaussian_blob(g, {pi, pi}, 0.3, 1.0);
    double h = g.spacing();
    std::vector<double> ladder{32.0 * h, 16.0 * h, 8.0 * h, 4.0 * h};
    LadderReport rep = convergence_velocity_path(theta, s, ladder);
    bool decreasing = true;
    for (size_t i = 1; i < rep.rows.size(); ++i)
        decreasing = decreasing && rep.rows[i].error < rep.rows[i - 1].error;
    double required = (2.0 * s - 1.0) - 0.3;
    bool pass = decreasing && rep.fitted_slope >= required;
    return {pass, "fitted slope " + fmt(rep.fitted_slope) + " (need >= " + fmt(required) +
                      "), gaps " + fmt(rep.rows.front().error) + " -> " +
                      fmt(rep.rows.back().error)};
}

// --- criterion 8: plateau persistence ---------------------------------------
Criterion plateau_persistence() {
    auto t0 = std::chrono::steady_clock::now();
    SimConfig cfg;
    cfg.grid = GridSpec(two_pi, 256);
    cfg.s = 0.75;
    cfg.eps = 8.0 * cfg.grid.spacing();
    cfg.t_end = 0.5;
    cfg.diag_every = 2;
    cfg.tol_plateau = 1e-3;
    Vec2 center{pi, pi};
    SpectralField theta0 = make_plateau_patch(cfg.grid, center, 1.0, 0.5, 0.9);
    // off-plateau disturbance so the flow is not a pure rotation
    theta0 += make_gaussian_blob(cfg.grid, {pi + 1.9, pi}, 0.25, 0.4);
    theta0.dealias();
    VortexEnsemble vortices({center}, {0.5}, {1.0});

    SimResult res = simulate(cfg, theta0, vortices);
    if (res.reason != StopReason::completed)
        return {false, std::string("run terminated early: ") + to_string(res.reason)};

    std::vector<double> times, radius, gradv, blowup;
    for (const auto& rec : res.records) {
        times.push_back(rec.t);
        radius.push_back(rec.plateau_r[0]);
        gradv.push_back(rec.grad_v_sup);
        blowup.push_back(rec.blowup_n[0]);
    }
    double r0 = radius.front();
    AuditSeries exp_audit = radius_lower_bound_audit(times, radius, gradv);
    AuditSeries osgood = osgood_lower_bound_audit(times, radius, blowup);
    double tol = 1e-3 * r0;
    double elapsed = seconds_since(t0);
    bool pass = exp_audit.worst_margin >= -tol && osgood.worst_margin >= -tol &&
                elapsed < 600.0;
    return {pass, "R(0) " + fmt(r0) + ", exp-bound margin " + fmt(exp_audit.worst_margin) +
                      ", osgood margin " + fmt(osgood.worst_margin) + " (tol -" + fmt(tol) +
                      "), samples " + std::to_string(times.size()) + ", runtime " +
                      fmt(elapsed) + " s"};
}

// --- criterion 9: blow-up functional ----------------------------------------
Criterion blowup_closed_forms() {
    Vec2 z{0.2, -0.1};
    double R = 0.35, lambda = 2.3;
    double n_const =
        blowup_functional_fn([](Vec2) { return Vec2{0.4, 0.7}; }, z, R);
    double n_rot = blowup_functional_fn([&](Vec2 x) { return 1.6 * (x - z).perp(); }, z, R);
    double n_contr = blowup_functional_fn([&](Vec2 x) { return -lambda * (x - z); }, z, R);
    double expect = lambda / (1.0 - std::log(R));
    double worst =
        std::max({std::abs(n_const), std::abs(n_rot), std::abs(n_contr - expect)});
    bool closed = worst < 1e-10;

    GridSpec g(two_pi, 64);
    bool dominated = true;
    for (int trial = 0; trial < 100; ++trial) {
        SpectralField f = random_band_field(g, 10, 900 + trial);
        VectorField v = biot_savart(f, 0.6 + 0.003 * trial);
        LogLipschitzReport rep = log_lipschitz_bound_check(
            v, {pi + 0.01 * trial, pi - 0.007 * trial}, 0.25 + 0.002 * trial, 1000, trial);
        dominated = dominated && rep.dominated;
    }
    return {closed && dominated, "closed-form worst err " + fmt(worst) +
                                     (dominated ? ", domination holds on 100 random fields"
                                                : ", DOMINATION VIOLATED")};
}

// --- criterion 10: stability ------------------------------------------------
Criterion stability() {
    SimConfig cfg;
    cfg.grid = GridSpec(two_pi, 128);
    cfg.s = 0.75;
    cfg.eps = 4.0 * cfg.grid.spacing();
    cfg.t_end = 0.5;
    cfg.dt_policy = DtPolicy::fixed;
    cfg.dt = 0.01;
    cfg.diag_every = 2;
    cfg.tol_plateau = 1e-3;
    SpectralField theta0 = make_gaussian_blob(cfg.grid, {pi - 0.9, pi}, 0.4, 2.0);
    VortexEnsemble vortices({{pi + 1.1, pi}}, {0.8});

    // identical inputs: gap must be identically zero, bit-exactly
    struct Sampled {
        std::vector<double> times;
        std::vector<SpectralField> thetas;
        std::vector<std::vector<Vec2>> zs;
    };
    auto run_one = [&](const SpectralField& th0) {
        Sampled sdat;
        simulate(cfg, th0, vortices, [&](const CoupledState& st, const DiagnosticsRecord&) {
            sdat.times.push_back(st.time);
            sdat.thetas.push_back(st.theta);
            sdat.zs.push_back(st.vortices.positions);
        });
        return sdat;
    };
    Sampled a = run_one(theta0);
    Sampled b = run_one(theta0);
    StabilityGapReport zero_gap = stability_gap(a.times, a.thetas, b.thetas, a.zs, b.zs, 2.0);
    if (!zero_gap.identically_zero)
        return {false, "identical-input pair gap not identically zero"};

    SpectralField pert = make_gaussian_blob(cfg.grid, {pi - 0.2, pi + 0.8}, 0.3, 1e-6);
    StabilityRunReport rep = stability_study(cfg, theta0, vortices, pert, 2.0);
    bool finite_rate = std::isfinite(rep.gap_hl.fitted_rate);
    bool fit_ok = rep.gap_hl.fit_r_squared >= 0.9;
    bool linear = std::abs(rep.linearity_ratio - 2.0) <= 0.2;
    bool l2_ok = std::isfinite(rep.gap_l2.fitted_rate) && rep.gap_l2.fit_r_squared >= 0.9;
    bool pass = finite_rate && fit_ok && linear && l2_ok;
    return {pass, "identical pair gap == 0; H2 rate " + fmt(rep.gap_hl.fitted_rate) +
                      " (R^2 " + fmt(rep.gap_hl.fit_r_squared) + "), L2 rate " +
                      fmt(rep.gap_l2.fitted_rate) + " (R^2 " + fmt(rep.gap_l2.fit_r_squared) +
                      "), half-perturbation ratio " + fmt(rep.linearity_ratio)};
}

// --- criterion 11: spectral infrastructure ----------------------------------
Criterion spectral_infrastructure() {
    GridSpec g(two_pi, 64);
    double lp_worst = 0.0, div_worst = 0.0, bern_worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        SpectralField f = random_band_field(g, 28, 1100 + trial);
        if (trial < 10) {
            lp_worst = std::max(
                lp_worst, (dyadic_decompose(f).reconstruct() - f).max_coeff_abs());
            div_worst = std::max(div_worst, divergence_residual(biot_savart(f, 0.75)));
        }
        for (int j = 0; j <= 4; ++j) {
            BernsteinReport rep =
                bernstein_check(f, j, 2.0, std::numeric_limits<double>::infinity());
            if (!rep.empty_block) bern_worst = std::max(bern_worst, rep.ratio);
        }
    }
    // j-stability: exact dilation invariance of the raw quotient
    GridSpec fine(two_pi, 256);
    SpectralField base = random_band_field(fine, 3, 1500);
    SpectralField shifted(fine);
    for (int ky = -3; ky <= 3; ++ky)
        for (int kx = 0; kx <= 3; ++kx) {
            if (kx == 0 && ky <= 0) continue;
            shifted.set_mode(4 * kx, 4 * ky, base.coeff(kx, ky));
        }
    double inf = std::numeric_limits<double>::infinity();
    auto raw_q = [&](const SpectralField& f, int j) {
        SpectralField blk = dyadic_block(f, j);
        return lp_norm(blk, inf) / lp_norm(blk, 2.0);
    };
    double jshift_dev = std::abs(raw_q(shifted, 3) / raw_q(base, 1) - 1.0);

    bool pass = lp_worst < 1e-12 && div_worst < 1e-14 && bern_worst < 0.6 &&
                jshift_dev < 5e-3;
    return {pass, "LP reconstruction " + fmt(lp_worst) + ", div residual " + fmt(div_worst) +
                      ", Bernstein constant " + fmt(bern_worst) +
                      " (<0.6 recorded), j-shift quotient dev " + fmt(jshift_dev)};
}

// --- criterion 12: determinism ----------------------------------------------
Criterion determinism() {
    json cfg_json = json::parse(R"({
      "grid": {"L": 6.283185307179586, "n": 128},
      "sim": {"s": 0.75, "eps": 0.2, "t_end": 0.1, "diag_every": 3, "tol_plateau": 1e-3},
      "theta0": [{"type": "gaussian-blob", "center": [2.3, 3.14159], "width": 0.35,
                  "amplitude": 1.0}],
      "vortices": [{"position": [4.3, 3.14159], "intensity": 0.4}]
    })");
    ParsedRun run = parse_config_json(cfg_json);
    fs::path base = fs::temp_directory_path() / "vwsim_acceptance";
    fs::remove_all(base);
    fs::path d1 = base / "a", d2 = base / "b";
    run_simulate(run, d1, 42);
    run_simulate(run, d2, 42);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    std::string csv1 = slurp(d1 / "diagnostics.csv");
    std::string csv2 = slurp(d2 / "diagnostics.csv");
    bool pass = !csv1.empty() && csv1 == csv2;
    return {pass, pass ? "diagnostics CSVs byte-identical across two runs (" +
                             std::to_string(csv1.size()) + " bytes)"
                       : "CSVs differ"};
}

} // namespace

int main() {
    struct Entry {
        const char* name;
        Criterion (*fn)();
    };
    const Entry entries[] = {
        {"1 kernel-exactness", kernel_exactness},
        {"2 kernel-constant", kernel_constant},
        {"3 two-vortex-oracle", two_vortex_oracle},
        {"4 vortex-conservation", vortex_conservation},
        {"5 theta-conservation", theta_conservation},
        {"6 commutator-identity", commutator},
        {"7 velocity-path-equivalence", velocity_path},
        {"8 plateau-persistence", plateau_persistence},
        {"9 blowup-functional", blowup_closed_forms},
        {"10 stability", stability},
        {"11 spectral-infrastructure", spectral_infrastructure},
        {"12 determinism", determinism},
    };
    int failures = 0;
    for (const Entry& e : entries) {
        auto t0 = std::chrono::steady_clock::now();
        Criterion c;
        try {
            c = e.fn();
        } catch (const std::exception& ex) {
            c = {false, std::string("exception: ") + ex.what()};
        }
        double dt = seconds_since(t0);
        std::printf("[%s] criterion %-28s (%.1fs) %s\n", c.pass ? "PASS" : "FAIL", e.name,
                    dt, c.detail.c_str());
        std::fflush(stdout);
        if (!c.pass) ++failures;
    }
    std::printf("%d/12 criteria passed\n", 12 - failures);
    return failures;
}
