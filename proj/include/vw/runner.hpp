#pragma once

#include <chrono>
#include <filesystem>
#include <future>

#include "vw/checks.hpp"
#include "vw/config.hpp"
#include "vw/version.hpp"

namespace vw {

namespace fs = std::filesystem;

inline std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

/// Every termination path writes a manifest listing the run outputs.
inline void write_manifest(const fs::path& out_dir, const std::string& config_hash,
                           uint64_t seed, const std::vector<std::string>& outputs,
                           const std::string& termination) {
    json m;
    m["config_hash"] = config_hash;
    m["code_version"] = code_version;
    m["start_time"] = iso_timestamp();
    m["seed"] = seed;
    m["outputs"] = outputs;
    m["termination"] = termination;
    std::ofstream out(out_dir / "manifest.json", std::ios::binary);
    out << m.dump(2) << "\n";
}

/// Full simulation run: initial + final snapshots, diagnostics CSV, manifest.
inline StopReason run_simulate(const ParsedRun& run, const fs::path& out_dir, uint64_t seed) {
    fs::create_directories(out_dir);
    std::vector<std::string> outputs;

    write_snapshot((out_dir / "theta_initial").string(), to_physical(run.theta0), 0.0,
                   run.config_hash);
    outputs.push_back("theta_initial.f64");
    outputs.push_back("theta_initial.meta");

    SimResult res = simulate(run.cfg, run.theta0, run.vortices);

    write_diagnostics_csv((out_dir / "diagnostics.csv").string(), res.records,
                          run.vortices.count());
    outputs.push_back("diagnostics.csv");
    write_snapshot((out_dir / "theta_final").string(), to_physical(res.final_state.theta),
                   res.final_state.time, run.config_hash);
    outputs.push_back("theta_final.f64");
    outputs.push_back("theta_final.meta");

    write_manifest(out_dir, run.config_hash, seed, outputs, to_string(res.reason));
    return res.reason;
}

/// Pure point-vortex run (no active scalar): trajectory CSV + manifest.
inline void run_vortex_only(const ParsedRun& run, const fs::path& out_dir, uint64_t seed,
                            VortexMethod method, double dt) {
    fs::create_directories(out_dir);
    VortexTrajectory traj = integrate_vortices(run.vortices, run.cfg.s, run.cfg.t_end, dt,
                                               method, run.cfg.tol_ode);
    write_trajectory_csv((out_dir / "trajectory.csv").string(), traj);
    write_manifest(out_dir, run.config_hash, seed,
                   {"trajectory.csv"}, "completed");
}

struct LadderRow {
    double parameter = 0.0;
    double error = 0.0;
};

struct LadderReport {
    std::string study;
    std::vector<LadderRow> rows;
    double fitted_slope = 0.0;
    double extra = 0.0; // study-specific (fit R^2, linearity ratio, ...)
};

inline void write_rates_csv(const std::string& path, const LadderReport& rep) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "parameter,error,fitted_slope\n";
    for (const auto& row : rep.rows)
        out << format_double(row.parameter) << ',' << format_double(row.error) << ','
            << format_double(rep.fitted_slope) << "\n";
}

/// Kernel-difference Besov decay study.
inline LadderReport convergence_kernel_rate(const GridSpec& g, double s, double sigma,
                                            const std::vector<double>& ladder) {
    ConvergenceRate r = kernel_convergence_rate(g, s, sigma, ladder);
    LadderReport rep;
    rep.study = "kernel-rate";
    for (size_t i = 0; i < ladder.size(); ++i) rep.rows.push_back({ladder[i], r.norms[i]});
    rep.fitted_slope = r.fitted_slope;
    return rep;
}

/// Sup gap between the multiplier velocity and the K_{s,eps} convolution
/// velocity on the support of theta, along an eps ladder.
inline LadderReport convergence_velocity_path(const SpectralField& theta, double s,
                                              const std::vector<double>& ladder) {
    LadderReport rep;
    rep.study = "velocity-path";
    VectorField vm = biot_savart(theta, s);
    PhysicalField mx = to_physical(vm.x), my = to_physical(vm.y);
    PhysicalField tp = to_physical(theta);
    double support_cut = 1e-8 * tp.max_abs();
    std::vector<double> lx, ly;
    for (double eps : ladder) {
        VectorField vc = convolve_kernel(theta, KernelParams(s, eps));
        PhysicalField cx = to_physical(vc.x), cy = to_physical(vc.y);
        double worst = 0.0;
        for (size_t i = 0; i < tp.values.size(); ++i) {
            if (std::abs(tp.values[i]) <= support_cut) continue;
            worst = std::max(worst, std::hypot(mx.values[i] - cx.values[i],
                                               my.values[i] - cy.values[i]));
        }
        rep.rows.push_back({eps, worst});
        lx.push_back(std::log2(eps));
        ly.push_back(std::log2(worst));
    }
    rep.fitted_slope = fit_line(lx, ly).slope;
    return rep;
}

/// Gap between dirac-mode and mollifier-mode vortex trajectories as the
/// mollifier width shrinks toward the grid spacing. Ladder entries are
/// independent runs; threads > 1 executes them concurrently (each run is
/// bit-deterministic on its own).
inline LadderReport convergence_mollifier(const ParsedRun& run,
                                          const std::vector<double>& widths, int threads = 1) {
    LadderReport rep;
    rep.study = "mollifier";
    SimConfig dirac_cfg = run.cfg;
    dirac_cfg.vortex_mode = VortexVelocityMode::dirac;
    SimResult ref = simulate(dirac_cfg, run.theta0, run.vortices);
    auto one_width = [&](double w) {
        SimConfig cfg = run.cfg;
        cfg.vortex_mode = VortexVelocityMode::mollifier;
        cfg.delta_q = w;
        SimResult res = simulate(cfg, run.theta0, run.vortices);
        double gap = 0.0;
        size_t m = std::min(res.records.size(), ref.records.size());
        for (size_t i = 0; i < m; ++i)
            for (size_t k = 0; k < run.vortices.count(); ++k)
                gap = std::max(gap,
                               (res.records[i].positions[k] - ref.records[i].positions[k]).norm());
        return gap;
    };
    std::vector<double> gaps(widths.size());
    if (threads > 1) {
        std::vector<std::future<double>> futures;
        for (double w : widths)
            futures.push_back(std::async(std::launch::async, one_width, w));
        for (size_t i = 0; i < widths.size(); ++i) gaps[i] = futures[i].get();
    } else {
        for (size_t i = 0; i < widths.size(); ++i) gaps[i] = one_width(widths[i]);
    }
    std::vector<double> lx, ly;
    for (size_t i = 0; i < widths.size(); ++i) {
        rep.rows.push_back({widths[i], gaps[i]});
        lx.push_back(std::log2(widths[i]));
        ly.push_back(std::log2(std::max(gaps[i], 1e-300)));
    }
    rep.fitted_slope = fit_line(lx, ly).slope;
    return rep;
}

struct StabilityRunReport {
    StabilityGapReport gap_hl;   // H^ell + |dz|
    StabilityGapReport gap_l2;   // L2 + |dz|
    double linearity_ratio = 0.0; // gap(full)/gap(half) at the window end
};

/// Stability pair driver: run the base config and a perturbed copy on the
/// same fixed time grid, and fit the gap growth. A third run at half the
/// perturbation measures the linear-regime scaling.
inline StabilityRunReport stability_study(const SimConfig& base_cfg,
                                          const SpectralField& theta0,
                                          const VortexEnsemble& vortices,
                                          const SpectralField& perturbation, double ell) {
    SimConfig cfg = base_cfg;
    if (cfg.dt_policy != DtPolicy::fixed)
        throw std::invalid_argument("stability_study: needs the fixed-dt policy so the "
                                    "two runs share a time grid");
    struct Sampled {
        std::vector<double> times;
        std::vector<SpectralField> thetas;
        std::vector<std::vector<Vec2>> zs;
    };
    auto run_one = [&](const SpectralField& th0) {
        Sampled s;
        simulate(cfg, th0, vortices, [&](const CoupledState& st, const DiagnosticsRecord&) {
            s.times.push_back(st.time);
            s.thetas.push_back(st.theta);
            s.zs.push_back(st.vortices.positions);
        });
        return s;
    };
    Sampled a = run_one(theta0);
    SpectralField theta_full = theta0;
    theta_full += perturbation;
    Sampled b = run_one(theta_full);
    SpectralField half = perturbation;
    half *= 0.5;
    SpectralField theta_half = theta0;
    theta_half += half;
    Sampled c = run_one(theta_half);

    StabilityRunReport rep;
    rep.gap_hl = stability_gap(a.times, a.thetas, b.thetas, a.zs, b.zs, ell);
    rep.gap_l2 = stability_gap(a.times, a.thetas, b.thetas, a.zs, b.zs, 0.0);
    StabilityGapReport gap_half = stability_gap(a.times, a.thetas, c.thetas, a.zs, c.zs, ell);
    rep.linearity_ratio = gap_half.gap.back() > 0.0
                              ? rep.gap_hl.gap.back() / gap_half.gap.back()
                              : 0.0;
    return rep;
}

// ---------------------------------------------------------------------------
// plot emission

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
    size_t rows = 0;
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty csv: " + path);
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.header.push_back(cell);
    t.columns.resize(t.header.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        size_t col = 0;
        while (std::getline(ls, cell, ',') && col < t.columns.size())
            t.columns[col++].push_back(std::strtod(cell.c_str(), nullptr));
        ++t.rows;
    }
    return t;
}

/// Renders one heatmap per snapshot (vortex markers from the nearest
/// diagnostics row) and one time-series panel sheet covering every
/// diagnostics column. Deterministic rasters; re-running is byte-identical.
inline std::vector<std::string> emit_plots(const fs::path& run_dir) {
    CsvTable diag = read_csv((run_dir / "diagnostics.csv").string());
    if (diag.rows == 0) throw std::runtime_error("no samples in diagnostics.csv");
    std::vector<std::string> written;

    // vortex positions per sample time
    std::vector<size_t> zx_cols, zy_cols;
    for (size_t c = 0; c < diag.header.size(); ++c) {
        const std::string& h = diag.header[c];
        if (h.size() > 2 && h[0] == 'z' && h.find("x[") != std::string::npos)
            zx_cols.push_back(c);
        if (h.size() > 2 && h[0] == 'z' && h.find("y[") != std::string::npos)
            zy_cols.push_back(c);
    }
    const std::vector<double>& times = diag.columns[0];

    std::vector<fs::path> snaps;
    for (const auto& entry : fs::directory_iterator(run_dir)) {
        if (entry.path().extension() == ".f64") snaps.push_back(entry.path());
    }
    std::sort(snaps.begin(), snaps.end());
    for (const auto& snap_path : snaps) {
        std::string base = snap_path.string();
        base.resize(base.size() - 4);
        SnapshotData snap = read_snapshot(base);
        size_t nearest = 0;
        for (size_t i = 1; i < times.size(); ++i)
            if (std::abs(times[i] - snap.time) < std::abs(times[nearest] - snap.time))
                nearest = i;
        std::vector<Vec2> marks;
        for (size_t k = 0; k < zx_cols.size(); ++k)
            marks.push_back({diag.columns[zx_cols[k]][nearest], diag.columns[zy_cols[k]][nearest]});
        Image img = render_heatmap(snap.field, marks);
        fs::path out = fs::path(base + "_heatmap.ppm");
        write_ppm(out.string(), img);
        written.push_back(out.filename().string());
    }

    std::vector<std::vector<double>> series(diag.columns.begin() + 1, diag.columns.end());
    Image panels = render_series_panels(times, series);
    write_ppm((run_dir / "panels.ppm").string(), panels);
    written.push_back("panels.ppm");
    return written;
}

} // namespace vw
