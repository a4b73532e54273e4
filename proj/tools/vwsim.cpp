// vwsim: pseudo-spectral simulator for the generalized SQG vortex-wave
// system. Subcommands: simulate, vortex-only, convergence, check, plot.
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure,
// 4 check-suite failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <thread>

#include "vw/runner.hpp"

using namespace vw;

namespace {

int do_simulate(const std::string& config_path, const std::string& out_dir, uint64_t seed) {
    ParsedRun run = parse_config(config_path);
    StopReason reason = run_simulate(run, out_dir, seed);
    std::cout << "simulate: " << to_string(reason) << ", outputs in " << out_dir << "\n";
    return reason == StopReason::nan_detected ? 3 : 0;
}

int do_vortex_only(const std::string& config_path, const std::string& out_dir, uint64_t seed) {
    ParsedRun run = parse_config(config_path);
    VortexMethod method = VortexMethod::rk4;
    double dt = run.cfg.dt;
    if (run.raw.contains("sim") && run.raw["sim"].contains("ode_method")) {
        std::string m = run.raw["sim"]["ode_method"].get<std::string>();
        if (m == "rk45") method = VortexMethod::rk45;
        else if (m != "rk4") throw ConfigError("sim.ode_method must be 'rk4' or 'rk45'");
    }
    run_vortex_only(run, out_dir, seed, method, dt);
    std::cout << "vortex-only: trajectory written to " << out_dir << "\n";
    return 0;
}

int do_convergence(const std::string& config_path, const std::string& out_dir, uint64_t seed,
                   int threads) {
    ParsedRun run = parse_config(config_path);
    if (!run.raw.contains("study")) throw ConfigError("missing key '$.study'");
    const json& st = run.raw["study"];
    std::string type = st.value("type", "");
    fs::create_directories(out_dir);
    std::vector<std::string> outputs;

    if (type == "kernel-rate") {
        double sigma = st.value("sigma", 0.0);
        std::vector<double> ladder = st.value("eps_ladder", std::vector<double>{});
        LadderReport rep = convergence_kernel_rate(run.cfg.grid, run.cfg.s, sigma, ladder);
        write_rates_csv((fs::path(out_dir) / "rates.csv").string(), rep);
        outputs.push_back("rates.csv");
        std::cout << "kernel-rate fitted slope " << rep.fitted_slope << "\n";
    } else if (type == "velocity-path") {
        std::vector<double> ladder = st.value("eps_ladder", std::vector<double>{});
        LadderReport rep = convergence_velocity_path(run.theta0, run.cfg.s, ladder);
        write_rates_csv((fs::path(out_dir) / "rates.csv").string(), rep);
        outputs.push_back("rates.csv");
        std::cout << "velocity-path fitted slope " << rep.fitted_slope << "\n";
    } else if (type == "mollifier") {
        std::vector<double> widths = st.value("widths", std::vector<double>{});
        if (threads <= 0)
            threads = static_cast<int>(std::thread::hardware_concurrency());
        LadderReport rep = convergence_mollifier(run, widths, threads);
        write_rates_csv((fs::path(out_dir) / "rates.csv").string(), rep);
        outputs.push_back("rates.csv");
        std::cout << "mollifier gap slope " << rep.fitted_slope << "\n";
    } else if (type == "stability") {
        double ell = st.value("ell", 2.0);
        if (!st.contains("perturbation"))
            throw ConfigError("study.stability needs 'perturbation'");
        SpectralField pert =
            build_theta_component(st["perturbation"], run.cfg.grid, "study.perturbation");
        StabilityRunReport rep = stability_study(run.cfg, run.theta0, run.vortices, pert, ell);
        std::ofstream out(fs::path(out_dir) / "gap.csv", std::ios::binary);
        out << "t[time],gap_Hl,gap_L2\n";
        for (size_t i = 0; i < rep.gap_hl.times.size(); ++i)
            out << format_double(rep.gap_hl.times[i]) << ','
                << format_double(rep.gap_hl.gap[i]) << ','
                << format_double(rep.gap_l2.gap[i]) << "\n";
        outputs.push_back("gap.csv");
        std::cout << "stability fitted rate " << rep.gap_hl.fitted_rate << " (R^2 "
                  << rep.gap_hl.fit_r_squared << "), linearity ratio " << rep.linearity_ratio
                  << "\n";
    } else {
        throw ConfigError(
            "study.type must be kernel-rate | velocity-path | mollifier | stability");
    }
    write_manifest(out_dir, run.config_hash, seed, outputs, "completed");
    return 0;
}

int do_check(uint64_t seed) {
    std::vector<CheckResult> results = run_all_checks(seed);
    bool all = true;
    for (const auto& r : results) {
        std::printf("[%s] %-32s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        all = all && r.pass;
    }
    std::printf("%zu checks, %s\n", results.size(), all ? "all passed" : "FAILURES");
    return all ? 0 : 4;
}

int do_plot(const std::string& run_dir) {
    std::vector<std::string> written = emit_plots(run_dir);
    for (const auto& f : written) std::cout << "wrote " << f << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gSQG vortex-wave pseudo-spectral simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", run_dir;
    uint64_t seed = 0;
    int threads = 0;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config)
            cmd->add_option("--config", config_path, "config file (json)")
                ->required()
                ->envname("VWSIM_CONFIG");
        cmd->add_option("--out", out_dir, "output directory")->envname("VWSIM_OUT");
        cmd->add_option("--seed", seed, "rng seed (test-field generators only)")
            ->envname("VWSIM_SEED");
        cmd->add_option("--threads", threads, "max concurrent independent runs (0 = auto)")
            ->envname("VWSIM_THREADS");
    };

    CLI::App* sim = app.add_subcommand("simulate", "run the coupled vortex-wave system");
    add_common(sim, true);
    CLI::App* vo = app.add_subcommand("vortex-only", "integrate the point-vortex system");
    add_common(vo, true);
    CLI::App* conv = app.add_subcommand("convergence", "parameter-ladder studies");
    add_common(conv, true);
    CLI::App* chk = app.add_subcommand("check", "run the invariant suite");
    add_common(chk, false);
    CLI::App* plot = app.add_subcommand("plot", "render plots for a run directory");
    plot->add_option("--run", run_dir, "run directory with diagnostics.csv")
        ->required()
        ->envname("VWSIM_RUN");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return do_simulate(config_path, out_dir, seed);
        if (vo->parsed()) return do_vortex_only(config_path, out_dir, seed);
        if (conv->parsed()) return do_convergence(config_path, out_dir, seed, threads);
        if (chk->parsed()) return do_check(seed);
        if (plot->parsed()) return do_plot(run_dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
