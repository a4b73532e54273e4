#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "vw/config.hpp"
#include "vw/runner.hpp"

using namespace vw;
namespace fs = std::filesystem;

namespace {

json minimal_config() {
    return json::parse(R"({
      "grid": {"L": 6.283185307179586, "n": 128},
      "sim": {"s": 0.75, "eps": 0.15, "t_end": 0.05, "diag_every": 2, "tol_plateau": 1e-4},
      "theta0": [{"type": "gaussian-blob", "center": [2.4, 3.14], "width": 0.3, "amplitude": 1.0}],
      "vortices": [{"position": [4.2, 3.14], "intensity": 0.5}]
    })");
}

fs::path temp_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("vwsim_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("config parsing") {
    SUBCASE("minimal valid config parses with defaults filled") {
        ParsedRun run = parse_config_json(minimal_config());
        CHECK(run.cfg.grid.resolution == 128);
        CHECK(run.cfg.s == 0.75);
        CHECK(run.cfg.cfl_factor == 0.5);
        CHECK(run.cfg.dt_policy == DtPolicy::cfl);
        CHECK(run.vortices.count() == 1);
        CHECK(sobolev_norm(run.theta0, 0.0) > 0.0);
        CHECK(!run.config_hash.empty());
    }

    SUBCASE("unresolvable kernel eps rejected with a clear message") {
        json cfg = minimal_config();
        cfg["sim"]["eps"] = 0.01; // h/5 at n=128
        try {
            parse_config_json(cfg);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("kernel unresolvable") != std::string::npos);
        }
    }

    SUBCASE("unknown keys are named in the error") {
        json cfg = minimal_config();
        cfg["sim"]["viscosity"] = 1e-3;
        try {
            parse_config_json(cfg);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("sim.viscosity") != std::string::npos);
        }
    }

    SUBCASE("vortex near the wrap seam rejected") {
        json cfg = minimal_config();
        cfg["vortices"][0]["position"] = {0.2, 3.14};
        CHECK_THROWS_AS(parse_config_json(cfg), ConfigError);
    }

    SUBCASE("plateau radius unit rule R(0) < 1 enforced") {
        json cfg = minimal_config();
        cfg["theta0"] = json::array({json::parse(
            R"({"type":"plateau-patch","center":[3.14,3.14],"beta":1.0,"inner_radius":1.2,"outer_radius":1.4})")});
        try {
            parse_config_json(cfg);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("R(0) < 1") != std::string::npos);
        }
    }

    SUBCASE("missing vortices rejected") {
        json cfg = minimal_config();
        cfg.erase("vortices");
        CHECK_THROWS_AS(parse_config_json(cfg), ConfigError);
    }
}

TEST_CASE("snapshot round trip") {
    GridSpec g(two_pi, 32);
    PhysicalField p(g);
    for (size_t i = 0; i < p.values.size(); ++i) p.values[i] = std::sin(0.37 * i) * 1.7;
    fs::path dir = temp_dir("snapshot");
    write_snapshot((dir / "snap").string(), p, 1.25, "cafebabe");
    SnapshotData snap = read_snapshot((dir / "snap").string());
    CHECK(snap.time == 1.25);
    CHECK(snap.field.grid.resolution == 32);
    REQUIRE(snap.field.values.size() == p.values.size());
    for (size_t i = 0; i < p.values.size(); ++i) CHECK(snap.field.values[i] == p.values[i]);
}

TEST_CASE("simulate run directory and determinism") {
    ParsedRun run = parse_config_json(minimal_config());
    fs::path dir1 = temp_dir("run1");
    fs::path dir2 = temp_dir("run2");
    StopReason r1 = run_simulate(run, dir1, 7);
    StopReason r2 = run_simulate(run, dir2, 7);
    CHECK(r1 == StopReason::completed);
    CHECK(r2 == StopReason::completed);

    SUBCASE("diagnostics CSVs are byte-identical across runs") {
        std::string a = slurp(dir1 / "diagnostics.csv");
        std::string b = slurp(dir2 / "diagnostics.csv");
        REQUIRE(!a.empty());
        CHECK(a == b);
    }

    SUBCASE("snapshots are byte-identical across runs") {
        CHECK(slurp(dir1 / "theta_final.f64") == slurp(dir2 / "theta_final.f64"));
    }

    SUBCASE("manifest lists every output with the termination reason") {
        json m = json::parse(slurp(dir1 / "manifest.json"));
        CHECK(m["termination"] == "completed");
        CHECK(m["config_hash"] == run.config_hash);
        std::set<std::string> outs(m["outputs"].begin(), m["outputs"].end());
        CHECK(outs.count("diagnostics.csv") == 1);
        CHECK(outs.count("theta_final.f64") == 1);
        for (const auto& f : outs) CHECK(fs::exists(dir1 / f));
    }

    SUBCASE("plots render deterministically from the artifacts") {
        std::vector<std::string> w1 = emit_plots(dir1);
        std::string first = slurp(dir1 / "panels.ppm");
        std::vector<std::string> w2 = emit_plots(dir1);
        CHECK(w1 == w2);
        CHECK(slurp(dir1 / "panels.ppm") == first);
        // one heatmap per snapshot plus the panel sheet
        int heatmaps = 0;
        for (const auto& f : w1)
            if (f.find("heatmap") != std::string::npos) ++heatmaps;
        CHECK(heatmaps == 2); // initial + final
    }

    SUBCASE("plot emission on an empty run directory fails cleanly") {
        fs::path empty = temp_dir("empty");
        std::ofstream(empty / "diagnostics.csv") << "t[time],L1[x]\n";
        CHECK_THROWS_AS(emit_plots(empty), std::runtime_error);
    }
}

TEST_CASE("vortex-only driver writes the analytic pair trajectory") {
    json cfg = minimal_config();
    cfg["sim"]["s"] = 0.75;
    double d = 0.8, a = 1.0, s = 0.75;
    double omega = 2.0 * c_s_constant(s) * a / std::pow(d, 4.0 - 2.0 * s);
    double period = two_pi / omega;
    cfg["sim"]["t_end"] = period;
    cfg["sim"]["dt"] = period / 2000.0;
    cfg["vortices"] = json::array();
    cfg["vortices"].push_back({{"position", {pi + d / 2, pi}}, {"intensity", a}});
    cfg["vortices"].push_back({{"position", {pi - d / 2, pi}}, {"intensity", a}});
    ParsedRun run = parse_config_json(cfg);
    fs::path dir = temp_dir("vortex_only");
    run_vortex_only(run, dir, 0, VortexMethod::rk4, run.cfg.dt);

    CsvTable t = read_csv((dir / "trajectory.csv").string());
    REQUIRE(t.rows > 0);
    size_t last = t.rows - 1;
    CHECK(std::abs(t.columns[1][last] - (pi + d / 2)) < 1e-8 * d);
    CHECK(std::abs(t.columns[2][last] - pi) < 1e-8 * d);
    // H and I stay constant along the file
    double h0 = t.columns[5][0], i0 = t.columns[6][0];
    for (size_t r = 0; r < t.rows; ++r) {
        CHECK(std::abs(t.columns[5][r] - h0) < 1e-8 * std::abs(h0));
        CHECK(std::abs(t.columns[6][r] - i0) < 1e-8 * std::abs(i0));
    }
}

TEST_CASE("snapshot reuse: a final state seeds a new run through the file generator") {
    ParsedRun run = parse_config_json(minimal_config());
    fs::path dir = temp_dir("reuse");
    run_simulate(run, dir, 0);

    json cfg2 = minimal_config();
    cfg2["theta0"] = json::array(
        {{{"type", "file"}, {"path", (dir / "theta_final").string()}}});
    ParsedRun run2 = parse_config_json(cfg2);
    SnapshotData snap = read_snapshot((dir / "theta_final").string());
    SpectralField expect = from_physical(snap.field);
    expect.dealias();
    CHECK((run2.theta0 - expect).max_coeff_abs() == 0.0);
    // and it can actually run
    fs::path dir2 = temp_dir("reuse2");
    CHECK(run_simulate(run2, dir2, 0) == StopReason::completed);
}

TEST_CASE("file generator rejects snapshots from a different grid") {
    GridSpec g(two_pi, 32);
    PhysicalField p(g, 1.0);
    fs::path dir = temp_dir("gridmismatch");
    write_snapshot((dir / "snap").string(), p, 0.0, "x");
    json cfg = minimal_config(); // n = 128
    cfg["theta0"] = json::array({{{"type", "file"}, {"path", (dir / "snap").string()}}});
    try {
        parse_config_json(cfg);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("does not match") != std::string::npos);
    }
}
