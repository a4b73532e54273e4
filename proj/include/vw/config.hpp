#pragma once

#include <json.hpp>

#include <fstream>
#include <set>
#include <string>

#include "vw/coupled.hpp"
#include "vw/initial_data.hpp"
#include "vw/io.hpp"

namespace vw {

using json = nlohmann::json;

/// Raised on schema violations; the message names the offending key path.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParsedRun {
    SimConfig cfg;
    SpectralField theta0;
    VortexEnsemble vortices;
    std::string config_hash; // of the canonicalized json text
    json raw;
};

namespace detail {

inline void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                                const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + where + "." + it.key() + "'");
}

inline double get_num(const json& obj, const std::string& key, const std::string& where,
                      double fallback, bool required = false) {
    if (!obj.contains(key)) {
        if (required) throw ConfigError("missing key '" + where + "." + key + "'");
        return fallback;
    }
    if (!obj[key].is_number())
        throw ConfigError("key '" + where + "." + key + "' must be a number");
    return obj[key].get<double>();
}

inline Vec2 get_vec2(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_array() || obj[key].size() != 2)
        throw ConfigError("key '" + where + "." + key + "' must be [x, y]");
    return {obj[key][0].get<double>(), obj[key][1].get<double>()};
}

/// Everything physically active must stay at least L/8 away from the seam
/// of the nearest-image wrap, i.e. within the centered box of half-width
/// 3L/8.
inline void check_interior(Vec2 p, double reach, double L, const std::string& what) {
    Vec2 center{0.5 * L, 0.5 * L};
    Vec2 d = wrap_delta(p - center, L);
    double limit = 3.0 * L / 8.0 - reach;
    if (std::abs(d.x) > limit || std::abs(d.y) > limit)
        throw ConfigError(what + " comes within L/8 of wraparound influence");
}

} // namespace detail

/// One component of the initial datum; components are summed.
inline SpectralField build_theta_component(const json& spec, const GridSpec& g,
                                           const std::string& where) {
    if (!spec.contains("type")) throw ConfigError("missing key '" + where + ".type'");
    std::string type = spec["type"].get<std::string>();
    const double L = g.side_length;
    if (type == "gaussian-blob") {
        detail::reject_unknown_keys(spec, {"type", "center", "width", "amplitude"}, where);
        Vec2 c = detail::get_vec2(spec, "center", where);
        double w = detail::get_num(spec, "width", where, 0.0, true);
        double a = detail::get_num(spec, "amplitude", where, 1.0);
        detail::check_interior(c, 3.0 * w, L, where);
        return make_gaussian_blob(g, c, w, a);
    }
    if (type == "annulus") {
        detail::reject_unknown_keys(spec, {"type", "center", "radius", "width", "amplitude"},
                                    where);
        Vec2 c = detail::get_vec2(spec, "center", where);
        double r = detail::get_num(spec, "radius", where, 0.0, true);
        double w = detail::get_num(spec, "width", where, 0.0, true);
        double a = detail::get_num(spec, "amplitude", where, 1.0);
        detail::check_interior(c, r + 3.0 * w, L, where);
        return make_annulus(g, c, r, w, a);
    }
    if (type == "plateau-patch") {
        detail::reject_unknown_keys(
            spec, {"type", "center", "beta", "inner_radius", "outer_radius"}, where);
        Vec2 c = detail::get_vec2(spec, "center", where);
        double beta = detail::get_num(spec, "beta", where, 0.0, true);
        double ri = detail::get_num(spec, "inner_radius", where, 0.0, true);
        double ro = detail::get_num(spec, "outer_radius", where, 0.0, true);
        if (!(ri < 1.0))
            throw ConfigError(where + ": plateau radius must satisfy R(0) < 1 "
                              "(rescale the domain unit)");
        detail::check_interior(c, ro, L, where);
        return make_plateau_patch(g, c, beta, ri, ro);
    }
    if (type == "file") {
        detail::reject_unknown_keys(spec, {"type", "path"}, where);
        if (!spec.contains("path")) throw ConfigError("missing key '" + where + ".path'");
        SnapshotData snap = read_snapshot(spec["path"].get<std::string>());
        if (snap.field.grid != g)
            throw ConfigError(where + ": snapshot grid does not match config grid");
        SpectralField f = from_physical(snap.field);
        f.dealias();
        return f;
    }
    throw ConfigError("unknown generator type '" + type + "' at " + where);
}

inline ParsedRun parse_config_json(const json& root) {
    detail::reject_unknown_keys(root, {"grid", "sim", "theta0", "vortices", "study"}, "$");

    // grid
    if (!root.contains("grid")) throw ConfigError("missing key '$.grid'");
    const json& jg = root["grid"];
    detail::reject_unknown_keys(jg, {"L", "n", "dealias"}, "grid");
    double L = detail::get_num(jg, "L", "grid", two_pi);
    double n = detail::get_num(jg, "n", "grid", 128, true);
    double frac = detail::get_num(jg, "dealias", "grid", 2.0 / 3.0);
    GridSpec grid(L, static_cast<int>(n), frac);

    // sim
    SimConfig cfg;
    cfg.grid = grid;
    if (!root.contains("sim")) throw ConfigError("missing key '$.sim'");
    const json& js = root["sim"];
    detail::reject_unknown_keys(
        js,
        {"s", "eps", "galerkin_N", "t_end", "dt_policy", "dt", "cfl_factor", "dt_max",
         "velocity_path", "vortex_mode", "delta_q", "diag_every", "tol_plateau", "tol_ode",
         "ode_method"},
        "sim");
    cfg.s = detail::get_num(js, "s", "sim", 0.75);
    cfg.eps = detail::get_num(js, "eps", "sim", 0.0, true);
    if (js.contains("galerkin_N") && !js["galerkin_N"].is_null())
        cfg.galerkin_N = detail::get_num(js, "galerkin_N", "sim", 0.0);
    cfg.t_end = detail::get_num(js, "t_end", "sim", 1.0);
    if (js.contains("dt_policy")) {
        std::string p = js["dt_policy"].get<std::string>();
        if (p == "fixed") cfg.dt_policy = DtPolicy::fixed;
        else if (p == "cfl") cfg.dt_policy = DtPolicy::cfl;
        else throw ConfigError("sim.dt_policy must be 'fixed' or 'cfl'");
    }
    cfg.dt = detail::get_num(js, "dt", "sim", cfg.dt);
    cfg.cfl_factor = detail::get_num(js, "cfl_factor", "sim", cfg.cfl_factor);
    cfg.dt_max = detail::get_num(js, "dt_max", "sim", cfg.dt_max);
    if (js.contains("velocity_path")) {
        std::string p = js["velocity_path"].get<std::string>();
        if (p == "multiplier") cfg.velocity_path = VelocityPath::multiplier;
        else if (p == "convolution") cfg.velocity_path = VelocityPath::convolution;
        else throw ConfigError("sim.velocity_path must be 'multiplier' or 'convolution'");
    }
    if (js.contains("vortex_mode")) {
        std::string p = js["vortex_mode"].get<std::string>();
        if (p == "dirac") cfg.vortex_mode = VortexVelocityMode::dirac;
        else if (p == "mollifier") cfg.vortex_mode = VortexVelocityMode::mollifier;
        else throw ConfigError("sim.vortex_mode must be 'dirac' or 'mollifier'");
    }
    cfg.delta_q = detail::get_num(js, "delta_q", "sim", cfg.delta_q);
    cfg.diag_every = static_cast<int>(detail::get_num(js, "diag_every", "sim", cfg.diag_every));
    cfg.tol_plateau = detail::get_num(js, "tol_plateau", "sim", cfg.tol_plateau);
    cfg.tol_ode = detail::get_num(js, "tol_ode", "sim", cfg.tol_ode);

    if (cfg.eps < 2.0 * grid.spacing())
        throw ConfigError("sim.eps: kernel unresolvable on this grid (need eps >= 2h = " +
                          format_double(2.0 * grid.spacing()) + ")");
    cfg.validate();

    // theta0
    SpectralField theta0(grid);
    if (root.contains("theta0")) {
        const json& jt = root["theta0"];
        if (!jt.is_array()) throw ConfigError("'$.theta0' must be an array of components");
        for (size_t i = 0; i < jt.size(); ++i)
            theta0 += build_theta_component(jt[i], grid, "theta0[" + std::to_string(i) + "]");
    }

    // vortices
    std::vector<Vec2> zs;
    std::vector<double> as, betas;
    if (root.contains("vortices")) {
        const json& jv = root["vortices"];
        if (!jv.is_array()) throw ConfigError("'$.vortices' must be an array");
        for (size_t i = 0; i < jv.size(); ++i) {
            std::string where = "vortices[" + std::to_string(i) + "]";
            detail::reject_unknown_keys(jv[i], {"position", "intensity", "beta"}, where);
            Vec2 z = detail::get_vec2(jv[i], "position", where);
            detail::check_interior(z, 0.0, L, where);
            zs.push_back(z);
            as.push_back(detail::get_num(jv[i], "intensity", where, 0.0, true));
            betas.push_back(detail::get_num(jv[i], "beta", where, 0.0));
        }
    }
    if (zs.empty()) throw ConfigError("'$.vortices' must list at least one vortex");

    ParsedRun run{std::move(cfg), std::move(theta0), VortexEnsemble(zs, as, betas), "", root};
    run.config_hash = hex64(fnv1a64(root.dump()));
    return run;
}

inline ParsedRun parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not found: " + path);
    json root;
    try {
        in >> root;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_config_json(root);
}

} // namespace vw
