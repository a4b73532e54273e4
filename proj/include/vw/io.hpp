#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vw/coupled.hpp"
#include "vw/pointvortex.hpp"

namespace vw {

/// Shortest round-trip decimal form; fixed format keeps CSV output
/// byte-identical across runs.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline uint64_t fnv1a64(const std::string& data) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Diagnostics CSV: header names every field with units, one row per sample,
/// deterministic column order.
inline void write_diagnostics_csv(const std::string& path,
                                  const std::vector<DiagnosticsRecord>& records,
                                  size_t n_vortices) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "t[time],L1[theta*len^2],L2[theta*len],L4[theta*len^(1/2)],Linf[theta],"
           "H1[theta*len],H2[theta*len],H3[theta*len],H4[theta*len],H_3m2s[theta*len],"
           "grad_v_sup[1/time],E_energy[theta^2*len^2],H_vortex[a^2*len^(2s-2)],"
           "I_vortex[a*len^2],min_dist[len]";
    for (size_t i = 0; i < n_vortices; ++i) {
        std::string k = std::to_string(i + 1);
        out << ",z" << k << "x[len],z" << k << "y[len],R" << k << "[len],N" << k
            << "[1/time],vmag" << k << "[len/time]";
    }
    out << "\n";
    for (const auto& r : records) {
        out << format_double(r.t) << ',' << format_double(r.lp1) << ',' << format_double(r.lp2)
            << ',' << format_double(r.lp4) << ',' << format_double(r.lp_inf) << ','
            << format_double(r.h1) << ',' << format_double(r.h2) << ',' << format_double(r.h3)
            << ',' << format_double(r.h4) << ',' << format_double(r.h_frac) << ','
            << format_double(r.grad_v_sup) << ',' << format_double(r.energy) << ','
            << format_double(r.hamiltonian) << ',' << format_double(r.moment) << ','
            << format_double(r.min_dist);
        for (size_t i = 0; i < n_vortices; ++i) {
            out << ',' << format_double(r.positions[i].x) << ','
                << format_double(r.positions[i].y) << ',' << format_double(r.plateau_r[i])
                << ',' << format_double(r.blowup_n[i]) << ','
                << format_double(r.v_at_vortex[i]);
        }
        out << "\n";
    }
}

/// Vortex-only trajectory CSV: t, z1x, z1y, ..., H, I, min_dist.
inline void write_trajectory_csv(const std::string& path, const VortexTrajectory& traj) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    size_t n = traj.states.front().count();
    out << "t[time]";
    for (size_t i = 0; i < n; ++i) {
        std::string k = std::to_string(i + 1);
        out << ",z" << k << "x[len],z" << k << "y[len]";
    }
    out << ",H[a^2*len^(2s-2)],I[a*len^2],min_dist[len]\n";
    for (size_t row = 0; row < traj.times.size(); ++row) {
        const VortexEnsemble& st = traj.states[row];
        out << format_double(traj.times[row]);
        for (size_t i = 0; i < n; ++i)
            out << ',' << format_double(st.positions[i].x) << ','
                << format_double(st.positions[i].y);
        out << ',' << format_double(hamiltonian(st, traj.s)) << ','
            << format_double(moment_of_inertia(st)) << ','
            << format_double(min_pairwise_distance(st)) << "\n";
    }
}

/// Snapshot: flat little-endian binary of physical-space values (row-major)
/// plus a text sidecar with the grid metadata.
inline void write_snapshot(const std::string& base_path, const PhysicalField& field,
                           double time, const std::string& config_hash) {
    std::ofstream bin(base_path + ".f64", std::ios::binary);
    if (!bin) throw std::runtime_error("cannot open " + base_path + ".f64");
    bin.write(reinterpret_cast<const char*>(field.values.data()),
              static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    std::ofstream meta(base_path + ".meta", std::ios::binary);
    meta << "format theta-snapshot-v1\n"
         << "n " << field.grid.resolution << "\n"
         << "L " << format_double(field.grid.side_length) << "\n"
         << "dealias " << format_double(field.grid.dealias_fraction) << "\n"
         << "time " << format_double(time) << "\n"
         << "layout row-major little-endian float64\n"
         << "config " << config_hash << "\n";
}

struct SnapshotData {
    PhysicalField field;
    double time = 0.0;
};

inline SnapshotData read_snapshot(const std::string& base_path) {
    std::ifstream meta(base_path + ".meta");
    if (!meta) throw std::runtime_error("cannot open " + base_path + ".meta");
    int n = 0;
    double L = 0.0, dealias = 2.0 / 3.0, time = 0.0;
    std::string key;
    while (meta >> key) {
        if (key == "n") meta >> n;
        else if (key == "L") meta >> L;
        else if (key == "dealias") meta >> dealias;
        else if (key == "time") meta >> time;
        else meta.ignore(4096, '\n');
    }
    if (n <= 0 || !(L > 0.0)) throw std::runtime_error("snapshot sidecar missing n or L");
    SnapshotData snap;
    snap.time = time;
    snap.field = PhysicalField(GridSpec(L, n, dealias));
    std::ifstream bin(base_path + ".f64", std::ios::binary);
    if (!bin) throw std::runtime_error("cannot open " + base_path + ".f64");
    bin.read(reinterpret_cast<char*>(snap.field.values.data()),
             static_cast<std::streamsize>(snap.field.values.size() * sizeof(double)));
    if (bin.gcount() != static_cast<std::streamsize>(snap.field.values.size() * sizeof(double)))
        throw std::runtime_error("snapshot binary truncated: " + base_path);
    return snap;
}

// ---------------------------------------------------------------------------
// deterministic raster output (binary PPM)

struct Image {
    int width = 0, height = 0;
    std::vector<unsigned char> rgb; // 3 bytes per pixel, row-major

    Image(int w, int h) : width(w), height(h), rgb(static_cast<size_t>(w) * h * 3, 255) {}

    void set(int x, int y, unsigned char r, unsigned char g, unsigned char b) {
        if (x < 0 || x >= width || y < 0 || y >= height) return;
        size_t i = 3 * (static_cast<size_t>(y) * width + x);
        rgb[i] = r;
        rgb[i + 1] = g;
        rgb[i + 2] = b;
    }
};

inline void write_ppm(const std::string& path, const Image& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.rgb.data()),
              static_cast<std::streamsize>(img.rgb.size()));
}

/// Diverging blue-white-red map on [-1, 1].
inline void diverging_color(double t, unsigned char& r, unsigned char& g, unsigned char& b) {
    t = std::clamp(t, -1.0, 1.0);
    if (t < 0.0) {
        r = static_cast<unsigned char>(255 * (1.0 + t));
        g = static_cast<unsigned char>(255 * (1.0 + t));
        b = 255;
    } else {
        r = 255;
        g = static_cast<unsigned char>(255 * (1.0 - t));
        b = static_cast<unsigned char>(255 * (1.0 - t));
    }
}

/// Heatmap of a physical field with vortex markers (black crosses).
inline Image render_heatmap(const PhysicalField& field, const std::vector<Vec2>& vortices) {
    const int n = field.grid.resolution;
    Image img(n, n);
    double amp = field.max_abs();
    if (amp == 0.0) amp = 1.0;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            unsigned char r, g, b;
            diverging_color(field.at(ix, iy) / amp, r, g, b);
            img.set(ix, n - 1 - iy, r, g, b); // y axis upward
        }
    const double h = field.grid.spacing();
    for (Vec2 z : vortices) {
        Vec2 zz = wrap_position(z, field.grid.side_length);
        int px = static_cast<int>(std::lround(zz.x / h)) % n;
        int py = n - 1 - static_cast<int>(std::lround(zz.y / h)) % n;
        for (int d = -3; d <= 3; ++d) {
            img.set(px + d, py, 0, 0, 0);
            img.set(px, py + d, 0, 0, 0);
        }
    }
    return img;
}

/// One panel per series: polyline over the time axis, framed. Panels are
/// stacked in a column in the given order (documented in the README; the
/// raster has no font).
inline Image render_series_panels(const std::vector<double>& t,
                                  const std::vector<std::vector<double>>& series) {
    const int pw = 320, ph = 80, margin = 8;
    const int rows = static_cast<int>(series.size());
    Image img(pw, rows * ph);
    if (t.size() < 2) return img;
    for (int r = 0; r < rows; ++r) {
        const auto& ys = series[r];
        double lo = ys.front(), hi = ys.front();
        for (double v : ys) {
            if (std::isnan(v)) continue;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (!(hi > lo)) hi = lo + 1.0;
        int y0 = r * ph;
        for (int x = 0; x < pw; ++x) {
            img.set(x, y0, 200, 200, 200);
            img.set(x, y0 + ph - 1, 200, 200, 200);
        }
        for (int y = 0; y < ph; ++y) {
            img.set(0, y0 + y, 200, 200, 200);
            img.set(pw - 1, y0 + y, 200, 200, 200);
        }
        double t0 = t.front(), t1 = t.back();
        int prev_x = -1, prev_y = -1;
        for (size_t i = 0; i < t.size(); ++i) {
            if (std::isnan(ys[i])) { prev_x = -1; continue; }
            int x = margin + static_cast<int>((pw - 2.0 * margin) * (t[i] - t0) /
                                              (t1 > t0 ? t1 - t0 : 1.0));
            int y = y0 + ph - margin -
                    static_cast<int>((ph - 2.0 * margin) * (ys[i] - lo) / (hi - lo));
            if (prev_x >= 0) {
                int steps = std::max(std::abs(x - prev_x), std::abs(y - prev_y)) + 1;
                for (int k = 0; k <= steps; ++k) {
                    int xx = prev_x + (x - prev_x) * k / steps;
                    int yy = prev_y + (y - prev_y) * k / steps;
                    img.set(xx, yy, 30, 30, 160);
                }
            } else {
                img.set(x, y, 30, 30, 160);
            }
            prev_x = x;
            prev_y = y;
        }
    }
    return img;
}

} // namespace vw
