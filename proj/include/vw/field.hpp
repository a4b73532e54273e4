#pragma once

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "vw/grid.hpp"

namespace vw {

struct PhysicalField {
    GridSpec grid;
    std::vector<double> values; // row-major, values[iy*n + ix]

    PhysicalField() = default;
    explicit PhysicalField(const GridSpec& g, double fill = 0.0)
        : grid(g), values(static_cast<size_t>(g.resolution) * g.resolution, fill) {}

    double& at(int ix, int iy) { return values[static_cast<size_t>(iy) * grid.resolution + ix]; }
    double at(int ix, int iy) const { return values[static_cast<size_t>(iy) * grid.resolution + ix]; }

    double max_abs() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
};

namespace detail {

/// Process-wide FFTW plan cache. Plans are made with FFTW_ESTIMATE so the
/// algorithm choice is deterministic, and FFTW_UNALIGNED so they run on
/// plain std::vector storage. Plan creation is serialized; execution via the
/// new-array interface is reentrant.
struct FftPlans {
    fftw_plan forward = nullptr;  // r2c
    fftw_plan backward = nullptr; // c2r
};

inline const FftPlans& fft_plans_for(int n) {
    static std::mutex mu;
    static std::map<int, FftPlans> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<double> real(static_cast<size_t>(n) * n);
    std::vector<std::complex<double>> cplx(static_cast<size_t>(n) * (n / 2 + 1));
    FftPlans p;
    p.forward = fftw_plan_dft_r2c_2d(n, n, real.data(),
                                     reinterpret_cast<fftw_complex*>(cplx.data()),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.backward = fftw_plan_dft_c2r_2d(n, n,
                                      reinterpret_cast<fftw_complex*>(cplx.data()),
                                      real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p.forward || !p.backward)
        throw std::runtime_error("FFTW plan creation failed");
    return cache.emplace(n, p).first->second;
}

} // namespace detail

/// A real scalar field on the torus stored as Fourier coefficients in
/// Hermitian half-storage: rows are ky indices 0..n-1 (signed via
/// GridSpec::signed_index), columns kx = 0..n/2. The represented field is
///   f(x) = sum_k c_k exp(i xi_k . x)
/// over the full lattice, with c_{-k} = conj(c_k) implied.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(const GridSpec& g)
        : grid_(g), coef_(static_cast<size_t>(g.resolution) * g.spectral_cols()) {}

    const GridSpec& grid() const { return grid_; }
    int rows() const { return grid_.resolution; }
    int cols() const { return grid_.spectral_cols(); }

    complexd& at(int row, int col) { return coef_[static_cast<size_t>(row) * cols() + col]; }
    complexd at(int row, int col) const { return coef_[static_cast<size_t>(row) * cols() + col]; }

    std::vector<complexd>& data() { return coef_; }
    const std::vector<complexd>& data() const { return coef_; }

    /// Coefficient at signed lattice indices; kx may be negative, in which
    /// case the conjugate of the stored partner is returned.
    complexd coeff(int kx, int ky) const {
        if (kx >= 0) return at(grid_.row_of(ky), kx);
        return std::conj(at(grid_.row_of(-ky), -kx));
    }

    /// Set the pair of conjugate coefficients at +/-(kx,ky). For kx > 0 the
    /// stored entry is written; for kx == 0 both stored rows are written.
    void set_mode(int kx, int ky, complexd c) {
        if (kx < 0) { kx = -kx; ky = -ky; c = std::conj(c); }
        at(grid_.row_of(ky), kx) = c;
        if (kx == 0 || kx == grid_.resolution / 2)
            at(grid_.row_of(-ky), kx) = std::conj(c);
    }

    complexd mean_mode() const { return at(0, 0); }

    /// Restore exact Hermitian structure of the self-paired columns
    /// (kx = 0 and kx = n/2) after a raw transform.
    void enforce_hermitian() {
        const int n = grid_.resolution;
        for (int col : {0, n / 2}) {
            at(0, col) = complexd(at(0, col).real(), 0.0);
            at(n / 2, col) = complexd(at(n / 2, col).real(), 0.0);
            for (int ky = 1; ky < n / 2; ++ky) {
                complexd a = at(ky, col), b = at(n - ky, col);
                complexd h = 0.5 * (a + std::conj(b));
                at(ky, col) = h;
                at(n - ky, col) = std::conj(h);
            }
        }
    }

    /// Zero every mode with max(|kx|,|ky|) above the grid's dealias cutoff.
    void dealias() { truncate_square(grid_.dealias_limit()); }

    void truncate_square(int keep) {
        const int n = grid_.resolution;
        for (int row = 0; row < n; ++row) {
            int ky = grid_.signed_index(row);
            bool kill_row = std::abs(ky) > keep;
            for (int col = 0; col < cols(); ++col) {
                if (kill_row || col > keep) at(row, col) = 0.0;
            }
        }
    }

    SpectralField& operator+=(const SpectralField& o) {
        check_same_grid(o);
        for (size_t i = 0; i < coef_.size(); ++i) coef_[i] += o.coef_[i];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        check_same_grid(o);
        for (size_t i = 0; i < coef_.size(); ++i) coef_[i] -= o.coef_[i];
        return *this;
    }
    SpectralField& operator*=(double a) {
        for (auto& c : coef_) c *= a;
        return *this;
    }

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double a, SpectralField f) { return f *= a; }

    double max_coeff_abs() const {
        double m = 0.0;
        for (const auto& c : coef_) m = std::max(m, std::abs(c));
        return m;
    }

    bool has_nan() const {
        for (const auto& c : coef_)
            if (std::isnan(c.real()) || std::isnan(c.imag())) return true;
        return false;
    }

    void check_same_grid(const SpectralField& o) const {
        if (grid_ != o.grid_) throw std::invalid_argument("field grids differ");
    }

private:
    GridSpec grid_;
    std::vector<complexd> coef_;
};

/// Inverse transform: samples the represented trigonometric polynomial on
/// the grid. Exact inverse of from_physical to round-off.
inline PhysicalField to_physical(const SpectralField& f) {
    const int n = f.grid().resolution;
    const auto& plans = detail::fft_plans_for(n);
    std::vector<complexd> scratch(f.data()); // c2r destroys its input
    PhysicalField out(f.grid());
    fftw_execute_dft_c2r(plans.backward,
                         reinterpret_cast<fftw_complex*>(scratch.data()),
                         out.values.data());
    return out;
}

inline SpectralField from_physical(const PhysicalField& p) {
    const int n = p.grid.resolution;
    if (p.values.size() != static_cast<size_t>(n) * n)
        throw std::invalid_argument("from_physical: array dimensions do not match grid");
    const auto& plans = detail::fft_plans_for(n);
    std::vector<double> scratch(p.values);
    SpectralField out(p.grid);
    fftw_execute_dft_r2c(plans.forward, scratch.data(),
                         reinterpret_cast<fftw_complex*>(out.data().data()));
    const double inv = 1.0 / (static_cast<double>(n) * n);
    for (auto& c : out.data()) c *= inv;
    out.enforce_hermitian();
    return out;
}

/// Exact Fourier summation of the represented field at an arbitrary point.
inline double evaluate_at(const SpectralField& f, Vec2 p) {
    const GridSpec& g = f.grid();
    const int n = g.resolution;
    const int nc = g.spectral_cols();
    const double ux = two_pi * p.x / g.side_length;
    const double uy = two_pi * p.y / g.side_length;

    // per-axis phase tables
    std::vector<complexd> px(nc), py(n);
    for (int kx = 0; kx < nc; ++kx) px[kx] = std::polar(1.0, ux * kx);
    for (int row = 0; row < n; ++row) py[row] = std::polar(1.0, uy * g.signed_index(row));

    complexd acc(0.0, 0.0);
    for (int row = 0; row < n; ++row) {
        complexd rs0 = f.at(row, 0) * py[row];
        acc += rs0;
        complexd inner(0.0, 0.0);
        for (int kx = 1; kx < nc - 1; ++kx) inner += f.at(row, kx) * px[kx];
        acc += 2.0 * (inner * py[row]);
        // Nyquist column represents the single lattice index kx = -n/2
        acc += f.at(row, nc - 1) * std::conj(px[nc - 1]) * py[row];
    }
    // imaginary part cancels by Hermitian symmetry; discard round-off
    return acc.real();
}

/// Grid spectrum moved to a 2x finer grid (trigonometric interpolation).
/// Requires the Nyquist row/column to be empty (always true for dealiased
/// fields).
inline SpectralField upsample2(const SpectralField& f) {
    const GridSpec& g = f.grid();
    const int n = g.resolution;
    GridSpec fine(g.side_length, 2 * n, g.dealias_fraction);
    SpectralField out(fine);
    for (int row = 0; row < n; ++row) {
        int ky = g.signed_index(row);
        if (std::abs(ky) == n / 2) continue;
        for (int kx = 0; kx < g.spectral_cols() - 1; ++kx)
            out.at(fine.row_of(ky), kx) = f.at(row, kx);
    }
    return out;
}

/// Pointwise product computed in physical space; the result is dealiased.
inline SpectralField multiply_dealiased(const SpectralField& a, const SpectralField& b) {
    a.check_same_grid(b);
    PhysicalField pa = to_physical(a), pb = to_physical(b);
    for (size_t i = 0; i < pa.values.size(); ++i) pa.values[i] *= pb.values[i];
    SpectralField out = from_physical(pa);
    out.dealias();
    return out;
}

/// Two-component field; x and y live on the same grid.
struct VectorField {
    SpectralField x;
    SpectralField y;

    VectorField() = default;
    explicit VectorField(const GridSpec& g) : x(g), y(g) {}

    const GridSpec& grid() const { return x.grid(); }

    VectorField& operator+=(const VectorField& o) { x += o.x; y += o.y; return *this; }
    VectorField& operator-=(const VectorField& o) { x -= o.x; y -= o.y; return *this; }
    friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
};

inline Vec2 evaluate_at(const VectorField& v, Vec2 p) {
    return {evaluate_at(v.x, p), evaluate_at(v.y, p)};
}

} // namespace vw
