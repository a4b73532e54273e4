#pragma once

#include <cmath>
#include <stdexcept>

#include "vw/geometry.hpp"

namespace vw {

/// Discretization of the periodic square [0, L)^2 with n points per axis.
///
/// The wavenumber lattice is xi = 2*pi*k/L with integer k in [-n/2, n/2)
/// per axis, closed under negation up to the identification of the Nyquist
/// index -n/2 with itself.
struct GridSpec {
    double side_length = two_pi;
    int resolution = 128;
    double dealias_fraction = 2.0 / 3.0;

    GridSpec() = default;
    GridSpec(double L, int n, double frac = 2.0 / 3.0)
        : side_length(L), resolution(n), dealias_fraction(frac) {
        validate();
    }

    void validate() const {
        if (!(side_length > 0.0))
            throw std::invalid_argument("GridSpec: side length must be positive");
        if (resolution < 4 || (resolution & (resolution - 1)) != 0)
            throw std::invalid_argument("GridSpec: resolution must be a power of two >= 4");
        if (!(dealias_fraction > 0.0) || dealias_fraction > 1.0)
            throw std::invalid_argument("GridSpec: dealias fraction must lie in (0, 1]");
    }

    double spacing() const { return side_length / resolution; }

    /// Number of stored spectral columns in Hermitian half-storage.
    int spectral_cols() const { return resolution / 2 + 1; }

    /// Signed wavenumber index of a storage row (0..n-1 -> -n/2..n/2-1).
    int signed_index(int row) const {
        return row < resolution / 2 ? row : row - resolution;
    }

    /// Storage row of a signed wavenumber index.
    int row_of(int k) const { return k >= 0 ? k : k + resolution; }

    /// Physical wavenumber of an integer lattice index.
    double xi(int k) const { return two_pi * k / side_length; }

    /// Largest retained integer index per axis under the dealias rule.
    int dealias_limit() const {
        return static_cast<int>(std::floor(dealias_fraction * resolution / 2.0));
    }

    /// Largest physical |xi| representable on the lattice (per axis).
    double xi_max_axis() const { return xi(resolution / 2); }

    Vec2 point(int ix, int iy) const {
        return {ix * spacing(), iy * spacing()};
    }

    bool operator==(const GridSpec& o) const {
        return side_length == o.side_length && resolution == o.resolution &&
               dealias_fraction == o.dealias_fraction;
    }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

} // namespace vw
