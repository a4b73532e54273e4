#pragma once

#include <cmath>

#include "vw/field.hpp"
#include "vw/special.hpp"

namespace vw {

/// C-infinity smoothstep rising 0 -> 1 on [0, 1] (all derivatives vanish at
/// the endpoints). Used by the field generators where fast spectral decay
/// of the transition matters.
inline double smoothstep_rise(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = std::exp(-1.0 / t);
    double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

namespace detail {

template <typename Fn>
SpectralField sample_radial(const GridSpec& g, Vec2 center, Fn&& profile) {
    PhysicalField p(g);
    for (int iy = 0; iy < g.resolution; ++iy)
        for (int ix = 0; ix < g.resolution; ++ix) {
            Vec2 d = wrap_delta(g.point(ix, iy) - center, g.side_length);
            p.at(ix, iy) = profile(d.norm());
        }
    SpectralField f = from_physical(p);
    f.dealias();
    return f;
}

} // namespace detail

inline SpectralField make_gaussian_blob(const GridSpec& g, Vec2 center, double width,
                                        double amplitude) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian-blob: width must be positive");
    return detail::sample_radial(g, center, [&](double r) {
        return amplitude * std::exp(-r * r / (2.0 * width * width));
    });
}

inline SpectralField make_annulus(const GridSpec& g, Vec2 center, double radius, double width,
                                  double amplitude) {
    if (!(width > 0.0) || !(radius > 0.0))
        throw std::invalid_argument("annulus: radius and width must be positive");
    return detail::sample_radial(g, center, [&](double r) {
        double d = r - radius;
        return amplitude * std::exp(-d * d / (2.0 * width * width));
    });
}

/// theta = beta exactly on B(center, inner_radius), smoothly descending to
/// zero at outer_radius.
inline SpectralField make_plateau_patch(const GridSpec& g, Vec2 center, double beta,
                                        double inner_radius, double outer_radius) {
    if (!(inner_radius > 0.0) || !(outer_radius > inner_radius))
        throw std::invalid_argument("plateau-patch: need 0 < inner_radius < outer_radius");
    const double span = outer_radius - inner_radius;
    return detail::sample_radial(g, center, [&](double r) {
        return beta * (1.0 - smoothstep_rise((r - inner_radius) / span));
    });
}

} // namespace vw
