#pragma once

#include <cmath>
#include <complex>

namespace vw {

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double two_pi = 2.0 * pi;

using complexd = std::complex<double>;

/// Point / displacement in the plane.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double a) const { return {a * x, a * y}; }
    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }

    constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
    // counter-clockwise rotation by pi/2
    constexpr Vec2 perp() const { return {-y, x}; }
    double norm() const { return std::hypot(x, y); }
    constexpr double norm_sq() const { return x * x + y * y; }
};

inline constexpr Vec2 operator*(double a, Vec2 v) { return {a * v.x, a * v.y}; }

/// Shortest periodic representative of a displacement on a torus of side L,
/// component-wise mapped to [-L/2, L/2).
inline double wrap_delta(double d, double L) {
    d = std::fmod(d, L);
    if (d < -0.5 * L) d += L;
    if (d >= 0.5 * L) d -= L;
    return d;
}

inline Vec2 wrap_delta(Vec2 d, double L) {
    return {wrap_delta(d.x, L), wrap_delta(d.y, L)};
}

/// Position folded into the fundamental cell [0, L)^2.
inline Vec2 wrap_position(Vec2 p, double L) {
    auto fold = [L](double v) {
        v = std::fmod(v, L);
        if (v < 0.0) v += L;
        return v;
    };
    return {fold(p.x), fold(p.y)};
}

} // namespace vw
