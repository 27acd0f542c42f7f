#pragma once

#include <cmath>

namespace lgt {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double k) const { return {x * k, y * k}; }
    constexpr Vec2 operator/(double k) const { return {x / k, y / k}; }
    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double k, Vec2 v) { return v * k; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double length(Vec2 v) { return std::hypot(v.x, v.y); }

/// Counterclockwise quarter turn, R_{pi/2}.
constexpr Vec2 rotate_ccw(Vec2 v) { return {-v.y, v.x}; }
/// Clockwise quarter turn, R_{-pi/2}.
constexpr Vec2 rotate_cw(Vec2 v) { return {v.y, -v.x}; }

constexpr Vec2 lerp(Vec2 a, Vec2 b, double t) { return a * (1.0 - t) + b * t; }

/// Symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct Sym2 {
    double xx = 1.0;
    double xy = 0.0;
    double yy = 1.0;

    constexpr double det() const { return xx * yy - xy * xy; }
    constexpr Vec2 apply(Vec2 v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
    constexpr double quad(Vec2 v) const { return dot(v, apply(v)); }
    constexpr Sym2 inverse() const {
        const double d = det();
        return {yy / d, -xy / d, xx / d};
    }
    constexpr bool positive_definite() const { return xx > 0.0 && det() > 0.0; }
};

}  // namespace lgt
