#pragma once

#include <algorithm>
#include <cmath>

namespace swiftnav {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2& operator+=(const Vec2& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    double norm() const { return std::sqrt(x * x + y * y); }
    double norm_sq() const { return x * x + y * y; }
};

inline constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Rotate v counter-clockwise by angle [rad].
inline Vec2 rotate(const Vec2& v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Wrap to (-pi, pi].
inline double wrap_angle(double a) {
    double r = std::fmod(a + kPi, 2.0 * kPi);
    if (r <= 0.0) r += 2.0 * kPi;
    return r - kPi;
}

inline constexpr double deg2rad(double d) { return d * (kPi / 180.0); }
inline constexpr double rad2deg(double r) { return r * (180.0 / kPi); }

// Wrap a degree difference to (-180, 180].
inline double wrap_deg(double d) {
    double r = std::fmod(d + 180.0, 360.0);
    if (r <= 0.0) r += 360.0;
    return r - 180.0;
}

// Minimum distance from point p to segment [a, b].
inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len_sq = ab.norm_sq();
    if (len_sq <= 0.0) return distance(p, a);
    const double t = std::clamp(dot(p - a, ab) / len_sq, 0.0, 1.0);
    return distance(p, a + ab * t);
}

}  // namespace swiftnav
