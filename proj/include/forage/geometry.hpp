#pragma once

#include <cmath>
#include <numbers>

namespace forage {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
inline Vec2 unit_from_angle(double radians) { return {std::cos(radians), std::sin(radians)}; }

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Maps any angle into [0, 2π).
inline double wrap_angle(double a) {
    double w = std::fmod(a, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

/// Signed smallest difference a - b in (-π, π].
inline double angle_diff(double a, double b) {
    double d = std::fmod(a - b, kTwoPi);
    if (d > std::numbers::pi) d -= kTwoPi;
    if (d <= -std::numbers::pi) d += kTwoPi;
    return d;
}

inline double heading_of(Vec2 v) { return wrap_angle(std::atan2(v.y, v.x)); }

struct Segment {
    Vec2 a;
    Vec2 b;
};

inline Vec2 closest_point(const Segment& s, Vec2 p) {
    const Vec2 d = s.b - s.a;
    const double len2 = dot(d, d);
    if (len2 == 0.0) return s.a;
    double t = dot(p - s.a, d) / len2;
    t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
    return s.a + d * t;
}

inline double distance_to_segment(const Segment& s, Vec2 p) { return distance(p, closest_point(s, p)); }

/// True when the closed segments share at least one point.
bool segments_intersect(const Segment& s1, const Segment& s2);

}  // namespace forage
