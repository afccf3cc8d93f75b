// Planar frame algebra for the dot-painting problem: the wall frame, the
// localization frame anchored at the take-off point, and the body frame.
// All angles are radians; degrees appear only at CLI/report boundaries.
#pragma once

#include <cmath>

namespace dotpaint {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
    Point2 operator-() const { return {-x, -y}; }
    Point2 operator*(double k) const { return {x * k, y * k}; }
    Point2& operator+=(const Point2& o) {
        x += o.x;
        y += o.y;
        return *this;
    }

    double norm() const { return std::hypot(x, y); }
    double norm_sq() const { return x * x + y * y; }
    double dot(const Point2& o) const { return x * o.x + y * o.y; }
};

inline Point2 operator*(double k, const Point2& p) { return p * k; }

/// Wraps an angle into (-pi, pi].
inline double normalize_angle(double a) {
    constexpr double two_pi = 2.0 * M_PI;
    double r = std::fmod(a + M_PI, two_pi);
    if (r <= 0.0) r += two_pi;
    return r - M_PI;
}

/// Counter-clockwise rotation of a vector by `angle`.
inline Point2 rotate(const Point2& p, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

struct Pose2 {
    Point2 position;
    double yaw = 0.0;  // radians, (-pi, pi]
};

// Wall-to-localization frame offset: the localization origin sits at
// `delta` (wall coordinates) and its axes are rotated by `gamma`.
// Mapping a point both ways:
//   rho  = R(gamma)^T (p_wall - delta)
//   wall = R(gamma) p_rho + delta
struct RigidTransform2 {
    double gamma = 0.0;  // radians, (-pi, pi]
    Point2 delta;        // meters
};

inline Point2 wall_to_rho(const Point2& p_wall, const RigidTransform2& t) {
    return rotate(p_wall - t.delta, -t.gamma);
}

inline Point2 rho_to_wall(const Point2& p_rho, const RigidTransform2& t) {
    return rotate(p_rho, t.gamma) + t.delta;
}

}  // namespace dotpaint
