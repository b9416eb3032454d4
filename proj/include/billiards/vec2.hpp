#ifndef BILLIARDS_VEC2_HPP
#define BILLIARDS_VEC2_HPP

#include <cmath>

namespace billiards {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double c) const { return {c * x, c * y}; }
    Vec2 operator-() const { return {-x, -y}; }

    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }

    Vec2 normalized() const {
        double n = norm();
        return {x / n, y / n};
    }
};

inline Vec2 operator*(double c, const Vec2& v) { return {c * v.x, c * v.y}; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

// z-component of the 3D cross product; positive when b is
// counterclockwise from a.
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

} // namespace billiards

#endif
