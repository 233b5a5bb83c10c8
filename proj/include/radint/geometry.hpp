// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#pragma once

#include <cmath>

namespace radint {

struct Vec2
{
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr bool operator==(const Vec2&) const = default;

    double norm() const { return std::hypot(x, y); }
    double angle() const { return std::atan2(y, x); }
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

inline Vec2 rotate(Vec2 v, double angle)
{
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Oriented rectangle: a vehicle footprint in world coordinates.
struct Footprint
{
    int vehicle_id = -1;
    Vec2 center;
    double heading = 0.0;  // rad, direction of the length axis
    double width = 0.0;
    double length = 0.0;

    bool contains(Vec2 p) const
    {
        const Vec2 local = rotate(p - center, -heading);
        return std::abs(local.x) <= 0.5 * length && std::abs(local.y) <= 0.5 * width;
    }
};

}  // namespace radint
