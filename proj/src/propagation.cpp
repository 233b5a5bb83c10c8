// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#include "radint/propagation.hpp"

#include <algorithm>
#include <cmath>

#include "radint/common.hpp"

namespace radint {

void MaterialModel::validate() const
{
    if (!(refractive_index.real() > 1.0))
    {
        throw ConfigError("wall refractive index must have Re(n) > 1");
    }
}

bool segment_intersects(Vec2 p, Vec2 q, const Footprint& rect)
{
    // Liang-Barsky clip in the rectangle frame.
    const Vec2 a = rotate(p - rect.center, -rect.heading);
    const Vec2 b = rotate(q - rect.center, -rect.heading);
    const Vec2 d = b - a;
    const double hx = 0.5 * rect.length;
    const double hy = 0.5 * rect.width;
    double t0 = 0.0;
    double t1 = 1.0;
    auto clip = [&](double denom, double num) {
        // Requires denom * t <= num.
        if (denom == 0.0)
        {
            return num >= 0.0;
        }
        const double t = num / denom;
        if (denom > 0)
        {
            t1 = std::min(t1, t);
        }
        else
        {
            t0 = std::max(t0, t);
        }
        return t0 < t1;
    };
    return clip(d.x, hx - a.x) && clip(-d.x, hx + a.x) && clip(d.y, hy - a.y) &&
           clip(-d.y, hy + a.y) && t0 < t1;
}

bool segment_blocked(Vec2 p, Vec2 q, std::span<const Footprint> vehicles,
                     std::span<const int> exclude_ids)
{
    for (const auto& f : vehicles)
    {
        if (std::find(exclude_ids.begin(), exclude_ids.end(), f.vehicle_id) != exclude_ids.end())
        {
            continue;
        }
        if (segment_intersects(p, q, f))
        {
            return true;
        }
    }
    return false;
}

BlockerIndex::BlockerIndex(std::span<const Footprint> footprints)
    : sorted_(footprints.begin(), footprints.end())
{
    std::sort(sorted_.begin(), sorted_.end(),
              [](const Footprint& a, const Footprint& b) { return a.center.x < b.center.x; });
    for (const auto& f : sorted_)
    {
        max_reach_ = std::max(max_reach_, 0.5 * std::hypot(f.length, f.width));
    }
}

bool BlockerIndex::blocked(Vec2 p, Vec2 q, std::span<const int> exclude_ids) const
{
    const double lo = std::min(p.x, q.x) - max_reach_;
    const double hi = std::max(p.x, q.x) + max_reach_;
    auto it = std::lower_bound(sorted_.begin(), sorted_.end(), lo,
                               [](const Footprint& f, double x) { return f.center.x < x; });
    const double ylo = std::min(p.y, q.y) - max_reach_;
    const double yhi = std::max(p.y, q.y) + max_reach_;
    for (; it != sorted_.end() && it->center.x <= hi; ++it)
    {
        if (it->center.y < ylo || it->center.y > yhi)
        {
            continue;
        }
        if (std::find(exclude_ids.begin(), exclude_ids.end(), it->vehicle_id) != exclude_ids.end())
        {
            continue;
        }
        if (segment_intersects(p, q, *it))
        {
            return true;
        }
    }
    return false;
}

std::vector<PropagationPath> path_geometry(Vec2 tx, Vec2 rx, const PathContext& ctx)
{
    std::vector<PropagationPath> out;
    const Vec2 d = rx - tx;
    if (d.norm() == 0.0)
    {
        throw DomainError("path endpoints coincide");
    }
    PropagationPath direct;
    direct.kind = PathKind::direct;
    direct.length = d.norm();
    direct.departure_angle = d.angle();
    direct.arrival_angle = (tx - rx).angle();
    out.push_back(direct);
    if (!ctx.walls)
    {
        return out;
    }

    for (double wall_y : {ctx.wall_distance, -ctx.wall_distance})
    {
        const Vec2 image{tx.x, 2.0 * wall_y - tx.y};
        const double denom = image.y - rx.y;
        if (denom == 0.0)
        {
            continue;
        }
        // Both endpoints must be on the road side of the wall.
        if ((tx.y - wall_y) * (rx.y - wall_y) <= 0.0)
        {
            continue;
        }
        const double s = (wall_y - rx.y) / denom;
        const Vec2 bounce = rx + (image - rx) * s;
        if (bounce.x < ctx.span_min_x || bounce.x > ctx.span_max_x)
        {
            continue;
        }
        PropagationPath p;
        p.kind = wall_y > 0 ? PathKind::wall_reflect_upper : PathKind::wall_reflect_lower;
        p.length = (image - rx).norm();
        p.bounce_point = bounce;
        p.departure_angle = (bounce - tx).angle();
        p.arrival_angle = (bounce - rx).angle();
        p.incidence_angle = std::atan2(std::abs(rx.x - tx.x), std::abs(image.y - rx.y));
        p.reflection_coeff = fresnel_reflection(p.incidence_angle, ctx.material);
        out.push_back(p);
    }
    return out;
}

void evaluate_blockage(PropagationPath& path, Vec2 tx, Vec2 rx, const PathContext& ctx,
                       std::span<const int> exclude_ids)
{
    if (ctx.blockers == nullptr)
    {
        path.blocked = false;
        return;
    }
    if (path.kind == PathKind::direct)
    {
        path.blocked = ctx.blockers->blocked(tx, rx, exclude_ids);
    }
    else
    {
        path.blocked = ctx.blockers->blocked(tx, path.bounce_point, exclude_ids) ||
                       ctx.blockers->blocked(path.bounce_point, rx, exclude_ids);
    }
}

std::vector<PropagationPath> paths(Vec2 tx, Vec2 rx, const PathContext& ctx,
                                   std::span<const int> exclude_ids)
{
    auto out = path_geometry(tx, rx, ctx);
    for (auto& p : out)
    {
        evaluate_blockage(p, tx, rx, ctx, exclude_ids);
    }
    return out;
}

std::complex<double> fresnel_reflection(double theta, const MaterialModel& material)
{
    const std::complex<double> n2 = material.refractive_index * material.refractive_index;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const std::complex<double> root = std::sqrt(n2 - s * s);
    return (n2 * c - root) / (n2 * c + root);
}

RadarEndpoint make_endpoint(const Footprint& vehicle, const RadarInstance& radar)
{
    RadarEndpoint e;
    e.pose = radar_pose(vehicle, radar);
    e.waveform = radar.effective_waveform();
    e.vehicle_id = vehicle.vehicle_id;
    return e;
}

double antenna_gain(const RadarEndpoint& radar, double angle)
{
    const double off = std::abs(wrap_angle(angle - radar.pose.boresight));
    if (off > radar.pose.fov_halfwidth)
    {
        return 0.0;
    }
    const double peak = radar.waveform.antenna_gain();
    if (radar.pattern == GainPattern::cosine_power)
    {
        return peak * std::pow(std::cos(off), radar.cosine_exponent);
    }
    return peak;
}

double one_way_gain(const PropagationPath& path, const RadarEndpoint& tx, const RadarEndpoint& rx)
{
    if (path.blocked)
    {
        throw DomainError("one_way_gain of a blocked path");
    }
    const double g_tx = antenna_gain(tx, path.departure_angle);
    const double g_rx = antenna_gain(rx, path.arrival_angle);
    if (g_tx == 0.0 || g_rx == 0.0)
    {
        return 0.0;
    }
    const double spread = tx.waveform.wavelength() / (4.0 * kPi * path.length);
    return g_tx * g_rx * std::norm(path.reflection_coeff) * spread * spread;
}

double echo_power(const RadarEndpoint& radar, Vec2 target, double rcs, const BlockerIndex* blockers)
{
    const Vec2 d = target - radar.pose.position;
    const double range = d.norm();
    const double g = antenna_gain(radar, d.angle());
    if (g == 0.0 || range == 0.0)
    {
        return 0.0;
    }
    if (blockers != nullptr)
    {
        const int self[] = {radar.vehicle_id};
        if (blockers->blocked(radar.pose.position, target, self))
        {
            return 0.0;
        }
    }
    const double lambda = radar.waveform.wavelength();
    const double four_pi_cubed = std::pow(4.0 * kPi, 3);
    return radar.waveform.total_tx_power() * g * g * lambda * lambda * rcs /
           (four_pi_cubed * std::pow(range, 4));
}

}  // namespace radint
