// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#pragma once

#include <complex>
#include <span>
#include <vector>

#include "radint/geometry.hpp"
#include "radint/scenario.hpp"

namespace radint {

enum class PathKind
{
    direct,
    wall_reflect_upper,  // wall at +y
    wall_reflect_lower   // wall at -y
};

struct PropagationPath
{
    PathKind kind = PathKind::direct;
    double length = 0.0;           // m
    double departure_angle = 0.0;  // rad, world, leaving the transmitter
    double arrival_angle = 0.0;    // rad, world, direction the receiver looks to
    std::complex<double> reflection_coeff{1.0, 0.0};
    bool blocked = false;
    Vec2 bounce_point;  // direct paths: unused
    double incidence_angle = 0.0;  // rad from the wall normal
};

/// Wall material. The default is the 3 cm concrete plate value.
struct MaterialModel
{
    std::complex<double> refractive_index{2.52, -0.076};
    void validate() const;
};

/// Vehicle footprints indexed along x for fast segment queries.
class BlockerIndex
{
  public:
    explicit BlockerIndex(std::span<const Footprint> footprints);

    /// True iff the open segment pq crosses any footprint whose vehicle id is
    /// not in `exclude_ids`.
    bool blocked(Vec2 p, Vec2 q, std::span<const int> exclude_ids) const;
    std::span<const Footprint> footprints() const { return sorted_; }

  private:
    std::vector<Footprint> sorted_;
    double max_reach_ = 0.0;
};

/// Open segment pq against one oriented rectangle.
bool segment_intersects(Vec2 p, Vec2 q, const Footprint& rect);

/// Linear scan over all footprints; BlockerIndex gives the same answer faster.
bool segment_blocked(Vec2 p, Vec2 q, std::span<const Footprint> vehicles,
                     std::span<const int> exclude_ids);

/// Everything `paths` needs from the scene.
struct PathContext
{
    const BlockerIndex* blockers = nullptr;  // null: nothing blocks
    double wall_distance = 11.5;             // |y| of both wall lines
    double span_min_x = -1e300;              // walls exist for x in [min, max]
    double span_max_x = 1e300;
    bool walls = true;
    MaterialModel material;
};

/// Geometry of the direct path and one image-method bounce per wall. Blockage
/// is not evaluated.
std::vector<PropagationPath> path_geometry(Vec2 tx, Vec2 rx, const PathContext& ctx);

/// Evaluates blockage on every leg of `path`.
void evaluate_blockage(PropagationPath& path, Vec2 tx, Vec2 rx, const PathContext& ctx,
                       std::span<const int> exclude_ids);

/// Direct path plus single wall bounces, with blockage status.
std::vector<PropagationPath> paths(Vec2 tx, Vec2 rx, const PathContext& ctx,
                                   std::span<const int> exclude_ids = {});

/// Fresnel coefficient R'_p for vertical polarization at the air/wall
/// interface; theta measured from the wall normal.
std::complex<double> fresnel_reflection(double theta, const MaterialModel& material = {});

enum class GainPattern
{
    sector,      // flat inside the FOV, zero outside
    cosine_power
};

/// A radar as seen by the propagation model.
struct RadarEndpoint
{
    RadarPose pose;
    WaveformConfig waveform;  // effective (drifted) waveform
    int vehicle_id = -1;
    GainPattern pattern = GainPattern::sector;
    double cosine_exponent = 2.0;
};

RadarEndpoint make_endpoint(const Footprint& vehicle, const RadarInstance& radar);

/// Aggregate antenna gain toward `angle` (world).
double antenna_gain(const RadarEndpoint& radar, double angle);

/// Friis one-way power gain of an unblocked path, including both antennas and
/// |R|^2 for reflections. Throws DomainError for a blocked path.
double one_way_gain(const PropagationPath& path, const RadarEndpoint& tx,
                    const RadarEndpoint& rx);

/// Monostatic radar equation. Zero when the target is outside the FOV, or
/// blocked (only checked when `blockers` is given).
double echo_power(const RadarEndpoint& radar, Vec2 target, double rcs,
                  const BlockerIndex* blockers = nullptr);

}  // namespace radint
