// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radint/geometry.hpp"
#include "radint/rng.hpp"
#include "radint/waveform.hpp"

namespace radint {

enum class VehicleKind
{
    car,
    truck
};

enum class Polarization
{
    V,
    H
};

/// Placement class of a radar on its vehicle; keys the predefined-frequency
/// band plan.
enum class MountClass
{
    front_center,
    rear_center,
    front_corner,
    rear_corner
};

enum class Topology
{
    front,
    partial,
    full
};

enum class DensityLabel
{
    low,
    medium,
    high
};

std::string_view to_string(Topology t);
std::string_view to_string(DensityLabel d);
std::string_view to_string(MountClass m);
Topology parse_topology(std::string_view name);
DensityLabel parse_density(std::string_view name);
/// Vehicle count of a canonical scene: 49, 143 or 334.
int density_vehicle_count(DensityLabel d);

struct FrequencyBand
{
    double lo = 0.0;  // Hz
    double hi = 0.0;  // Hz
    bool operator==(const FrequencyBand&) const = default;
};

struct TfSlot
{
    int band = 0;
    int slot = 0;
    bool operator==(const TfSlot&) const = default;
};

struct RadarInstance
{
    int uid = 0;  // unique within a scenario
    Vec2 mount;   // m, vehicle frame (x forward, y left)
    double boresight = 0.0;      // rad relative to heading
    double fov_halfwidth = 0.0;  // rad
    RadarType type = RadarType::LRR;
    MountClass mount_class = MountClass::front_center;
    WaveformConfig waveform;  // nominal (before clock drift)
    ClockModel clock;
    Polarization polarization = Polarization::V;
    std::optional<FrequencyBand> band_assignment;
    std::optional<TfSlot> tf_slot;
    double dither_bound = 0.0;  // s, upper bound of per-chirp start jitter

    /// Waveform as actually transmitted: nominal with clock drift applied.
    WaveformConfig effective_waveform() const { return apply_clock_drift(waveform, clock); }
    bool operator==(const RadarInstance&) const = default;
};

struct Vehicle
{
    int id = 0;
    VehicleKind kind = VehicleKind::car;
    Vec2 center;           // m, world
    double heading = 0.0;  // 0 (forward direction) or pi (oncoming)
    double speed = 0.0;    // m/s
    double width = 2.0;
    double length = 5.0;
    int lane = 0;
    std::vector<RadarInstance> radars;

    Footprint footprint() const { return {id, center, heading, width, length}; }
    bool operator==(const Vehicle&) const = default;
};

/// Six-lane highway along +x with a wall beyond each outer lane edge.
/// Lanes 0..n-1 carry forward traffic (y < 0), lanes n..2n-1 oncoming
/// traffic (y > 0). Lane 0 and lane n border the median.
struct RoadGeometry
{
    int n_lanes_per_direction = 3;
    double lane_width = 3.5;
    double road_length = 1000.0;
    double wall_offset = 1.0;

    /// |y| of both wall lines.
    double wall_distance() const { return n_lanes_per_direction * lane_width + wall_offset; }
    double total_width() const { return 2.0 * wall_distance(); }
    double lane_center_y(int lane) const;
    bool is_forward_lane(int lane) const { return lane < n_lanes_per_direction; }
    void validate() const;
    bool operator==(const RoadGeometry&) const = default;
};

enum class TargetFrame
{
    host,
    world
};

/// Point reflector used for PD accounting.
struct ReferenceTarget
{
    TargetFrame frame = TargetFrame::host;
    double range = 100.0;   // m, host frame: along the host radar boresight
    double azimuth = 0.0;   // rad, host frame: relative to boresight
    Vec2 world_position;    // m, world frame only
    double rcs = 10.0;      // m^2 (10 dBsm)
    double radial_speed = 0.0;  // m/s, positive = receding
    /// Virtual reflectors are exempt from vehicle blockage by default.
    bool blockable = false;
    bool operator==(const ReferenceTarget&) const = default;
};

struct Scenario
{
    RoadGeometry geometry;
    std::vector<Vehicle> vehicles;
    int host_vehicle_id = 0;
    int host_radar_index = 0;
    ReferenceTarget target;
    double duration = 10.0;  // s
    DensityLabel density_label = DensityLabel::low;

    const Vehicle& host_vehicle() const;
    Vehicle& host_vehicle();
    std::size_t host_vehicle_index() const;
    const RadarInstance& host_radar() const;
    std::size_t radar_count() const;
    bool operator==(const Scenario&) const = default;
};

struct HighwayOptions
{
    double truck_fraction = 0.1;
    /// Condition the placement on the canonical count instead of leaving it Poisson.
    bool exact_count = true;
    double min_gap = 2.0;  // m, bumper to bumper
    double speed_min = 25.0;
    double speed_max = 38.0;
    double duration = 10.0;
    /// Overrides the canonical count (0 = use the density label).
    int vehicle_count = 0;
};

/// Places vehicles lane by lane with exponential bumper gaps whose mean is
/// tuned to the density target. The host is vehicle 0, a car mid-road in the
/// centre forward lane. No radars are installed.
Scenario generate_highway(DensityLabel density, const RoadGeometry& geometry,
                          const HighwayOptions& options, Rng& rng);
Scenario generate_highway(DensityLabel density, const RoadGeometry& geometry,
                          double truck_fraction, Rng& rng);

double default_fov_halfwidth(RadarType type);

/// Installs the topology's radar set. Each radar gets an independent
/// waveform draw, clock draw (uniform within +-max_drift_ppm) and start offset
/// uniform in [0, PRI).
Vehicle install_radars(Vehicle vehicle, Topology topology, Rng& rng,
                       const WaveformTable& table = WaveformTable{},
                       double max_drift_ppm = 20.0);

/// Installs one radar of `type` at its canonical mount (used to add a host
/// radar the topology lacks). Returns its index in vehicle.radars.
int add_radar(Vehicle& vehicle, RadarType type, Rng& rng,
              const WaveformTable& table = WaveformTable{}, double max_drift_ppm = 20.0);

/// Installs `topology` on every vehicle and selects the host radar of
/// `host_type`, adding it to the host vehicle if the topology has none.
void equip_scenario(Scenario& scenario, Topology topology, RadarType host_type, Rng& rng,
                    const WaveformTable& table = WaveformTable{}, double max_drift_ppm = 20.0);

/// Each non-host vehicle keeps its radars with probability `rate`.
Scenario assign_penetration(Scenario scenario, double rate, Rng& rng);

/// Vehicle footprints at time t, in scenario vehicle order.
struct Snapshot
{
    double time = 0.0;
    std::vector<Footprint> footprints;
};

/// Moves every vehicle speed * t along its heading, wrapping x into
/// [0, road_length).
Snapshot advance(const Scenario& scenario, double t);

/// Re-wraps x so that every vehicle lies within half a road length of the
/// host (minimum-image convention on the toroidal road).
Snapshot host_centered(const Snapshot& snapshot, const Scenario& scenario);

/// World pose of a mounted radar.
struct RadarPose
{
    Vec2 position;
    double boresight = 0.0;  // rad, world
    double fov_halfwidth = 0.0;
};

RadarPose radar_pose(const Footprint& vehicle, const RadarInstance& radar);

/// Target position in world coordinates given the host pose.
Vec2 target_position(const ReferenceTarget& target, const RadarPose& host);

/// Structured-text serialization (JSON). Sufficient to replay a run.
std::string serialize_scenario(const Scenario& scenario);
Scenario parse_scenario(std::string_view text);

}  // namespace radint
