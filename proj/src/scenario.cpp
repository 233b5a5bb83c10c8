// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#include "radint/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "json.hpp"
#include "radint/common.hpp"

namespace radint {

using nlohmann::json;

std::string_view to_string(Topology t)
{
    switch (t)
    {
    case Topology::front: return "front";
    case Topology::partial: return "partial";
    case Topology::full: return "full";
    }
    return "?";
}

std::string_view to_string(DensityLabel d)
{
    switch (d)
    {
    case DensityLabel::low: return "low";
    case DensityLabel::medium: return "medium";
    case DensityLabel::high: return "high";
    }
    return "?";
}

std::string_view to_string(MountClass m)
{
    switch (m)
    {
    case MountClass::front_center: return "front_center";
    case MountClass::rear_center: return "rear_center";
    case MountClass::front_corner: return "front_corner";
    case MountClass::rear_corner: return "rear_corner";
    }
    return "?";
}

Topology parse_topology(std::string_view name)
{
    if (name == "front") return Topology::front;
    if (name == "partial") return Topology::partial;
    if (name == "full") return Topology::full;
    throw ConfigError(fmt::format("unknown topology '{}'", name));
}

DensityLabel parse_density(std::string_view name)
{
    if (name == "low") return DensityLabel::low;
    if (name == "medium") return DensityLabel::medium;
    if (name == "high") return DensityLabel::high;
    throw ConfigError(fmt::format("unknown density label '{}'", name));
}

int density_vehicle_count(DensityLabel d)
{
    switch (d)
    {
    case DensityLabel::low: return 49;
    case DensityLabel::medium: return 143;
    case DensityLabel::high: return 334;
    }
    return 0;
}

double RoadGeometry::lane_center_y(int lane) const
{
    if (is_forward_lane(lane))
    {
        return -(lane + 0.5) * lane_width;
    }
    return (lane - n_lanes_per_direction + 0.5) * lane_width;
}

void RoadGeometry::validate() const
{
    if (n_lanes_per_direction != 3)
    {
        throw ConfigError("the highway model has exactly three lanes per direction");
    }
    if (!(lane_width > 2.6 && road_length > 0 && wall_offset >= 0))
    {
        throw ConfigError("invalid road geometry");
    }
}

const Vehicle& Scenario::host_vehicle() const
{
    return vehicles.at(host_vehicle_index());
}

Vehicle& Scenario::host_vehicle()
{
    return vehicles.at(host_vehicle_index());
}

std::size_t Scenario::host_vehicle_index() const
{
    for (std::size_t i = 0; i < vehicles.size(); ++i)
    {
        if (vehicles[i].id == host_vehicle_id)
        {
            return i;
        }
    }
    throw ConfigError(fmt::format("host vehicle {} not in scenario", host_vehicle_id));
}

const RadarInstance& Scenario::host_radar() const
{
    return host_vehicle().radars.at(static_cast<std::size_t>(host_radar_index));
}

std::size_t Scenario::radar_count() const
{
    std::size_t n = 0;
    for (const auto& v : vehicles)
    {
        n += v.radars.size();
    }
    return n;
}

namespace {

struct LaneVehicle
{
    VehicleKind kind;
    double length;
    double width;
};

LaneVehicle make_kind(VehicleKind kind)
{
    return kind == VehicleKind::car ? LaneVehicle{kind, 5.0, 2.0}
                                    : LaneVehicle{kind, 13.0, 2.6};
}

// Positions along a ring of circumference L for vehicles whose gaps are
// exponential conditioned on the ring closing exactly.
std::vector<double> place_exact(const std::vector<LaneVehicle>& lane, double first_x,
                                double road_length, double min_gap, Rng& rng)
{
    const double occupied = std::accumulate(lane.begin(), lane.end(), 0.0,
                                            [](double s, const LaneVehicle& v) {
                                                return s + v.length;
                                            });
    const double free = road_length - occupied - min_gap * static_cast<double>(lane.size());
    if (free < 0)
    {
        throw ConfigError("lane cannot hold the requested vehicles with the minimum gap");
    }
    std::vector<double> gaps(lane.size());
    for (auto& g : gaps)
    {
        g = rng.exponential(1.0);
    }
    const double total = std::accumulate(gaps.begin(), gaps.end(), 0.0);
    std::vector<double> xs(lane.size());
    double x = first_x;
    for (std::size_t i = 0; i < lane.size(); ++i)
    {
        xs[i] = std::fmod(x, road_length);
        if (i + 1 < lane.size())
        {
            x += 0.5 * lane[i].length + min_gap + gaps[i] * free / total +
                 0.5 * lane[i + 1].length;
        }
    }
    return xs;
}

}  // namespace

Scenario generate_highway(DensityLabel density, const RoadGeometry& geometry,
                          double truck_fraction, Rng& rng)
{
    HighwayOptions options;
    options.truck_fraction = truck_fraction;
    return generate_highway(density, geometry, options, rng);
}

Scenario generate_highway(DensityLabel density, const RoadGeometry& geometry,
                          const HighwayOptions& options, Rng& rng)
{
    geometry.validate();
    if (!(options.truck_fraction >= 0 && options.truck_fraction <= 1))
    {
        throw ConfigError("truck fraction must lie in [0, 1]");
    }
    const int n_total =
        options.vehicle_count > 0 ? options.vehicle_count : density_vehicle_count(density);
    const int n_lanes = 2 * geometry.n_lanes_per_direction;
    const int host_lane = 1;
    const double L = geometry.road_length;
    const double mean_length = 5.0 + options.truck_fraction * (13.0 - 5.0);

    std::vector<int> per_lane(static_cast<std::size_t>(n_lanes), n_total / n_lanes);
    for (int i = 0; i < n_total % n_lanes; ++i)
    {
        ++per_lane[static_cast<std::size_t>(i)];
    }
    per_lane[host_lane] = std::max(per_lane[host_lane], 1);

    const double speed_forward = rng.uniform(options.speed_min, options.speed_max);
    const double speed_oncoming = rng.uniform(options.speed_min, options.speed_max);

    Scenario scenario;
    scenario.geometry = geometry;
    scenario.density_label = density;
    scenario.duration = options.duration;
    scenario.host_vehicle_id = 0;
    scenario.host_radar_index = 0;

    int next_id = 1;
    std::vector<Vehicle> others;
    for (int lane = 0; lane < n_lanes; ++lane)
    {
        const int n = per_lane[static_cast<std::size_t>(lane)];
        if (n == 0)
        {
            continue;
        }
        const double mean_spacing = L / n;
        if (mean_spacing - mean_length < options.min_gap)
        {
            throw ConfigError(fmt::format(
                "density target of {} vehicles per lane is unreachable on a {} m road",
                n, L));
        }
        const bool is_host_lane = lane == host_lane;
        std::vector<LaneVehicle> kinds;
        if (options.exact_count)
        {
            for (int i = 0; i < n; ++i)
            {
                const bool truck = !(is_host_lane && i == 0) && rng.bernoulli(options.truck_fraction);
                kinds.push_back(make_kind(truck ? VehicleKind::truck : VehicleKind::car));
            }
        }
        const double first_x = is_host_lane ? 0.5 * L : rng.uniform(0.0, L);
        std::vector<double> xs;
        if (options.exact_count)
        {
            xs = place_exact(kinds, first_x, L, options.min_gap, rng);
        }
        else
        {
            // Free-running renewal process: the count fluctuates around n.
            const double mean_gap = mean_spacing - mean_length - options.min_gap;
            double x = first_x;
            double travelled = 0.0;
            kinds.push_back(make_kind(VehicleKind::car));
            xs.push_back(first_x);
            while (true)
            {
                const bool truck = rng.bernoulli(options.truck_fraction);
                const LaneVehicle next = make_kind(truck ? VehicleKind::truck : VehicleKind::car);
                const double step = 0.5 * kinds.back().length + options.min_gap +
                                    rng.exponential(mean_gap) + 0.5 * next.length;
                // The ring must still leave room before the first vehicle.
                if (travelled + step + 0.5 * next.length + options.min_gap +
                        0.5 * kinds.front().length > L)
                {
                    break;
                }
                travelled += step;
                x += step;
                kinds.push_back(next);
                xs.push_back(std::fmod(x, L));
            }
        }
        const bool forward = geometry.is_forward_lane(lane);
        for (std::size_t i = 0; i < xs.size(); ++i)
        {
            Vehicle v;
            v.kind = kinds[i].kind;
            v.length = kinds[i].length;
            v.width = kinds[i].width;
            v.center = {xs[i], geometry.lane_center_y(lane)};
            v.heading = forward ? 0.0 : kPi;
            v.speed = forward ? speed_forward : speed_oncoming;
            v.lane = lane;
            if (is_host_lane && i == 0)
            {
                v.id = 0;
                scenario.vehicles.push_back(std::move(v));
            }
            else
            {
                v.id = next_id++;
                others.push_back(std::move(v));
            }
        }
    }
    for (auto& v : others)
    {
        scenario.vehicles.push_back(std::move(v));
    }
    return scenario;
}

double default_fov_halfwidth(RadarType type)
{
    switch (type)
    {
    case RadarType::LRR: return deg_to_rad(15.0);
    case RadarType::SRR: return deg_to_rad(60.0);
    case RadarType::SBZA: return deg_to_rad(75.0);
    case RadarType::USRR: return deg_to_rad(60.0);
    }
    return 0.0;
}

namespace {

struct MountSpec
{
    RadarType type;
    MountClass mount_class;
    double x_frac;  // of half length
    double y_frac;  // of half width
    double boresight;
};

// Radar order: front LRR, rear-left SBZA, rear-right SBZA, front SRR,
// rear SRR, front-left SBZA, front-right SBZA.
constexpr MountSpec kMounts[] = {
    {RadarType::LRR, MountClass::front_center, 1.0, 0.0, 0.0},
    {RadarType::SBZA, MountClass::rear_corner, -1.0, 1.0, kPi - kPi / 4},
    {RadarType::SBZA, MountClass::rear_corner, -1.0, -1.0, -(kPi - kPi / 4)},
    {RadarType::SRR, MountClass::front_center, 1.0, -0.3, 0.0},
    {RadarType::SRR, MountClass::rear_center, -1.0, 0.0, kPi},
    {RadarType::SBZA, MountClass::front_corner, 1.0, 1.0, kPi / 4},
    {RadarType::SBZA, MountClass::front_corner, 1.0, -1.0, -kPi / 4},
};

std::size_t topology_size(Topology t)
{
    switch (t)
    {
    case Topology::front: return 1;
    case Topology::partial: return 3;
    case Topology::full: return 7;
    }
    throw ConfigError("unknown topology");
}

RadarInstance make_radar(const Vehicle& vehicle, const MountSpec& spec, int uid, Rng& rng,
                         const WaveformTable& table, double max_drift_ppm)
{
    RadarInstance r;
    r.uid = uid;
    r.type = spec.type;
    r.mount_class = spec.mount_class;
    r.mount = {spec.x_frac * 0.5 * vehicle.length, spec.y_frac * 0.5 * vehicle.width};
    r.boresight = spec.boresight;
    r.fov_halfwidth = default_fov_halfwidth(spec.type);
    r.waveform = sample_waveform(spec.type, rng, table);
    r.clock.drift_ppm = rng.uniform(-max_drift_ppm, max_drift_ppm);
    r.waveform.start_offset = rng.uniform(0.0, r.waveform.pri);
    return r;
}

constexpr int kMaxRadarsPerVehicle = 8;

}  // namespace

Vehicle install_radars(Vehicle vehicle, Topology topology, Rng& rng,
                       const WaveformTable& table, double max_drift_ppm)
{
    if (!vehicle.radars.empty())
    {
        throw ConfigError(fmt::format("vehicle {} already has radars", vehicle.id));
    }
    const std::size_t n = topology_size(topology);
    for (std::size_t i = 0; i < n; ++i)
    {
        vehicle.radars.push_back(make_radar(vehicle, kMounts[i],
                                            vehicle.id * kMaxRadarsPerVehicle + static_cast<int>(i),
                                            rng, table, max_drift_ppm));
    }
    return vehicle;
}

int add_radar(Vehicle& vehicle, RadarType type, Rng& rng, const WaveformTable& table,
              double max_drift_ppm)
{
    const auto spec = std::find_if(std::begin(kMounts), std::end(kMounts),
                                   [type](const MountSpec& m) { return m.type == type; });
    if (spec == std::end(kMounts))
    {
        throw ConfigError(fmt::format("no canonical mount for {}", to_string(type)));
    }
    if (vehicle.radars.size() >= kMaxRadarsPerVehicle)
    {
        throw ConfigError("vehicle radar capacity exceeded");
    }
    const int uid = vehicle.id * kMaxRadarsPerVehicle + static_cast<int>(vehicle.radars.size());
    vehicle.radars.push_back(make_radar(vehicle, *spec, uid, rng, table, max_drift_ppm));
    return static_cast<int>(vehicle.radars.size()) - 1;
}

void equip_scenario(Scenario& scenario, Topology topology, RadarType host_type, Rng& rng,
                    const WaveformTable& table, double max_drift_ppm)
{
    if (!is_host_type(host_type))
    {
        throw ConfigError(fmt::format("{} cannot be a host radar", to_string(host_type)));
    }
    for (auto& v : scenario.vehicles)
    {
        v = install_radars(std::move(v), topology, rng, table, max_drift_ppm);
    }
    Vehicle& host = scenario.host_vehicle();
    const auto it = std::find_if(host.radars.begin(), host.radars.end(),
                                 [host_type](const RadarInstance& r) { return r.type == host_type; });
    scenario.host_radar_index = it != host.radars.end()
                                    ? static_cast<int>(it - host.radars.begin())
                                    : add_radar(host, host_type, rng, table, max_drift_ppm);
}

Scenario assign_penetration(Scenario scenario, double rate, Rng& rng)
{
    if (!(rate >= 0.0 && rate <= 1.0))
    {
        throw ConfigError(fmt::format("penetration rate {} outside [0, 1]", rate));
    }
    for (auto& v : scenario.vehicles)
    {
        if (v.id == scenario.host_vehicle_id)
        {
            continue;
        }
        // Always consume one draw per vehicle so the sequence is rate-independent.
        const bool keep = rng.uniform() < rate;
        if (!keep)
        {
            v.radars.clear();
        }
    }
    return scenario;
}

Snapshot advance(const Scenario& scenario, double t)
{
    Snapshot snap;
    snap.time = t;
    snap.footprints.reserve(scenario.vehicles.size());
    const double L = scenario.geometry.road_length;
    for (const auto& v : scenario.vehicles)
    {
        Footprint f = v.footprint();
        f.center.x += v.speed * t * std::cos(v.heading);
        f.center.x = std::fmod(f.center.x, L);
        if (f.center.x < 0)
        {
            f.center.x += L;
        }
        snap.footprints.push_back(f);
    }
    return snap;
}

Snapshot host_centered(const Snapshot& snapshot, const Scenario& scenario)
{
    Snapshot out = snapshot;
    const double L = scenario.geometry.road_length;
    const double hx = snapshot.footprints.at(scenario.host_vehicle_index()).center.x;
    for (auto& f : out.footprints)
    {
        const double dx = std::remainder(f.center.x - hx, L);
        f.center.x = hx + dx;
    }
    return out;
}

RadarPose radar_pose(const Footprint& vehicle, const RadarInstance& radar)
{
    RadarPose pose;
    pose.position = vehicle.center + rotate(radar.mount, vehicle.heading);
    pose.boresight = wrap_angle(vehicle.heading + radar.boresight);
    pose.fov_halfwidth = radar.fov_halfwidth;
    return pose;
}

Vec2 target_position(const ReferenceTarget& target, const RadarPose& host)
{
    if (target.frame == TargetFrame::world)
    {
        return target.world_position;
    }
    const double a = host.boresight + target.azimuth;
    return host.position + Vec2{std::cos(a), std::sin(a)} * target.range;
}

// --- serialization ------------------------------------------------------

namespace {

json to_json_value(const WaveformConfig& w)
{
    return json{{"pri", w.pri},
                {"slope", w.slope},
                {"chirp_duration", w.chirp_duration},
                {"carrier", w.carrier},
                {"n_chirps", w.n_chirps},
                {"fps", w.fps},
                {"n_elements", w.n_elements},
                {"tx_power", w.tx_power},
                {"element_gain", w.element_gain},
                {"adc_rate", w.adc_rate},
                {"start_offset", w.start_offset}};
}

WaveformConfig waveform_from(const json& j)
{
    WaveformConfig w;
    w.pri = j.at("pri").get<double>();
    w.slope = j.at("slope").get<double>();
    w.chirp_duration = j.at("chirp_duration").get<double>();
    w.carrier = j.at("carrier").get<double>();
    w.n_chirps = j.at("n_chirps").get<int>();
    w.fps = j.at("fps").get<double>();
    w.n_elements = j.at("n_elements").get<int>();
    w.tx_power = j.at("tx_power").get<double>();
    w.element_gain = j.at("element_gain").get<double>();
    w.adc_rate = j.at("adc_rate").get<double>();
    w.start_offset = j.at("start_offset").get<double>();
    return w;
}

MountClass parse_mount_class(std::string_view s)
{
    for (auto m : {MountClass::front_center, MountClass::rear_center, MountClass::front_corner,
                   MountClass::rear_corner})
    {
        if (to_string(m) == s)
        {
            return m;
        }
    }
    throw ConfigError(fmt::format("unknown mount class '{}'", s));
}

json to_json_value(const RadarInstance& r)
{
    json j{{"uid", r.uid},
           {"mount", {r.mount.x, r.mount.y}},
           {"boresight", r.boresight},
           {"fov_halfwidth", r.fov_halfwidth},
           {"type", std::string(to_string(r.type))},
           {"mount_class", std::string(to_string(r.mount_class))},
           {"waveform", to_json_value(r.waveform)},
           {"drift_ppm", r.clock.drift_ppm},
           {"polarization", r.polarization == Polarization::V ? "V" : "H"},
           {"dither_bound", r.dither_bound}};
    j["band_assignment"] = r.band_assignment
                               ? json{r.band_assignment->lo, r.band_assignment->hi}
                               : json(nullptr);
    j["tf_slot"] = r.tf_slot ? json{r.tf_slot->band, r.tf_slot->slot} : json(nullptr);
    return j;
}

RadarInstance radar_from(const json& j)
{
    RadarInstance r;
    r.uid = j.at("uid").get<int>();
    r.mount = {j.at("mount").at(0).get<double>(), j.at("mount").at(1).get<double>()};
    r.boresight = j.at("boresight").get<double>();
    r.fov_halfwidth = j.at("fov_halfwidth").get<double>();
    r.type = parse_radar_type(j.at("type").get<std::string>());
    r.mount_class = parse_mount_class(j.at("mount_class").get<std::string>());
    r.waveform = waveform_from(j.at("waveform"));
    r.clock.drift_ppm = j.at("drift_ppm").get<double>();
    r.polarization = j.at("polarization").get<std::string>() == "H" ? Polarization::H
                                                                     : Polarization::V;
    r.dither_bound = j.at("dither_bound").get<double>();
    if (!j.at("band_assignment").is_null())
    {
        r.band_assignment = FrequencyBand{j["band_assignment"].at(0).get<double>(),
                                          j["band_assignment"].at(1).get<double>()};
    }
    if (!j.at("tf_slot").is_null())
    {
        r.tf_slot = TfSlot{j["tf_slot"].at(0).get<int>(), j["tf_slot"].at(1).get<int>()};
    }
    return r;
}

}  // namespace

std::string serialize_scenario(const Scenario& s)
{
    json vehicles = json::array();
    for (const auto& v : s.vehicles)
    {
        json radars = json::array();
        for (const auto& r : v.radars)
        {
            radars.push_back(to_json_value(r));
        }
        vehicles.push_back(json{{"id", v.id},
                                {"kind", v.kind == VehicleKind::car ? "car" : "truck"},
                                {"center", {v.center.x, v.center.y}},
                                {"heading", v.heading},
                                {"speed", v.speed},
                                {"width", v.width},
                                {"length", v.length},
                                {"lane", v.lane},
                                {"radars", radars}});
    }
    const auto& t = s.target;
    json doc{{"format", "radint-scenario/1"},
             {"geometry",
              {{"n_lanes_per_direction", s.geometry.n_lanes_per_direction},
               {"lane_width", s.geometry.lane_width},
               {"road_length", s.geometry.road_length},
               {"wall_offset", s.geometry.wall_offset}}},
             {"density_label", std::string(to_string(s.density_label))},
             {"duration", s.duration},
             {"host_vehicle_id", s.host_vehicle_id},
             {"host_radar_index", s.host_radar_index},
             {"target",
              {{"frame", t.frame == TargetFrame::host ? "host" : "world"},
               {"range", t.range},
               {"azimuth", t.azimuth},
               {"world_position", {t.world_position.x, t.world_position.y}},
               {"rcs", t.rcs},
               {"radial_speed", t.radial_speed},
               {"blockable", t.blockable}}},
             {"vehicles", vehicles}};
    return doc.dump(1) + "\n";
}

Scenario parse_scenario(std::string_view text)
{
    Scenario s;
    try
    {
        const json doc = json::parse(text);
        const auto& g = doc.at("geometry");
        s.geometry.n_lanes_per_direction = g.at("n_lanes_per_direction").get<int>();
        s.geometry.lane_width = g.at("lane_width").get<double>();
        s.geometry.road_length = g.at("road_length").get<double>();
        s.geometry.wall_offset = g.at("wall_offset").get<double>();
        s.density_label = parse_density(doc.at("density_label").get<std::string>());
        s.duration = doc.at("duration").get<double>();
        s.host_vehicle_id = doc.at("host_vehicle_id").get<int>();
        s.host_radar_index = doc.at("host_radar_index").get<int>();
        const auto& t = doc.at("target");
        s.target.frame = t.at("frame").get<std::string>() == "world" ? TargetFrame::world
                                                                       : TargetFrame::host;
        s.target.range = t.at("range").get<double>();
        s.target.azimuth = t.at("azimuth").get<double>();
        s.target.world_position = {t.at("world_position").at(0).get<double>(),
                                   t.at("world_position").at(1).get<double>()};
        s.target.rcs = t.at("rcs").get<double>();
        s.target.radial_speed = t.at("radial_speed").get<double>();
        s.target.blockable = t.at("blockable").get<bool>();
        for (const auto& jv : doc.at("vehicles"))
        {
            Vehicle v;
            v.id = jv.at("id").get<int>();
            v.kind = jv.at("kind").get<std::string>() == "truck" ? VehicleKind::truck
                                                                  : VehicleKind::car;
            v.center = {jv.at("center").at(0).get<double>(), jv.at("center").at(1).get<double>()};
            v.heading = jv.at("heading").get<double>();
            v.speed = jv.at("speed").get<double>();
            v.width = jv.at("width").get<double>();
            v.length = jv.at("length").get<double>();
            v.lane = jv.at("lane").get<int>();
            for (const auto& jr : jv.at("radars"))
            {
                v.radars.push_back(radar_from(jr));
            }
            s.vehicles.push_back(std::move(v));
        }
    }
    catch (const json::exception& e)
    {
        throw ConfigError(fmt::format("malformed scenario document: {}", e.what()));
    }
    return s;
}

}  // namespace radint
