// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#include "radint/anechoic.hpp"

#include <fmt/format.h>

#include <cmath>

#include "radint/common.hpp"
#include "radint/propagation.hpp"
#include "radint/rng.hpp"
#include "radint/scenario.hpp"

namespace radint {

namespace {

constexpr std::uint64_t kTagRadars = 11;
constexpr std::uint64_t kTagNoise = 12;

void add_array(AnechoicLayout& layout, double distance, double first_deg, double step_deg, int n)
{
    for (int i = 0; i < n; ++i)
    {
        const double a = deg_to_rad(first_deg + step_deg * i);
        layout.positions.push_back({distance * std::cos(a), distance * std::sin(a)});
    }
}

}  // namespace

AnechoicLayout field_layout()
{
    AnechoicLayout l;
    l.name = "field";
    for (double d : {5.0, 10.0, 15.0})
    {
        add_array(l, d, -20.0, 10.0, 5);
    }
    // Fitted so 15 interferers give the measured 6.5 dB total.
    l.coupling_loss_db = 43.0;
    return l;
}

AnechoicLayout chamber_layout()
{
    AnechoicLayout l;
    l.name = "chamber";
    // Six arrays on a 7 m arc, 4 degrees between neighbours.
    add_array(l, 7.0, -58.0, 4.0, 30);
    // Fitted on the 5-interferer point only.
    l.coupling_loss_db = 45.3;
    return l;
}

AnechoicLayout layout_by_name(const std::string& name)
{
    if (name == "field")
    {
        return field_layout();
    }
    if (name == "chamber")
    {
        return chamber_layout();
    }
    throw ConfigError(fmt::format("unknown anechoic layout '{}'", name));
}

std::vector<RadarInstance> anechoic_interferers(const AnechoicConfig& config, int seed_index)
{
    Rng rng(derive_seed({config.seed, static_cast<std::uint64_t>(seed_index), kTagRadars}));
    std::vector<RadarInstance> out;
    int uid = 1;
    for (const Vec2& p : config.layout.positions)
    {
        RadarInstance r;
        r.uid = uid++;
        r.type = config.interferer_type;
        r.mount = p;
        r.boresight = (Vec2{0.0, 0.0} - p).angle();
        r.fov_halfwidth = default_fov_halfwidth(r.type);
        r.waveform = sample_waveform(r.type, rng);
        r.waveform.carrier = rng.uniform(config.carrier_lo, config.carrier_hi);
        r.clock.drift_ppm = rng.uniform(-config.max_drift_ppm, config.max_drift_ppm);
        r.waveform.start_offset = rng.uniform(0.0, r.waveform.pri);
        out.push_back(r);
    }
    return out;
}

DwellInputs anechoic_dwell(const AnechoicConfig& config, const std::vector<RadarInstance>& radars,
                           int count, int dwell)
{
    DwellInputs in;
    in.dwell = dwell;
    in.host = {config.host, 0, 0.0, 0};
    RadarEndpoint host;
    host.pose = {{0.0, 0.0}, 0.0, config.host_fov_halfwidth};
    host.waveform = config.host;
    host.vehicle_id = 0;

    // No target; the truth cell only anchors the exclusion window.
    in.targets.clear();
    in.truth = {0, 0};
    in.target_visible = false;

    PathContext ctx;
    ctx.walls = false;
    const double loss = db_to_linear(-config.layout.coupling_loss_db);
    const int n = std::min<int>(count, static_cast<int>(radars.size()));
    for (int i = 0; i < n; ++i)
    {
        const RadarInstance& r = radars[static_cast<std::size_t>(i)];
        RadarEndpoint tx;
        tx.pose = {r.mount, r.boresight, r.fov_halfwidth};
        tx.waveform = r.effective_waveform();
        tx.vehicle_id = r.uid;
        InterfererSource src;
        src.schedule = {tx.waveform, r.uid, 0.0, 0};
        for (const auto& p : paths(tx.pose.position, host.pose.position, ctx))
        {
            const double power = one_way_gain(p, tx, host) * tx.waveform.total_tx_power() * loss;
            if (power > 0.0)
            {
                src.paths.push_back({p.length / kSpeedOfLight, std::sqrt(power), 0.0});
            }
        }
        in.interferers.push_back(std::move(src));
    }
    return in;
}

std::vector<NoiseFloorSamples> anechoic_floors(const AnechoicConfig& config)
{
    if (config.n_dwells < 1 || config.n_seeds < 1)
    {
        throw ConfigError("anechoic run needs at least one dwell and one seed");
    }
    RunConfig rc;
    rc.model.noise = config.noise;
    rc.model.walls = false;
    rc.model.blockage = false;
    rc.processing.window = config.window;

    const std::size_t n_counts = config.counts.size();
    const int per_count = config.n_seeds * config.n_dwells;
    std::vector<NoiseFloorSamples> out(n_counts);
    for (std::size_t c = 0; c < n_counts; ++c)
    {
        out[c].count = config.counts[c];
        out[c].floors_db.assign(static_cast<std::size_t>(per_count), 0.0);
    }
    std::vector<std::vector<RadarInstance>> radars;
    for (int s = 0; s < config.n_seeds; ++s)
    {
        radars.push_back(anechoic_interferers(config, s));
    }
    const int total = static_cast<int>(n_counts) * per_count;
    parallel_for(total, config.workers, [&](int task) {
        const auto c = static_cast<std::size_t>(task / per_count);
        const int rem = task % per_count;
        const int s = rem / config.n_dwells;
        const int d = rem % config.n_dwells;
        const DwellInputs in =
            anechoic_dwell(config, radars[static_cast<std::size_t>(s)], config.counts[c], d);
        // Shared noise realization across counts for the same (seed, dwell).
        const std::uint64_t key = derive_seed({config.seed, static_cast<std::uint64_t>(s),
                                               static_cast<std::uint64_t>(d), kTagNoise});
        const DwellProducts p = synthesize_products(in, rc, key);
        out[c].floors_db[static_cast<std::size_t>(rem)] = noise_floor(p.map);
    });
    return out;
}

std::vector<NoiseRisePoint> run_anechoic(const AnechoicConfig& config)
{
    const auto floors = anechoic_floors(config);
    return noise_rise_curve(floors);
}

}  // namespace radint
