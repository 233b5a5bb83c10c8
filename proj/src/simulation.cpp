// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#include "radint/simulation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "radint/common.hpp"
#include "radint/mitigation.hpp"
#include "radint/propagation.hpp"
#include "radint/rng.hpp"

namespace radint {

namespace {

// Domain-separation tags for derived seeds.
constexpr std::uint64_t kTagGeometry = 1;
constexpr std::uint64_t kTagEquip = 2;
constexpr std::uint64_t kTagPenetration = 3;
constexpr std::uint64_t kTagMitigation = 4;
constexpr std::uint64_t kTagDither = 5;
constexpr std::uint64_t kTagNoise = 6;
constexpr std::uint64_t kTagCalibration = 7;

std::uint64_t u64(int v) { return static_cast<std::uint64_t>(static_cast<std::int64_t>(v)); }

std::uint64_t cell_code(const MatrixCell& c)
{
    return static_cast<std::uint64_t>(c.density) * 100 + static_cast<std::uint64_t>(c.topology) * 10 +
           static_cast<std::uint64_t>(c.host_type);
}

}  // namespace

void parallel_for(int n, int workers, const std::function<void(int)>& fn)
{
    if (n <= 0)
    {
        return;
    }
    workers = std::clamp(workers, 1, n);
    if (workers == 1)
    {
        for (int i = 0; i < n; ++i)
        {
            fn(i);
        }
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
    {
        pool.emplace_back([&] {
            for (;;)
            {
                const int i = next.fetch_add(1);
                if (i >= n || failed.load())
                {
                    return;
                }
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                    {
                        error = std::current_exception();
                    }
                    failed = true;
                }
            }
        });
    }
    for (auto& t : pool)
    {
        t.join();
    }
    if (error)
    {
        std::rethrow_exception(error);
    }
}

Scenario base_scenario(const RunConfig& config, const MatrixCell& cell, int seed_index)
{
    Scenario s;
    if (config.scenario_file)
    {
        s = parse_scenario(read_text_file(*config.scenario_file));
        return s;
    }
    Rng geo(derive_seed({config.seed, u64(seed_index), kTagGeometry,
                         static_cast<std::uint64_t>(cell.density)}));
    HighwayOptions options = config.model.highway;
    s = generate_highway(cell.density, config.model.road, options, geo);
    s.target = config.model.target;
    s.duration = options.duration;
    Rng equip(derive_seed({config.seed, u64(seed_index), kTagEquip, cell_code(cell)}));
    equip_scenario(s, cell.topology, cell.host_type, equip, WaveformTable{}, config.model.max_drift_ppm);
    return s;
}

Scenario build_scenario(const RunConfig& config, const CellKey& key)
{
    Scenario s = base_scenario(config, key.cell, key.seed_index);
    Rng pen(derive_seed({config.seed, u64(key.seed_index), kTagPenetration,
                         static_cast<std::uint64_t>(key.cell.density)}));
    s = assign_penetration(std::move(s), key.rate, pen);
    MitigationPlan plan = config.mitigation;
    plan.technique = key.technique;
    plan.seed = derive_seed({config.mitigation.seed, config.seed, u64(key.seed_index), kTagMitigation});
    return apply_mitigation(std::move(s), plan);
}

std::vector<int> dwell_schedule(const Scenario& scenario, int max_dwells)
{
    const WaveformConfig w = scenario.host_radar().effective_waveform();
    const int n = static_cast<int>(std::floor(scenario.duration * w.fps + 1e-9));
    std::vector<int> out;
    if (max_dwells <= 0 || max_dwells >= n)
    {
        for (int i = 0; i < n; ++i)
        {
            out.push_back(i);
        }
        return out;
    }
    for (int i = 0; i < max_dwells; ++i)
    {
        out.push_back(static_cast<int>(static_cast<long>(i) * n / max_dwells));
    }
    return out;
}

ChirpSchedule host_schedule(const Scenario& scenario, std::uint64_t dither_seed)
{
    const RadarInstance& r = scenario.host_radar();
    return {r.effective_waveform(), r.uid, r.dither_bound, dither_seed};
}

DwellInputs prepare_dwell(const Scenario& scenario, const RunConfig& config, int dwell,
                          std::uint64_t dither_seed)
{
    DwellInputs in;
    in.dwell = dwell;
    in.host = host_schedule(scenario, dither_seed);
    const WaveformConfig& hw = in.host.waveform;

    const double t0 = in.host.chirp_start(dwell, 0);
    const Snapshot snap = host_centered(advance(scenario, t0), scenario);
    const std::size_t host_index = scenario.host_vehicle_index();
    const Footprint& host_fp = snap.footprints[host_index];
    const RadarEndpoint host = make_endpoint(host_fp, scenario.host_radar());
    const BlockerIndex blockers(snap.footprints);

    // Reference target.
    const ReferenceTarget& tgt = scenario.target;
    const Vec2 tpos = target_position(tgt, host.pose);
    const double trange = (tpos - host.pose.position).norm();
    const double echo = echo_power(host, tpos, tgt.rcs,
                                   tgt.blockable && config.model.blockage ? &blockers : nullptr);
    in.target_visible = echo > 0.0;
    in.targets.push_back({trange, tgt.radial_speed, echo});
    in.truth.range_bin = static_cast<int>(std::lround(range_to_bin(hw, trange)));
    in.truth.doppler_bin =
        static_cast<int>(std::lround(speed_to_doppler_bin(hw, tgt.radial_speed))) % hw.n_chirps;

    PathContext ctx;
    ctx.blockers = config.model.blockage ? &blockers : nullptr;
    ctx.wall_distance = scenario.geometry.wall_distance();
    ctx.span_min_x = host_fp.center.x - 0.5 * scenario.geometry.road_length;
    ctx.span_max_x = host_fp.center.x + 0.5 * scenario.geometry.road_length;
    ctx.walls = config.model.walls;
    ctx.material = config.model.material;

    const double noise_power = config.model.noise.sample_power(hw.adc_rate);
    const double cut = noise_power * db_to_linear(config.model.interference_cut_db);
    const double h_lo = hw.carrier;
    const double h_hi = hw.carrier + hw.sweep_bandwidth();
    const RadarInstance& host_radar = scenario.host_radar();

    // Unblocked paths of one radar above the power cut.
    const auto reaching = [&](const Vehicle& v, const Footprint& fp, const RadarInstance& r) {
        const RadarEndpoint tx = make_endpoint(fp, r);
        InterfererSource src;
        src.schedule = {tx.waveform, r.uid, r.dither_bound, dither_seed};
        const int exclude[] = {v.id, scenario.host_vehicle_id};
        for (auto& p : path_geometry(tx.pose.position, host.pose.position, ctx))
        {
            const double gain = one_way_gain(p, tx, host);
            const double pol = polarization_factor(r.polarization, host_radar.polarization, p.kind,
                                                   config.mitigation.polarization);
            const double power = gain * tx.waveform.total_tx_power() * pol;
            if (!(power > cut))
            {
                continue;
            }
            evaluate_blockage(p, tx.pose.position, host.pose.position, ctx, exclude);
            if (p.blocked)
            {
                continue;
            }
            src.paths.push_back({p.length / kSpeedOfLight, std::sqrt(power), std::arg(p.reflection_coeff)});
        }
        return src;
    };

    // Coordinated time-frequency cells are handed out per frame, strongest
    // link to the host first.
    Scenario coordinated;
    const Scenario* scene = &scenario;
    if (host_radar.tf_slot)
    {
        std::vector<std::pair<double, int>> links;
        for (std::size_t vi = 0; vi < scenario.vehicles.size(); ++vi)
        {
            const Vehicle& v = scenario.vehicles[vi];
            if (vi == host_index)
            {
                continue;
            }
            for (const auto& r : v.radars)
            {
                const InterfererSource src = reaching(v, snap.footprints[vi], r);
                double peak = 0.0;
                for (const auto& p : src.paths)
                {
                    peak = std::max(peak, p.amplitude);
                }
                if (peak > 0.0)
                {
                    links.emplace_back(peak, r.uid);
                }
            }
        }
        std::sort(links.begin(), links.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        std::vector<int> priority;
        for (const auto& l : links)
        {
            priority.push_back(l.second);
        }
        coordinated = scenario;
        reassign_tf_cells(coordinated, config.mitigation.tf, priority);
        scene = &coordinated;
    }

    for (std::size_t vi = 0; vi < scene->vehicles.size(); ++vi)
    {
        const Vehicle& v = scene->vehicles[vi];
        if (vi == host_index)
        {
            continue;
        }
        for (const auto& r : v.radars)
        {
            const WaveformConfig iw = r.effective_waveform();
            // |beat| >= spectral gap between the two sweeps.
            const double gap = std::max(iw.carrier - h_hi, h_lo - (iw.carrier + iw.sweep_bandwidth()));
            if (gap > hw.adc_rate)
            {
                continue;
            }
            InterfererSource src = reaching(v, snap.footprints[vi], r);
            if (!src.paths.empty())
            {
                in.interferers.push_back(std::move(src));
            }
        }
    }
    return in;
}

double calibrate_nominal_floor(const ChirpSchedule& host, const RunConfig& config, std::uint64_t key)
{
    Rng rng(key);
    IFCube cube = make_cube(host, 0);
    add_thermal_noise(cube, config.model.noise, rng);
    return mean_power(range_doppler(cube, config.processing.window));
}

DwellProducts synthesize_products(const DwellInputs& inputs, const RunConfig& config,
                                  std::uint64_t key)
{
    Rng rng(key);
    SynthesisOptions opt;
    opt.lpf_gating = config.model.lpf_gating;
    DwellProducts p;
    p.cube = synthesize_dwell(inputs.host, inputs.dwell, inputs.targets, inputs.interferers,
                              config.model.noise, rng, opt);
    p.map = range_doppler(p.cube, config.processing.window);
    return p;
}

DwellOutcome evaluate_dwell(const DwellInputs& inputs, const RangeDopplerMap& map,
                            const RunConfig& config, double nominal_floor)
{
    DwellOutcome o;
    o.dwell = inputs.dwell;
    o.target_visible = inputs.target_visible;
    for (const auto& s : inputs.interferers)
    {
        o.n_interferer_paths += static_cast<int>(s.paths.size());
    }
    const int gate = config.processing.gate;
    const Cell truth = inputs.truth;
    auto in_gate = [&](const Detection& d) {
        const Detection one[] = {d};
        return target_detected(one, map.n_doppler, truth, gate);
    };

    const auto cfar = cluster_detections(map, ca_cfar(map, config.processing.cfar));
    o.detected = target_detected(cfar, map.n_doppler, truth, gate);
    o.cfar_false_alarms = std::count_if(cfar.begin(), cfar.end(), [&](const Detection& d) { return !in_gate(d); });

    const auto fixed = cluster_detections(
        map, fixed_threshold(map, nominal_floor, config.processing.fixed_threshold_db));
    o.fixed_false_alarms = std::count_if(fixed.begin(), fixed.end(), [&](const Detection& d) { return !in_gate(d); });

    std::vector<Cell> excl;
    double peak = 0.0;
    for (int dr = -gate; dr <= gate; ++dr)
    {
        for (int dd = -gate; dd <= gate; ++dd)
        {
            const int r = truth.range_bin + dr;
            if (r < 0 || r >= map.n_range)
            {
                continue;
            }
            const int d = ((truth.doppler_bin + dd) % map.n_doppler + map.n_doppler) % map.n_doppler;
            excl.push_back({r, d});
            peak = std::max(peak, map.at(r, d));
        }
    }
    o.noise_floor_db = noise_floor(map, excl);
    // The median of exponential cells sits ln 2 below their mean.
    const double mean_floor = db_to_linear(o.noise_floor_db) / std::log(2.0);
    o.target_snr_db = linear_to_db(std::max(peak, 1e-300) / mean_floor);
    return o;
}

SeedKeys seed_keys(const RunConfig& config, const MatrixCell& cell, int seed_index)
{
    SeedKeys k;
    k.dither = derive_seed({config.seed, u64(seed_index), kTagDither});
    k.noise = derive_seed({config.seed, u64(seed_index), kTagNoise, cell_code(cell)});
    k.calibration = derive_seed({config.seed, u64(seed_index), kTagCalibration, cell_code(cell)});
    return k;
}

std::uint64_t noise_key(const SeedKeys& keys, int dwell, int host_uid)
{
    return derive_seed({keys.noise, u64(dwell), u64(host_uid)});
}

std::vector<DwellOutcome> run_dwells(const Scenario& scenario, const RunConfig& config,
                                     const SeedKeys& keys)
{
    const auto dwells = dwell_schedule(scenario, config.max_dwells);
    const double nominal = calibrate_nominal_floor(host_schedule(scenario, keys.dither), config,
                                                   keys.calibration);
    const int host_uid = scenario.host_radar().uid;
    std::vector<DwellOutcome> out(dwells.size());
    parallel_for(static_cast<int>(dwells.size()), config.workers, [&](int i) {
        const int d = dwells[static_cast<std::size_t>(i)];
        const DwellInputs in = prepare_dwell(scenario, config, d, keys.dither);
        const DwellProducts p = synthesize_products(in, config, noise_key(keys, d, host_uid));
        out[static_cast<std::size_t>(i)] = evaluate_dwell(in, p.map, config, nominal);
    });
    return out;
}

SweepResult summarize_cell(const CellKey& key, const Scenario& scenario,
                           const std::vector<DwellOutcome>& outcomes)
{
    SweepResult r;
    r.scenario = std::string(to_string(scenario.density_label));
    r.topology = std::string(to_string(key.cell.topology));
    r.host_type = std::string(to_string(scenario.host_radar().type));
    r.technique = std::string(to_string(key.technique));
    r.penetration_rate = key.rate;
    r.seed = static_cast<std::uint64_t>(key.seed_index);
    r.n_dwells = static_cast<int>(outcomes.size());
    std::vector<bool> hits;
    std::vector<double> floors;
    std::vector<double> snrs;
    for (const auto& o : outcomes)
    {
        hits.push_back(o.detected);
        floors.push_back(o.noise_floor_db);
        snrs.push_back(o.target_snr_db);
        r.fixed_false_alarms += o.fixed_false_alarms;
        r.cfar_false_alarms += o.cfar_false_alarms;
    }
    if (!outcomes.empty())
    {
        r.pd = probability_of_detection(hits);
        r.mean_noise_floor_db = mean(floors);
        r.mean_target_snr_db = mean(snrs);
    }
    return r;
}

std::vector<SweepResult> run_sweep(const RunConfig& config, const ProgressFn& progress)
{
    config.validate();
    std::vector<CellKey> keys;
    for (const auto& cell : config.cells)
    {
        for (auto t : config.techniques)
        {
            for (double rate : config.penetration_rates)
            {
                for (int s = 0; s < config.n_seeds; ++s)
                {
                    keys.push_back({cell, t, rate, s});
                }
            }
        }
    }
    std::vector<SweepResult> rows;
    rows.reserve(keys.size());
    for (const auto& key : keys)
    {
        const Scenario s = build_scenario(config, key);
        const auto outcomes = run_dwells(s, config, seed_keys(config, key.cell, key.seed_index));
        rows.push_back(summarize_cell(key, s, outcomes));
        if (progress)
        {
            progress(rows.back(), rows.size(), keys.size());
        }
    }
    return rows;
}

std::string sweep_csv_header()
{
    return "scenario,topology,host_type,technique,penetration_rate,seed,pd,mean_noise_floor_db,"
           "mean_target_snr_db,n_dwells,fixed_false_alarms,cfar_false_alarms";
}

void write_sweep_csv(std::ostream& out, const RunConfig& config, const std::vector<SweepResult>& rows)
{
    for (const auto& [k, v] : run_metadata(config))
    {
        out << "# " << k << '=' << v << '\n';
    }
    out << sweep_csv_header() << '\n';
    for (const auto& r : rows)
    {
        out << fmt::format("{},{},{},{},{:.4f},{},{:.6f},{:.4f},{:.4f},{},{},{}\n", r.scenario,
                           r.topology, r.host_type, r.technique, r.penetration_rate, r.seed, r.pd,
                           r.mean_noise_floor_db, r.mean_target_snr_db, r.n_dwells,
                           r.fixed_false_alarms, r.cfar_false_alarms);
    }
}

}  // namespace radint
