// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#include "radint/mitigation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "radint/common.hpp"
#include "radint/rng.hpp"

namespace radint {

namespace {

// Margin that keeps nominal and drifted sweeps inside a band.
constexpr double kDriftMargin = 1e-4;

// Domain-separation tags for keyed draws.
constexpr std::uint64_t kTagCarrier = 0x63617272;
constexpr std::uint64_t kTagCell = 0x63656c6c;
constexpr std::uint64_t kTagSync = 0x73796e63;

double min_table_sweep()
{
    const WaveformTable table;
    double out = 1e300;
    for (auto t : {RadarType::LRR, RadarType::SRR, RadarType::SBZA, RadarType::USRR})
    {
        const auto& r = table.at(t);
        out = std::min(out, r.slope.min * r.chirp_duration.min);
    }
    return out;
}

}  // namespace

std::string_view to_string(Technique t)
{
    switch (t)
    {
    case Technique::none: return "none";
    case Technique::predefined_frequency: return "predefined_frequency";
    case Technique::predefined_polarization: return "predefined_polarization";
    case Technique::time_dithering: return "time_dithering";
    case Technique::time_frequency_coding: return "time_frequency_coding";
    }
    return "?";
}

Technique parse_technique(std::string_view name)
{
    for (auto t : {Technique::none, Technique::predefined_frequency,
                   Technique::predefined_polarization, Technique::time_dithering,
                   Technique::time_frequency_coding})
    {
        if (name == to_string(t))
        {
            return t;
        }
    }
    if (name == "tf_coding")
    {
        return Technique::time_frequency_coding;
    }
    throw ConfigError(fmt::format("unknown technique '{}'", name));
}

WaveformConfig fit_waveform_to_band(WaveformConfig w, const FrequencyBand& band, double u)
{
    const double lo = band.lo * (1.0 + kDriftMargin);
    const double hi = band.hi * (1.0 - kDriftMargin);
    const double room = hi - lo;
    if (!(room > 0.0))
    {
        throw ConfigError(fmt::format("band [{}, {}] Hz is empty", band.lo, band.hi));
    }
    if (w.sweep_bandwidth() > room)
    {
        if (min_table_sweep() > room)
        {
            throw ConfigError(fmt::format("band of {} Hz cannot hold the minimum sweep", room));
        }
        w.slope = room / w.chirp_duration;
    }
    const double span = room - w.sweep_bandwidth();
    w.carrier = lo + u * span;
    return w;
}

Scenario apply_predefined_frequency(Scenario scenario, const BandPlan& plan, std::uint64_t seed)
{
    for (auto& v : scenario.vehicles)
    {
        for (auto& r : v.radars)
        {
            const FrequencyBand& band = plan.band_for(r.mount_class);
            const double u = keyed_uniform(derive_seed({seed, kTagCarrier, static_cast<std::uint64_t>(r.uid)}));
            r.waveform = fit_waveform_to_band(r.waveform, band, u);
            r.band_assignment = band;
        }
    }
    return scenario;
}

Scenario apply_predefined_polarization(Scenario scenario)
{
    for (auto& v : scenario.vehicles)
    {
        const bool forward = std::cos(v.heading) > 0.0;
        for (auto& r : v.radars)
        {
            r.polarization = forward ? Polarization::V : Polarization::H;
        }
    }
    return scenario;
}

double polarization_factor(Polarization tx, Polarization rx, PathKind kind,
                           const PolarizationParams& params)
{
    if (tx == rx)
    {
        return 1.0;
    }
    const double db = kind == PathKind::direct ? params.direct_suppression_db
                                               : params.reflected_suppression_db;
    return db_to_linear(-db);
}

Scenario apply_time_dithering(Scenario scenario, const DitherParams& params)
{
    if (params.jitter_bound < 0.0)
    {
        throw ConfigError("dither jitter bound must be >= 0");
    }
    for (std::size_t vi = 0; vi < scenario.vehicles.size(); ++vi)
    {
        auto& v = scenario.vehicles[vi];
        for (std::size_t ri = 0; ri < v.radars.size(); ++ri)
        {
            auto& r = v.radars[ri];
            const bool is_host = v.id == scenario.host_vehicle_id &&
                                 static_cast<int>(ri) == scenario.host_radar_index;
            if (is_host && !params.dither_host)
            {
                continue;
            }
            const WaveformConfig w = r.effective_waveform();
            if (params.jitter_bound + w.chirp_duration > w.pri)
            {
                throw ConfigError(fmt::format(
                    "radar {}: jitter {} s plus chirp {} s exceeds PRI {} s", r.uid,
                    params.jitter_bound, w.chirp_duration, w.pri));
            }
            r.dither_bound = params.jitter_bound;
        }
    }
    return scenario;
}

Scenario apply_time_frequency_coding(Scenario scenario, const TfCodingParams& params,
                                     std::uint64_t seed)
{
    if (params.n_bands < 1 || params.n_slots < 1)
    {
        throw ConfigError("time-frequency grid must have at least one band and one slot");
    }
    if (!(params.frame_rate > 0.0) || params.sync_jitter < 0.0 || !(params.band_hi > params.band_lo))
    {
        throw ConfigError("invalid time-frequency coding parameters");
    }
    const int grid = params.grid();
    const double band_width = (params.band_hi - params.band_lo) / params.n_bands;
    const double slot = params.slot_length();

    struct Entry
    {
        std::uint64_t key;
        std::size_t vehicle;
        std::size_t radar;
        bool host;
    };
    std::vector<Entry> order;
    for (std::size_t vi = 0; vi < scenario.vehicles.size(); ++vi)
    {
        const auto& v = scenario.vehicles[vi];
        for (std::size_t ri = 0; ri < v.radars.size(); ++ri)
        {
            const bool host = v.id == scenario.host_vehicle_id &&
                              static_cast<int>(ri) == scenario.host_radar_index;
            order.push_back({derive_seed({seed, kTagCell, static_cast<std::uint64_t>(v.radars[ri].uid)}),
                             vi, ri, host});
        }
    }
    std::sort(order.begin(), order.end(), [](const Entry& a, const Entry& b) {
        if (a.host != b.host)
        {
            return a.host;
        }
        return a.key < b.key;
    });

    // The host keeps a cell independent of who else is present; everyone
    // else fills the remaining cells in hash order before any cell repeats.
    int host_cell = 0;
    int next = 0;
    for (const auto& e : order)
    {
        int cell = 0;
        if (e.host)
        {
            host_cell = static_cast<int>(e.key % static_cast<std::uint64_t>(grid));
            cell = host_cell;
        }
        else
        {
            cell = (host_cell + 1 + next) % grid;
            ++next;
        }
        auto& r = scenario.vehicles[e.vehicle].radars[e.radar];
        const TfSlot ts{cell % params.n_bands, cell / params.n_bands};
        const FrequencyBand band{params.band_lo + ts.band * band_width,
                                 params.band_lo + (ts.band + 1) * band_width};
        r.clock.drift_ppm = 0.0;  // disciplined to the common time base
        WaveformConfig w = r.waveform;
        w.fps = params.frame_rate;
        if (w.dwell_length() > slot)
        {
            throw ConfigError(fmt::format("radar {}: dwell {} s exceeds the {} s slot", r.uid,
                                          w.dwell_length(), slot));
        }
        const double u = keyed_uniform(derive_seed({seed, kTagCarrier, static_cast<std::uint64_t>(r.uid)}));
        w = fit_waveform_to_band(w, band, u);
        const double j = params.sync_jitter > 0.0
                             ? params.sync_jitter *
                                   (2.0 * keyed_uniform(derive_seed({seed, kTagSync, static_cast<std::uint64_t>(r.uid)})) - 1.0)
                             : 0.0;
        w.start_offset = ts.slot * slot + j;
        r.waveform = w;
        r.band_assignment = band;
        r.tf_slot = ts;
    }
    return scenario;
}

void reassign_tf_cells(Scenario& scenario, const TfCodingParams& params,
                       const std::vector<int>& priority)
{
    const RadarInstance& host = scenario.host_radar();
    if (!host.tf_slot)
    {
        throw ConfigError("host radar has no time-frequency cell");
    }
    const int grid = params.grid();
    const double band_width = (params.band_hi - params.band_lo) / params.n_bands;
    const double slot = params.slot_length();
    const int host_cell = host.tf_slot->band + host.tf_slot->slot * params.n_bands;
    const int host_uid = host.uid;

    std::unordered_map<int, RadarInstance*> by_uid;
    for (auto& v : scenario.vehicles)
    {
        for (auto& r : v.radars)
        {
            by_uid[r.uid] = &r;
        }
    }
    int next = 0;
    for (const int uid : priority)
    {
        const auto it = by_uid.find(uid);
        if (it == by_uid.end() || uid == host_uid)
        {
            continue;
        }
        RadarInstance& r = *it->second;
        if (!r.tf_slot)
        {
            throw ConfigError(fmt::format("radar {} has no time-frequency cell", uid));
        }
        const int cell = (host_cell + 1 + next) % grid;
        ++next;
        const TfSlot ts{cell % params.n_bands, cell / params.n_bands};
        r.waveform.carrier += (ts.band - r.tf_slot->band) * band_width;
        r.waveform.start_offset += (ts.slot - r.tf_slot->slot) * slot;
        r.band_assignment = FrequencyBand{params.band_lo + ts.band * band_width,
                                          params.band_lo + (ts.band + 1) * band_width};
        r.tf_slot = ts;
    }
}

Scenario apply_mitigation(Scenario scenario, const MitigationPlan& plan)
{
    switch (plan.technique)
    {
    case Technique::none: return scenario;
    case Technique::predefined_frequency:
        return apply_predefined_frequency(std::move(scenario), plan.bands, plan.seed);
    case Technique::predefined_polarization:
        return apply_predefined_polarization(std::move(scenario));
    case Technique::time_dithering: return apply_time_dithering(std::move(scenario), plan.dither);
    case Technique::time_frequency_coding:
        return apply_time_frequency_coding(std::move(scenario), plan.tf, plan.seed);
    }
    return scenario;
}

}  // namespace radint
