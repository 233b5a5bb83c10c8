// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "radint/geometry.hpp"
#include "radint/metrics.hpp"
#include "radint/processing.hpp"
#include "radint/simulation.hpp"
#include "radint/waveform.hpp"

namespace radint {

/// Free-space interferer layout around a host at the origin looking along
/// +x. Interferers face the host and are activated in list order.
struct AnechoicLayout
{
    std::string name;
    std::vector<Vec2> positions;
    /// Fixed extra loss on every interferer path (fixture, cabling, cross
    /// coupling).
    double coupling_loss_db = 0.0;
};

/// Three arrays of five at 5, 10 and 15 m, nearest array first.
AnechoicLayout field_layout();
/// Six arrays of five, all at 7 m.
AnechoicLayout chamber_layout();
AnechoicLayout layout_by_name(const std::string& name);

struct AnechoicConfig
{
    WaveformConfig host = radar_a_profile();
    double host_fov_halfwidth = 1.0471975511965976;  // 60 deg
    AnechoicLayout layout = field_layout();
    RadarType interferer_type = RadarType::USRR;
    /// Interferer carriers are drawn in this range (sweeps overlap the host).
    double carrier_lo = 76.5e9;
    double carrier_hi = 77.3e9;
    std::vector<int> counts{0, 5, 10, 15};
    int n_dwells = 50;
    int n_seeds = 10;
    std::uint64_t seed = 1;
    int workers = 1;
    ThermalModel noise;
    WindowKind window = WindowKind::hann;
    double max_drift_ppm = 20.0;
};

/// Interferer radars of one seed, in activation order.
std::vector<RadarInstance> anechoic_interferers(const AnechoicConfig& config, int seed_index);

/// Dwell inputs with the first `count` interferers active.
DwellInputs anechoic_dwell(const AnechoicConfig& config, const std::vector<RadarInstance>& radars,
                           int count, int dwell);

/// Per-dwell noise floors (dB) pooled over seeds for each count.
std::vector<NoiseFloorSamples> anechoic_floors(const AnechoicConfig& config);

std::vector<NoiseRisePoint> run_anechoic(const AnechoicConfig& config);

}  // namespace radint
