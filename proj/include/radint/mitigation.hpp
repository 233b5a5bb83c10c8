// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "radint/propagation.hpp"
#include "radint/scenario.hpp"

namespace radint {

enum class Technique
{
    none,
    predefined_frequency,
    predefined_polarization,
    time_dithering,
    time_frequency_coding
};

std::string_view to_string(Technique t);
Technique parse_technique(std::string_view name);

/// One sub-band per mount class, indexed by MountClass.
struct BandPlan
{
    std::array<FrequencyBand, 4> bands{{{77e9, 78e9}, {78e9, 79e9}, {79e9, 80e9}, {80e9, 81e9}}};
    const FrequencyBand& band_for(MountClass m) const { return bands[static_cast<std::size_t>(m)]; }
};

struct PolarizationParams
{
    double direct_suppression_db = 15.0;
    double reflected_suppression_db = 5.0;
};

struct DitherParams
{
    double jitter_bound = 2e-6;  // s
    bool dither_host = true;
};

struct TfCodingParams
{
    int n_bands = 16;
    int n_slots = 4;
    double sync_jitter = 0.0;  // s, each radar offset uniform in [-j, +j]
    double frame_rate = 20.0;  // Hz, common to every radar
    double band_lo = 77e9;
    double band_hi = 81e9;

    int grid() const { return n_bands * n_slots; }
    double slot_length() const { return 1.0 / (frame_rate * n_slots); }
};

struct MitigationPlan
{
    Technique technique = Technique::none;
    BandPlan bands;
    PolarizationParams polarization;
    DitherParams dither;
    TfCodingParams tf;
    std::uint64_t seed = 0;  // keys carrier draws and cell assignment
};

/// Carrier uniform such that the sweep fits inside `band` under any clock
/// drift up to 100 ppm. A sweep wider than the band has its slope reduced to
/// fill the band; wider than 1 GHz at the table minimums is a ConfigError.
WaveformConfig fit_waveform_to_band(WaveformConfig w, const FrequencyBand& band, double u);

Scenario apply_predefined_frequency(Scenario scenario, const BandPlan& plan, std::uint64_t seed);

/// Forward traffic V, oncoming H.
Scenario apply_predefined_polarization(Scenario scenario);

/// Power attenuation (linear, <= 1) for an interferer path into the host.
double polarization_factor(Polarization tx, Polarization rx, PathKind kind,
                           const PolarizationParams& params);

Scenario apply_time_dithering(Scenario scenario, const DitherParams& params);

/// (band, slot) of every radar keyed by uid, host first.
Scenario apply_time_frequency_coding(Scenario scenario, const TfCodingParams& params,
                                     std::uint64_t seed);

/// Per-frame coordination: radars in `priority` order take the cells after
/// the host's, so the strongest links to the host never share its cell.
/// Radars not listed keep their cells. Moving between equal-width bands is a
/// carrier translation; any sync jitter is kept.
void reassign_tf_cells(Scenario& scenario, const TfCodingParams& params,
                       const std::vector<int>& priority);

Scenario apply_mitigation(Scenario scenario, const MitigationPlan& plan);

}  // namespace radint
