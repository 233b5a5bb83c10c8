// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#pragma once

#include <complex>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "radint/rng.hpp"

namespace radint {

/// Radar classes. USRR only appears as an interferer in experiment analogs.
enum class RadarType
{
    LRR,
    SRR,
    SBZA,
    USRR
};

std::string_view to_string(RadarType type);
RadarType parse_radar_type(std::string_view name);
/// True for types that may act as the radar under test.
bool is_host_type(RadarType type);

/// One radar's LFM-CW chirp parameterization. SI units throughout.
struct WaveformConfig
{
    double pri = 0.0;             // s
    double slope = 0.0;           // Hz/s
    double chirp_duration = 0.0;  // s
    double carrier = 0.0;         // Hz, chirp start frequency
    int n_chirps = 0;
    double fps = 0.0;    // frames per second
    int n_elements = 0;  // transmit and receive elements
    double tx_power = 0.0;      // W per element
    double element_gain = 0.0;  // linear
    double adc_rate = 0.0;      // Hz
    double start_offset = 0.0;  // s, first chirp of frame 0

    double sweep_bandwidth() const { return slope * chirp_duration; }
    double frame_period() const { return 1.0 / fps; }
    double dwell_length() const { return n_chirps * pri; }
    /// Fast-time samples per chirp, floor(adc_rate * chirp_duration).
    int n_fast() const;
    double wavelength() const;
    /// Aggregate antenna gain, n_elements * element_gain.
    double antenna_gain() const { return n_elements * element_gain; }
    double total_tx_power() const { return n_elements * tx_power; }

    /// Throws ConfigError when an invariant is violated.
    void validate() const;

    bool operator==(const WaveformConfig&) const = default;
};

/// Closed interval a parameter is drawn from.
struct ParamRange
{
    double min = 0.0;
    double max = 0.0;
};

/// Per-type draw ranges. Fixed fields are set exactly.
struct WaveformRanges
{
    ParamRange pri;             // s
    ParamRange slope;           // Hz/s
    ParamRange chirp_duration;  // s
    ParamRange carrier;         // Hz
    ParamRange n_chirps;
    ParamRange fps;
    int n_elements = 1;
    double tx_power_dbm = 10.0;
    double gain_dbi = 0.0;
    double adc_rate = 30e6;  // Hz
};

/// Table of draw ranges keyed by type; defaults are the standard ranges per type.
class WaveformTable
{
  public:
    WaveformTable();
    const WaveformRanges& at(RadarType type) const;
    void set(RadarType type, const WaveformRanges& ranges);

  private:
    std::map<RadarType, WaveformRanges> ranges_;
};

WaveformRanges default_ranges(RadarType type);

/// Draws every ranged field uniformly and independently. chirp_duration is
/// re-drawn until it fits in the PRI (and the dwell until it fits the frame).
WaveformConfig sample_waveform(RadarType type, Rng& rng);
WaveformConfig sample_waveform(RadarType type, Rng& rng, const WaveformTable& table);

/// The engineering-sample host used by the chamber and field experiments.
WaveformConfig radar_a_profile();

/// exp(-j2pi(fc t + slope t^2 / 2)) on [0, chirp_duration], zero elsewhere.
std::complex<double> chirp_value(const WaveformConfig& cfg, double t);

struct ClockModel
{
    double drift_ppm = 0.0;

    void validate() const;
    double factor() const { return 1.0 + drift_ppm * 1e-6; }
    bool operator==(const ClockModel&) const = default;
};

/// A fast clock raises every frequency and shortens every duration by the
/// same factor (1 + ppm * 1e-6). start_offset is a phase of the schedule and
/// is left untouched.
WaveformConfig apply_clock_drift(const WaveformConfig& cfg, const ClockModel& clock);

/// Nominal chirp start times of one dwell (frame), before any dithering.
std::vector<double> chirp_start_times(const WaveformConfig& cfg, int dwell_index);

}  // namespace radint
