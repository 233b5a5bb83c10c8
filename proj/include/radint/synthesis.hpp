// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "radint/rng.hpp"
#include "radint/waveform.hpp"

namespace radint {

using cdouble = std::complex<double>;

/// One chirp as seen at the host: its sweep parameters and start time.
struct ChirpTiming
{
    double carrier = 0.0;  // Hz
    double slope = 0.0;    // Hz/s
    double duration = 0.0; // s
    double start = 0.0;    // s, absolute
};

struct TimeInterval
{
    double begin = 0.0;
    double end = 0.0;

    bool empty() const { return !(end > begin); }
    double length() const { return empty() ? 0.0 : end - begin; }
};

/// Post-mixer beat chirp x(t) = A exp(j(2pi(f_m t + alpha_m t^2 / 2) + phase)),
/// t relative to the host chirp start.
struct BeatParams
{
    double f_m = 0.0;
    double alpha_m = 0.0;
    TimeInterval overlap;  // within [0, T_v], length <= min(T_v, T_i)
    double amplitude = 1.0;
    double phase = 0.0;  // constant phase terms, rad
};

/// Beat of an interferer chirp arriving tau seconds after the host chirp
/// start. Empty when the two supports do not overlap in time.
std::optional<BeatParams> beat_params(const ChirpTiming& host, const ChirpTiming& intf,
                                      double tau);

/// Times t within the overlap for which the instantaneous beat frequency
/// f_m + alpha_m t lies in the LPF passband [0, adc_rate].
TimeInterval in_band_interval(const BeatParams& beat, double adc_rate);

/// A radar's transmit timeline: chirp k of frame f starts at
/// start_offset + f / fps + k * pri + jitter(f, k), jitter in [0, dither_bound].
struct ChirpSchedule
{
    WaveformConfig waveform;  // effective (drifted)
    int uid = 0;
    double dither_bound = 0.0;
    std::uint64_t dither_seed = 0;

    double jitter(long frame, int chirp) const;
    double chirp_start(long frame, int chirp) const;
    ChirpTiming chirp(long frame, int chirp) const;
    std::vector<double> dwell_starts(long frame) const;
};

/// One propagation path of an interferer into the host receiver.
struct InterfererPath
{
    double delay = 0.0;      // s, path length / c
    double amplitude = 0.0;  // sqrt(W) at the host IF
    double phase = 0.0;      // rad, e.g. arg of the reflection coefficient
};

struct InterfererSource
{
    ChirpSchedule schedule;
    std::vector<InterfererPath> paths;
};

/// An interferer chirp that overlaps host chirp `host_chirp`.
struct InterfererArrival
{
    int host_chirp = 0;
    double tau = 0.0;  // arrival time minus host chirp start
    double amplitude = 0.0;
    double phase = 0.0;
    ChirpTiming chirp;
};

/// Interferer chirps, per path, whose delayed transmit window overlaps a host
/// chirp of dwell `dwell_index`. Geometry is frozen over the dwell.
std::vector<InterfererArrival> interferer_arrivals(const ChirpSchedule& host,
                                                   const InterfererSource& intf,
                                                   int dwell_index);

struct ThermalModel
{
    double noise_figure_db = 12.0;
    double kt0_dbm_per_hz = -174.0;

    /// Complex noise power per IF sample (W) for sampling rate fs.
    double sample_power(double adc_rate) const;
};

/// Point target echo for one dwell.
struct TargetEcho
{
    double range = 0.0;         // m
    double radial_speed = 0.0;  // m/s
    double power = 0.0;         // W, from the radar equation
};

struct SynthesisOptions
{
    bool lpf_gating = true;
    bool thermal_noise = true;
};

/// Complex IF samples of one host dwell, row-major [chirp][fast-time].
struct IFCube
{
    int n_fast = 0;
    int n_chirps = 0;
    WaveformConfig waveform;            // host effective waveform
    std::vector<double> chirp_starts;   // s, absolute
    std::vector<cdouble> samples;

    double fast_time_step() const { return 1.0 / waveform.adc_rate; }
    cdouble& at(int chirp, int fast) { return samples[static_cast<std::size_t>(chirp) * n_fast + fast]; }
    const cdouble& at(int chirp, int fast) const
    {
        return samples[static_cast<std::size_t>(chirp) * n_fast + fast];
    }
    std::span<cdouble> chirp_row(int chirp)
    {
        return {samples.data() + static_cast<std::size_t>(chirp) * n_fast,
                static_cast<std::size_t>(n_fast)};
    }
    std::span<const cdouble> chirp_row(int chirp) const
    {
        return {samples.data() + static_cast<std::size_t>(chirp) * n_fast,
                static_cast<std::size_t>(n_fast)};
    }
};

/// Empty (all-zero) cube shaped for the host's dwell.
IFCube make_cube(const ChirpSchedule& host, int dwell_index);

/// Adds the beat chirp of one arrival to a host chirp row; returns the number
/// of samples written.
int add_beat(std::span<cdouble> row, const BeatParams& beat, double adc_rate, bool lpf_gating);

void add_target(IFCube& cube, const TargetEcho& target);
void add_interference(IFCube& cube, const ChirpSchedule& host, int dwell_index,
                      const InterfererSource& source, bool lpf_gating = true);
void add_thermal_noise(IFCube& cube, const ThermalModel& noise, Rng& rng);

/// Host IF cube for one dwell: echoes + gated interferer beats + noise.
IFCube synthesize_dwell(const ChirpSchedule& host, int dwell_index,
                        std::span<const TargetEcho> targets,
                        std::span<const InterfererSource> interferers,
                        const ThermalModel& noise, Rng& rng,
                        const SynthesisOptions& options = {});

}  // namespace radint
