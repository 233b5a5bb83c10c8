// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#include "radint/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "radint/common.hpp"

namespace radint {

std::optional<BeatParams> beat_params(const ChirpTiming& host, const ChirpTiming& intf,
                                      double tau)
{
    const TimeInterval overlap{std::max(0.0, tau), std::min(host.duration, tau + intf.duration)};
    if (overlap.empty())
    {
        return std::nullopt;
    }
    BeatParams b;
    b.f_m = host.carrier - intf.carrier + intf.slope * tau;
    b.alpha_m = host.slope - intf.slope;
    b.overlap = overlap;
    // Constant terms of the mixed phase, f_i tau - alpha_i tau^2 / 2 (cycles).
    const double cycles = std::fmod(intf.carrier * tau, 1.0) - 0.5 * intf.slope * tau * tau;
    b.phase = kTwoPi * std::fmod(cycles, 1.0);
    return b;
}

TimeInterval in_band_interval(const BeatParams& beat, double adc_rate)
{
    TimeInterval band = beat.overlap;
    const double f = beat.f_m;
    const double a = beat.alpha_m;
    if (a == 0.0)
    {
        if (f < 0.0 || f > adc_rate)
        {
            return {};
        }
        return band;
    }
    // 0 <= f + a t <= fs  <=>  t between (0 - f)/a and (fs - f)/a.
    double t_lo = -f / a;
    double t_hi = (adc_rate - f) / a;
    if (t_lo > t_hi)
    {
        std::swap(t_lo, t_hi);
    }
    band.begin = std::max(band.begin, t_lo);
    band.end = std::min(band.end, t_hi);
    if (band.end < band.begin)
    {
        return {};
    }
    return band;
}

double ChirpSchedule::jitter(long frame, int chirp) const
{
    if (dither_bound <= 0.0)
    {
        return 0.0;
    }
    const auto key = derive_seed({dither_seed, static_cast<std::uint64_t>(uid),
                                  static_cast<std::uint64_t>(frame),
                                  static_cast<std::uint64_t>(chirp)});
    return dither_bound * keyed_uniform(key);
}

double ChirpSchedule::chirp_start(long frame, int chirp) const
{
    return waveform.start_offset + static_cast<double>(frame) / waveform.fps +
           chirp * waveform.pri + jitter(frame, chirp);
}

ChirpTiming ChirpSchedule::chirp(long frame, int chirp) const
{
    return {waveform.carrier, waveform.slope, waveform.chirp_duration, chirp_start(frame, chirp)};
}

std::vector<double> ChirpSchedule::dwell_starts(long frame) const
{
    std::vector<double> out(static_cast<std::size_t>(waveform.n_chirps));
    for (int k = 0; k < waveform.n_chirps; ++k)
    {
        out[static_cast<std::size_t>(k)] = chirp_start(frame, k);
    }
    return out;
}

std::vector<InterfererArrival> interferer_arrivals(const ChirpSchedule& host,
                                                   const InterfererSource& intf,
                                                   int dwell_index)
{
    std::vector<InterfererArrival> out;
    const WaveformConfig& hw = host.waveform;
    const WaveformConfig& iw = intf.schedule.waveform;
    const double frame_period = 1.0 / iw.fps;
    const double jmax = intf.schedule.dither_bound;

    for (int k = 0; k < hw.n_chirps; ++k)
    {
        const double a = host.chirp_start(dwell_index, k);
        const double b = a + hw.chirp_duration;
        for (const auto& path : intf.paths)
        {
            // Transmit start s overlaps iff a - D - T_i < s < b - D.
            const double lo = a - path.delay - iw.chirp_duration;
            const double hi = b - path.delay;
            const long f_first = static_cast<long>(
                std::floor((lo - iw.start_offset - (iw.n_chirps - 1) * iw.pri - jmax) / frame_period));
            const long f_last = static_cast<long>(std::floor((hi - iw.start_offset) / frame_period));
            for (long f = f_first; f <= f_last; ++f)
            {
                const double frame_start = iw.start_offset + static_cast<double>(f) * frame_period;
                const int q_first = std::max(0, static_cast<int>(std::ceil((lo - frame_start - jmax) / iw.pri)));
                const int q_last = std::min(iw.n_chirps - 1,
                                            static_cast<int>(std::floor((hi - frame_start) / iw.pri)));
                for (int q = q_first; q <= q_last; ++q)
                {
                    const ChirpTiming c = intf.schedule.chirp(f, q);
                    const double arrival = c.start + path.delay;
                    if (!(arrival < b && arrival + c.duration > a))
                    {
                        continue;
                    }
                    out.push_back({k, arrival - a, path.amplitude, path.phase, c});
                }
            }
        }
    }
    return out;
}

double ThermalModel::sample_power(double adc_rate) const
{
    return dbm_to_watts(kt0_dbm_per_hz + noise_figure_db) * adc_rate;
}

IFCube make_cube(const ChirpSchedule& host, int dwell_index)
{
    IFCube cube;
    cube.waveform = host.waveform;
    cube.n_fast = host.waveform.n_fast();
    cube.n_chirps = host.waveform.n_chirps;
    cube.chirp_starts = host.dwell_starts(dwell_index);
    cube.samples.assign(static_cast<std::size_t>(cube.n_fast) * cube.n_chirps, cdouble{});
    return cube;
}

int add_beat(std::span<cdouble> row, const BeatParams& beat, double adc_rate, bool lpf_gating)
{
    const TimeInterval span = lpf_gating ? in_band_interval(beat, adc_rate) : beat.overlap;
    // Out of band comes back as {0, 0}; a zero-length window holds no samples.
    if (span.empty())
    {
        return 0;
    }
    const int n = static_cast<int>(row.size());
    const int m_first = std::max(0, static_cast<int>(std::ceil(span.begin * adc_rate - 1e-9)));
    const int m_last = std::min(n - 1, static_cast<int>(std::floor(span.end * adc_rate + 1e-9)));
    const double dt = 1.0 / adc_rate;
    for (int m = m_first; m <= m_last; ++m)
    {
        const double t = m * dt;
        const double cycles = beat.f_m * t + 0.5 * beat.alpha_m * t * t;
        const double phase = kTwoPi * (cycles - std::floor(cycles)) + beat.phase;
        row[static_cast<std::size_t>(m)] += std::polar(beat.amplitude, phase);
    }
    return std::max(0, m_last - m_first + 1);
}

void add_target(IFCube& cube, const TargetEcho& target)
{
    if (target.power <= 0.0)
    {
        return;
    }
    const WaveformConfig& w = cube.waveform;
    const double amplitude = std::sqrt(target.power);
    const double beat = 2.0 * target.range * w.slope / kSpeedOfLight;
    const double t0 = cube.chirp_starts.front();
    const double dt = 1.0 / w.adc_rate;
    // The fast-time tone is common to all chirps; only the carrier phase moves.
    std::vector<cdouble> tone(static_cast<std::size_t>(cube.n_fast));
    for (int m = 0; m < cube.n_fast; ++m)
    {
        const double cycles = beat * m * dt;
        tone[static_cast<std::size_t>(m)] = std::polar(amplitude, kTwoPi * (cycles - std::floor(cycles)));
    }
    for (int k = 0; k < cube.n_chirps; ++k)
    {
        const double range_k = target.range + target.radial_speed * (cube.chirp_starts[k] - t0);
        const double carrier_cycles = std::fmod(2.0 * w.carrier * range_k / kSpeedOfLight, 1.0);
        const cdouble rot = std::polar(1.0, kTwoPi * carrier_cycles);
        auto row = cube.chirp_row(k);
        for (int m = 0; m < cube.n_fast; ++m)
        {
            row[static_cast<std::size_t>(m)] += tone[static_cast<std::size_t>(m)] * rot;
        }
    }
}

void add_interference(IFCube& cube, const ChirpSchedule& host, int dwell_index,
                      const InterfererSource& source, bool lpf_gating)
{
    const ChirpTiming host_chirp{host.waveform.carrier, host.waveform.slope,
                                 host.waveform.chirp_duration, 0.0};
    for (const auto& arrival : interferer_arrivals(host, source, dwell_index))
    {
        auto beat = beat_params(host_chirp, arrival.chirp, arrival.tau);
        if (!beat)
        {
            continue;
        }
        beat->amplitude = arrival.amplitude;
        beat->phase += arrival.phase;
        add_beat(cube.chirp_row(arrival.host_chirp), *beat, host.waveform.adc_rate, lpf_gating);
    }
}

void add_thermal_noise(IFCube& cube, const ThermalModel& noise, Rng& rng)
{
    const double sigma = std::sqrt(0.5 * noise.sample_power(cube.waveform.adc_rate));
    for (auto& s : cube.samples)
    {
        const double re = rng.normal();
        const double im = rng.normal();
        s += cdouble{sigma * re, sigma * im};
    }
}

IFCube synthesize_dwell(const ChirpSchedule& host, int dwell_index,
                        std::span<const TargetEcho> targets,
                        std::span<const InterfererSource> interferers, const ThermalModel& noise,
                        Rng& rng, const SynthesisOptions& options)
{
    IFCube cube = make_cube(host, dwell_index);
    if (options.thermal_noise)
    {
        add_thermal_noise(cube, noise, rng);
    }
    for (const auto& t : targets)
    {
        add_target(cube, t);
    }
    for (const auto& src : interferers)
    {
        add_interference(cube, host, dwell_index, src, options.lpf_gating);
    }
    return cube;
}

}  // namespace radint
