// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#include "radint/waveform.hpp"

#include <cmath>

#include <fmt/format.h>

#include "radint/common.hpp"

namespace radint {

namespace {
constexpr double kUs = 1e-6;
constexpr double kMHzPerUs = 1e12;
constexpr double kGHz = 1e9;
constexpr double kMaxSweep = 4e9;
constexpr int kMaxRedraws = 10'000;
}  // namespace

std::string_view to_string(RadarType type)
{
    switch (type)
    {
    case RadarType::LRR: return "LRR";
    case RadarType::SRR: return "SRR";
    case RadarType::SBZA: return "SBZA";
    case RadarType::USRR: return "USRR";
    }
    return "?";
}

RadarType parse_radar_type(std::string_view name)
{
    if (name == "LRR") return RadarType::LRR;
    if (name == "SRR") return RadarType::SRR;
    if (name == "SBZA") return RadarType::SBZA;
    if (name == "USRR") return RadarType::USRR;
    throw ConfigError(fmt::format("unknown radar type '{}'", name));
}

bool is_host_type(RadarType type)
{
    return type != RadarType::USRR;
}

int WaveformConfig::n_fast() const
{
    // The epsilon keeps clock drift (which scales adc_rate and chirp_duration
    // inversely) from dropping a sample to rounding.
    return static_cast<int>(std::floor(adc_rate * chirp_duration + 1e-6));
}

double WaveformConfig::wavelength() const
{
    return kSpeedOfLight / carrier;
}

void WaveformConfig::validate() const
{
    const bool positive = pri > 0 && slope > 0 && chirp_duration > 0 && carrier > 0 &&
                          n_chirps > 0 && fps > 0 && n_elements > 0 && tx_power > 0 &&
                          element_gain > 0 && adc_rate > 0 && start_offset >= 0;
    if (!positive)
    {
        throw ConfigError("waveform fields must be strictly positive");
    }
    if (chirp_duration > pri * (1 + 1e-12))
    {
        throw ConfigError(fmt::format("chirp duration {} s exceeds PRI {} s",
                                      chirp_duration, pri));
    }
    if (sweep_bandwidth() > kMaxSweep * (1 + 1e-9))
    {
        throw ConfigError(fmt::format("sweep {} Hz exceeds the 4 GHz band",
                                      sweep_bandwidth()));
    }
    if (dwell_length() > frame_period() * (1 + 1e-12))
    {
        throw ConfigError(fmt::format("dwell {} s does not fit the {} s frame",
                                      dwell_length(), frame_period()));
    }
}

WaveformRanges default_ranges(RadarType type)
{
    WaveformRanges r;
    r.carrier = {77 * kGHz, 81 * kGHz};
    r.fps = {25, 30};
    r.tx_power_dbm = 10.0;
    r.adc_rate = 30e6;
    switch (type)
    {
    case RadarType::LRR:
        r.pri = {18 * kUs, 20 * kUs};
        r.slope = {9 * kMHzPerUs, 11 * kMHzPerUs};
        r.chirp_duration = {14 * kUs, 16 * kUs};
        r.n_chirps = {256, 512};
        r.n_elements = 12;
        r.gain_dbi = 14.0;
        break;
    case RadarType::SRR:
    case RadarType::USRR:
        r.pri = {22 * kUs, 27 * kUs};
        r.slope = {27 * kMHzPerUs, 33 * kMHzPerUs};
        r.chirp_duration = {15 * kUs, 20 * kUs};
        r.n_chirps = {128, 256};
        r.n_elements = 8;
        r.gain_dbi = 12.8;
        break;
    case RadarType::SBZA:
        r.pri = {30 * kUs, 35 * kUs};
        r.slope = {35 * kMHzPerUs, 39 * kMHzPerUs};
        r.chirp_duration = {20 * kUs, 25 * kUs};
        r.n_chirps = {128, 256};
        r.n_elements = 4;
        r.gain_dbi = 12.8;
        break;
    }
    if (type == RadarType::USRR)
    {
        r.gain_dbi = 10.0;
    }
    return r;
}

WaveformTable::WaveformTable()
{
    for (auto t : {RadarType::LRR, RadarType::SRR, RadarType::SBZA, RadarType::USRR})
    {
        ranges_[t] = default_ranges(t);
    }
}

const WaveformRanges& WaveformTable::at(RadarType type) const
{
    return ranges_.at(type);
}

void WaveformTable::set(RadarType type, const WaveformRanges& ranges)
{
    ranges_[type] = ranges;
}

WaveformConfig sample_waveform(RadarType type, Rng& rng)
{
    static const WaveformTable defaults;
    return sample_waveform(type, rng, defaults);
}

WaveformConfig sample_waveform(RadarType type, Rng& rng, const WaveformTable& table)
{
    const WaveformRanges& r = table.at(type);
    auto draw = [&rng](const ParamRange& p) { return rng.uniform(p.min, p.max); };

    WaveformConfig cfg;
    cfg.pri = draw(r.pri);
    cfg.slope = draw(r.slope);
    cfg.chirp_duration = draw(r.chirp_duration);
    cfg.carrier = draw(r.carrier);
    cfg.n_chirps = static_cast<int>(rng.uniform_int(static_cast<std::int64_t>(r.n_chirps.min),
                                                    static_cast<std::int64_t>(r.n_chirps.max)));
    cfg.fps = draw(r.fps);
    cfg.n_elements = r.n_elements;
    cfg.tx_power = dbm_to_watts(r.tx_power_dbm);
    cfg.element_gain = db_to_linear(r.gain_dbi);
    cfg.adc_rate = r.adc_rate;
    cfg.start_offset = 0.0;

    int redraws = 0;
    while (cfg.chirp_duration > cfg.pri)
    {
        if (r.chirp_duration.min > r.pri.max || ++redraws > kMaxRedraws)
        {
            throw ConfigError(fmt::format("{} ranges cannot fit the chirp in its PRI",
                                          to_string(type)));
        }
        cfg.chirp_duration = draw(r.chirp_duration);
    }
    while (cfg.dwell_length() > cfg.frame_period())
    {
        if (++redraws > kMaxRedraws)
        {
            throw ConfigError(fmt::format("{} ranges cannot fit the dwell in its frame",
                                          to_string(type)));
        }
        cfg.n_chirps = static_cast<int>(rng.uniform_int(
            static_cast<std::int64_t>(r.n_chirps.min), static_cast<std::int64_t>(r.n_chirps.max)));
    }
    cfg.validate();
    return cfg;
}

WaveformConfig radar_a_profile()
{
    WaveformConfig cfg;
    cfg.pri = 27.4 * kUs;
    cfg.slope = 26 * kMHzPerUs;
    cfg.adc_rate = 25e6;
    cfg.chirp_duration = 18.88 * kUs;
    cfg.carrier = 76.889 * kGHz;
    cfg.n_chirps = 512;
    cfg.fps = 15;
    cfg.n_elements = 12;
    cfg.tx_power = dbm_to_watts(10.0);
    cfg.element_gain = db_to_linear(14.0);
    cfg.start_offset = 0.0;
    return cfg;
}

std::complex<double> chirp_value(const WaveformConfig& cfg, double t)
{
    if (t < 0.0 || t > cfg.chirp_duration)
    {
        return {0.0, 0.0};
    }
    // Reduce the carrier term modulo one cycle before scaling by 2pi.
    const double carrier_cycles = std::fmod(cfg.carrier * t, 1.0);
    const double phase = -kTwoPi * (carrier_cycles + 0.5 * cfg.slope * t * t);
    return std::polar(1.0, phase);
}

void ClockModel::validate() const
{
    if (!(std::abs(drift_ppm) <= 100.0))
    {
        throw ConfigError(fmt::format("clock drift {} ppm exceeds 100 ppm", drift_ppm));
    }
}

WaveformConfig apply_clock_drift(const WaveformConfig& cfg, const ClockModel& clock)
{
    clock.validate();
    const double k = clock.factor();
    WaveformConfig out = cfg;
    out.carrier *= k;
    out.slope *= k;
    out.adc_rate *= k;
    out.fps *= k;
    out.pri /= k;
    out.chirp_duration /= k;
    return out;
}

std::vector<double> chirp_start_times(const WaveformConfig& cfg, int dwell_index)
{
    std::vector<double> times(static_cast<std::size_t>(cfg.n_chirps));
    const double frame_start = cfg.start_offset + dwell_index / cfg.fps;
    for (int k = 0; k < cfg.n_chirps; ++k)
    {
        times[static_cast<std::size_t>(k)] = frame_start + k * cfg.pri;
    }
    return times;
}

}  // namespace radint
