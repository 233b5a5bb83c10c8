// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "radint/common.hpp"
#include "radint/processing.hpp"
#include "radint/synthesis.hpp"
#include "radint/waveform.hpp"

using namespace radint;

namespace {

ChirpSchedule host_schedule_a(int n_chirps = 64)
{
    WaveformConfig w = radar_a_profile();
    w.n_chirps = n_chirps;
    return {w, 1, 0.0, 0};
}

InterfererSource interferer(WaveformConfig w, double amplitude, double delay = 1e-7)
{
    InterfererSource s;
    s.schedule = {w, 2, 0.0, 0};
    s.paths.push_back({delay, amplitude, 0.0});
    return s;
}

double total_power(const IFCube& c)
{
    double s = 0.0;
    for (const auto& v : c.samples)
    {
        s += std::norm(v);
    }
    return s;
}

}  // namespace

TEST_SUITE("synthesis")
{
    TEST_CASE("beat parameters")
    {
        const ChirpTiming h{77e9, 26e12, 18.88e-6, 0.0};
        const ChirpTiming i{77e9, 26e12, 18.88e-6, 0.0};
        const auto b = beat_params(h, i, 0.5e-6);
        REQUIRE(b);
        CHECK(b->f_m == doctest::Approx(13e6));
        CHECK(b->alpha_m == 0.0);
        CHECK(b->overlap.begin == doctest::Approx(0.5e-6));
        CHECK(b->overlap.end == doctest::Approx(18.88e-6));

        const auto same = beat_params(h, i, 0.0);
        REQUIRE(same);
        CHECK(same->f_m == 0.0);
        CHECK(same->alpha_m == 0.0);

        CHECK_FALSE(beat_params(h, i, 30e-6));
        CHECK_FALSE(beat_params(h, i, -20e-6));

        const ChirpTiming shorter{77e9, 30e12, 5e-6, 0.0};
        const auto early = beat_params(h, shorter, -2e-6);
        REQUIRE(early);
        CHECK(early->overlap.begin == 0.0);
        CHECK(early->overlap.end == doctest::Approx(3e-6));
        CHECK(early->overlap.length() <= std::min(h.duration, shorter.duration));
    }

    TEST_CASE("13 MHz beat lands on its FFT bin")
    {
        BeatParams b;
        b.f_m = 13e6;
        b.overlap = {0.0, 18.88e-6};
        std::vector<cdouble> row(472);
        add_beat(row, b, 25e6, true);
        int best = 0;
        double best_p = 0.0;
        for (int k = 0; k < 472; ++k)
        {
            // Direct DFT, independent of the FFT library.
            cdouble acc{};
            for (int m = 0; m < 472; ++m)
            {
                acc += row[m] * std::polar(1.0, -kTwoPi * k * m / 472.0);
            }
            if (std::norm(acc) > best_p)
            {
                best_p = std::norm(acc);
                best = k;
            }
        }
        CHECK(best == static_cast<int>(std::lround(13e6 / 25e6 * 472)));
    }

    TEST_CASE("in-band samples match a brute-force count")
    {
        Rng rng(31);
        for (int trial = 0; trial < 300; ++trial)
        {
            BeatParams b;
            b.f_m = rng.uniform(-60e6, 60e6);
            b.alpha_m = rng.uniform(-20e12, 20e12);
            b.overlap = {rng.uniform(0.0, 8e-6), rng.uniform(8e-6, 18.88e-6)};
            const double fs = 25e6;
            std::vector<cdouble> row(472);
            const int n = add_beat(row, b, fs, true);
            int oracle = 0, nonzero = 0;
            for (int m = 0; m < 472; ++m)
            {
                const double t = m / fs;
                const double f = b.f_m + b.alpha_m * t;
                // Boundary samples within rounding of an edge are ambiguous.
                const bool in = t >= b.overlap.begin && t <= b.overlap.end && f >= 0.0 && f <= fs;
                oracle += in;
                nonzero += std::abs(row[m]) > 0.0;
            }
            CHECK(std::abs(n - oracle) <= 1);
            CHECK(nonzero == n);
        }
    }

    TEST_CASE("commensurate PRIs give a stationary offset")
    {
        const ChirpSchedule host = host_schedule_a(32);
        WaveformConfig iw = host.waveform;
        iw.start_offset = 3e-6;
        const auto arr = interferer_arrivals(host, interferer(iw, 1.0, 2e-7), 0);
        REQUIRE(arr.size() >= 32);
        for (const auto& a : arr)
        {
            if (a.chirp.start + 2e-7 - host.chirp_start(0, a.host_chirp) > 0.0)
            {
                CHECK(a.tau == doctest::Approx(3.2e-6).epsilon(1e-9));
            }
        }
    }

    TEST_CASE("offset walks by the PRI difference")
    {
        const ChirpSchedule host = host_schedule_a(64);
        WaveformConfig iw = host.waveform;
        iw.pri = host.waveform.pri + 0.3e-6;
        iw.start_offset = 1e-6;
        const auto arr = interferer_arrivals(host, interferer(iw, 1.0, 0.0), 0);
        // Chirp q of the interferer meets host chirp q while the walk is small.
        for (const auto& a : arr)
        {
            const int k = a.host_chirp;
            const double q = std::round((a.chirp.start - iw.start_offset) / iw.pri);
            if (static_cast<int>(q) == k)
            {
                const double expected = 1e-6 + k * (iw.pri - host.waveform.pri);
                CHECK(a.tau == doctest::Approx(expected).epsilon(1e-9));
            }
        }
    }

    TEST_CASE("noise power matches kT fs NF")
    {
        ChirpSchedule host = host_schedule_a(512);
        IFCube c = make_cube(host, 0);
        ThermalModel n;
        Rng rng(32);
        add_thermal_noise(c, n, rng);
        const double p = total_power(c) / c.samples.size();
        const double expected = dbm_to_watts(-174.0 + 12.0) * 25e6;
        CHECK(n.sample_power(25e6) == doctest::Approx(expected));
        CHECK(std::abs(p / expected - 1.0) < 0.03);
    }

    TEST_CASE("target tone lands on its range bin and Doppler bin")
    {
        ChirpSchedule host = host_schedule_a(128);
        const WaveformConfig& w = host.waveform;
        IFCube c = make_cube(host, 0);
        const double range = 60.0;
        const double speed = 5.0;
        add_target(c, {range, speed, 1e-10});
        const auto map = range_doppler(c, WindowKind::rect);
        int br = 0, bd = 0;
        double best = 0.0;
        for (int r = 0; r < map.n_range; ++r)
        {
            for (int d = 0; d < map.n_doppler; ++d)
            {
                if (map.at(r, d) > best)
                {
                    best = map.at(r, d);
                    br = r;
                    bd = d;
                }
            }
        }
        const double beat = 2.0 * range * w.slope / kSpeedOfLight;
        CHECK(br == static_cast<int>(std::lround(beat / w.adc_rate * w.n_fast())));
        CHECK(bd == static_cast<int>(std::lround(speed_to_doppler_bin(w, speed))) % w.n_chirps);
    }

    TEST_CASE("superposition with a shared noise seed")
    {
        const ChirpSchedule host = host_schedule_a(32);
        WaveformConfig iw = host.waveform;
        iw.slope = 20e12;
        iw.carrier = host.waveform.carrier + 1e6;
        const std::vector<InterfererSource> intf{interferer(iw, 1e-5)};
        const std::vector<TargetEcho> tgt{{40.0, 0.0, 1e-11}};
        const ThermalModel noise;
        Rng r1(5), r2(5), r3(5), r4(5);
        const IFCube both = synthesize_dwell(host, 0, tgt, intf, noise, r1);
        const IFCube t_only = synthesize_dwell(host, 0, tgt, {}, noise, r2);
        const IFCube i_only = synthesize_dwell(host, 0, {}, intf, noise, r3);
        const IFCube n_only = synthesize_dwell(host, 0, {}, {}, noise, r4);
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < both.samples.size(); ++i)
        {
            const cdouble sum = t_only.samples[i] + i_only.samples[i] - n_only.samples[i];
            worst = std::max(worst, std::abs(both.samples[i] - sum));
            scale = std::max(scale, std::abs(both.samples[i]));
        }
        CHECK(worst <= 1e-12 * scale);
    }

    TEST_CASE("gating never adds energy and amplitude scales power")
    {
        const ChirpSchedule host = host_schedule_a(32);
        Rng rng(33);
        for (int trial = 0; trial < 20; ++trial)
        {
            WaveformConfig iw = host.waveform;
            iw.slope = rng.uniform(10e12, 40e12);
            iw.carrier = host.waveform.carrier + rng.uniform(-100e6, 100e6);
            iw.start_offset = rng.uniform(0.0, iw.pri);
            IFCube gated = make_cube(host, 0);
            IFCube open = make_cube(host, 0);
            add_interference(gated, host, 0, interferer(iw, 1.0), true);
            add_interference(open, host, 0, interferer(iw, 1.0), false);
            CHECK(total_power(gated) <= total_power(open) * (1 + 1e-12));

            IFCube doubled = make_cube(host, 0);
            add_interference(doubled, host, 0, interferer(iw, 2.0), true);
            if (total_power(gated) > 0.0)
            {
                CHECK(total_power(doubled) / total_power(gated) == doctest::Approx(4.0).epsilon(1e-9));
            }
        }
    }

    TEST_CASE("dither stays inside its bound")
    {
        ChirpSchedule s = host_schedule_a(64);
        s.dither_bound = 2e-6;
        s.dither_seed = 7;
        double lo = 1.0, hi = -1.0;
        for (int k = 0; k < 64; ++k)
        {
            const double j = s.jitter(0, k);
            lo = std::min(lo, j);
            hi = std::max(hi, j);
        }
        CHECK(lo >= 0.0);
        CHECK(hi <= 2e-6);
        CHECK(hi > lo);
        CHECK(s.jitter(3, 5) == s.jitter(3, 5));
    }
}
