// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#include "doctest.h"

#include <cmath>
#include <set>

#include "radint/common.hpp"
#include "radint/config.hpp"
#include "radint/mitigation.hpp"
#include "radint/simulation.hpp"
#include "radint/synthesis.hpp"

using namespace radint;

namespace {

Scenario equipped(DensityLabel d, Topology topo, RadarType host, std::uint64_t seed, double rate = 1.0)
{
    Rng rng(seed);
    Scenario s = generate_highway(d, RoadGeometry{}, HighwayOptions{}, rng);
    equip_scenario(s, topo, host, rng);
    return assign_penetration(std::move(s), rate, rng);
}

bool same_geometry(const Scenario& a, const Scenario& b)
{
    if (a.vehicles.size() != b.vehicles.size() || !(a.geometry == b.geometry))
    {
        return false;
    }
    for (std::size_t i = 0; i < a.vehicles.size(); ++i)
    {
        const auto& va = a.vehicles[i];
        const auto& vb = b.vehicles[i];
        if (!(va.center == vb.center) || va.heading != vb.heading || va.speed != vb.speed ||
            va.radars.size() != vb.radars.size())
        {
            return false;
        }
        for (std::size_t r = 0; r < va.radars.size(); ++r)
        {
            if (!(va.radars[r].mount == vb.radars[r].mount) ||
                va.radars[r].boresight != vb.radars[r].boresight || va.radars[r].uid != vb.radars[r].uid)
            {
                return false;
            }
        }
    }
    return a.host_vehicle_id == b.host_vehicle_id && a.host_radar_index == b.host_radar_index;
}

MitigationPlan plan_for(Technique t)
{
    MitigationPlan p;
    p.technique = t;
    p.seed = 99;
    return p;
}

}  // namespace

TEST_SUITE("mitigation")
{
    TEST_CASE("technique names round-trip")
    {
        for (auto t : {Technique::none, Technique::predefined_frequency, Technique::predefined_polarization,
                       Technique::time_dithering, Technique::time_frequency_coding})
        {
            CHECK(parse_technique(to_string(t)) == t);
        }
        CHECK(parse_technique("tf_coding") == Technique::time_frequency_coding);
        CHECK_THROWS_AS(parse_technique("chirp_hopping"), ConfigError);
    }

    TEST_CASE("none leaves the scenario untouched")
    {
        const Scenario s = equipped(DensityLabel::medium, Topology::full, RadarType::SRR, 3);
        CHECK(apply_mitigation(s, plan_for(Technique::none)) == s);
    }

    TEST_CASE("every technique keeps geometry, ids and mounts")
    {
        const Scenario s = equipped(DensityLabel::medium, Topology::full, RadarType::SBZA, 4);
        for (auto t : {Technique::predefined_frequency, Technique::predefined_polarization,
                       Technique::time_dithering, Technique::time_frequency_coding})
        {
            CAPTURE(to_string(t));
            const Scenario m = apply_mitigation(s, plan_for(t));
            CHECK(same_geometry(s, m));
            CHECK(m.target == s.target);
        }
    }

    TEST_CASE("fit_waveform_to_band keeps the sweep inside the band")
    {
        WaveformConfig w;
        w.slope = 20e12;
        w.chirp_duration = 20e-6;  // 400 MHz
        w.pri = 22e-6;
        const FrequencyBand band{78e9, 79e9};
        for (double u : {0.0, 0.3, 1.0})
        {
            const auto f = fit_waveform_to_band(w, band, u);
            CHECK(f.carrier >= band.lo);
            CHECK(f.carrier + f.sweep_bandwidth() <= band.hi);
            CHECK(f.slope == w.slope);
        }
        // A band narrower than the sweep forces a shallower slope, same duration.
        const FrequencyBand narrow{77e9, 77.25e9};
        const auto f = fit_waveform_to_band(w, narrow, 0.5);
        CHECK(f.slope < w.slope);
        CHECK(f.chirp_duration == w.chirp_duration);
        CHECK(f.carrier + f.sweep_bandwidth() <= narrow.hi);
        CHECK_THROWS_AS(fit_waveform_to_band(w, FrequencyBand{77e9, 77e9}, 0.5), ConfigError);
        CHECK_THROWS_AS(fit_waveform_to_band(w, FrequencyBand{77e9, 77.001e9}, 0.5), ConfigError);
    }

    TEST_CASE("predefined frequency: each mount class stays in its band, drift included")
    {
        const BandPlan plan;
        for (std::uint64_t seed = 1; seed <= 5; ++seed)
        {
            const Scenario s = apply_predefined_frequency(
                equipped(DensityLabel::high, Topology::full, RadarType::LRR, seed), plan, seed);
            for (const auto& v : s.vehicles)
            {
                for (const auto& r : v.radars)
                {
                    const auto& band = plan.band_for(r.mount_class);
                    REQUIRE(r.band_assignment);
                    CHECK(*r.band_assignment == band);
                    const auto w = r.effective_waveform();
                    CHECK(w.carrier >= band.lo);
                    CHECK(w.carrier + w.sweep_bandwidth() <= band.hi);
                }
            }
        }
    }

    TEST_CASE("radars in disjoint bands leave the host cube untouched")
    {
        const BandPlan plan;
        Rng rng(12);
        const WaveformConfig w = sample_waveform(RadarType::SRR, rng);
        const WaveformConfig a = fit_waveform_to_band(w, plan.bands[0], 1.0);  // top of band 0
        const WaveformConfig b = fit_waveform_to_band(w, plan.bands[1], 0.0);  // bottom of band 1
        const ChirpSchedule host{a, 1, 0.0, 0};
        InterfererSource src{ChirpSchedule{b, 2, 0.0, 0}, {{1e-7, 1.0, 0.0}, {3e-7, 0.5, 1.0}}};
        {
            IFCube cube = make_cube(host, 0);
            add_interference(cube, host, 0, src, true);
            double e = 0.0;
            for (const auto& x : cube.samples)
            {
                e += std::norm(x);
            }
            CHECK(e == 0.0);
        }
        // Same band as a control: something lands.
        InterfererSource same{ChirpSchedule{a, 2, 0.0, 0}, {{1e-7, 1.0, 0.0}}};
        same.schedule.waveform.slope *= 1.01;
        IFCube cube = make_cube(host, 0);
        add_interference(cube, host, 0, same, true);
        double e = 0.0;
        for (const auto& x : cube.samples)
        {
            e += std::norm(x);
        }
        CHECK(e > 0.0);
    }

    TEST_CASE("polarization splits by direction of travel")
    {
        const Scenario s = apply_predefined_polarization(
            equipped(DensityLabel::medium, Topology::partial, RadarType::SRR, 6));
        int v = 0;
        int h = 0;
        for (const auto& veh : s.vehicles)
        {
            for (const auto& r : veh.radars)
            {
                const auto expect = std::cos(veh.heading) > 0.0 ? Polarization::V : Polarization::H;
                CHECK(r.polarization == expect);
                (r.polarization == Polarization::V ? v : h)++;
            }
        }
        CHECK(v > 0);
        CHECK(h > 0);
    }

    TEST_CASE("polarization factor")
    {
        const PolarizationParams p;
        CHECK(polarization_factor(Polarization::V, Polarization::V, PathKind::direct, p) == 1.0);
        CHECK(polarization_factor(Polarization::H, Polarization::H, PathKind::wall_reflect_lower, p) == 1.0);
        CHECK(polarization_factor(Polarization::V, Polarization::H, PathKind::direct, p) ==
              doctest::Approx(std::pow(10.0, -1.5)).epsilon(1e-12));
        CHECK(polarization_factor(Polarization::H, Polarization::V, PathKind::wall_reflect_upper, p) ==
              doctest::Approx(std::pow(10.0, -0.5)).epsilon(1e-12));
    }

    TEST_CASE("time dithering sets bounds and rejects jitter that overruns the PRI")
    {
        const Scenario s = equipped(DensityLabel::medium, Topology::full, RadarType::LRR, 7);
        DitherParams p;
        const Scenario d = apply_time_dithering(s, p);
        for (const auto& v : d.vehicles)
        {
            for (const auto& r : v.radars)
            {
                CHECK(r.dither_bound == p.jitter_bound);
                CHECK(r.waveform == s.vehicles[&v - d.vehicles.data()].radars[&r - v.radars.data()].waveform);
            }
        }
        p.dither_host = false;
        CHECK(apply_time_dithering(s, p).host_radar().dither_bound == 0.0);

        p.jitter_bound = 10e-6;  // LRR chirps of >= 10 us in an 18-22 us PRI
        bool overrun = false;
        for (const auto& v : s.vehicles)
        {
            for (const auto& r : v.radars)
            {
                const auto w = r.effective_waveform();
                overrun = overrun || w.chirp_duration + p.jitter_bound > w.pri;
            }
        }
        REQUIRE(overrun);
        CHECK_THROWS_AS(apply_time_dithering(s, p), ConfigError);
        p.jitter_bound = -1e-6;
        CHECK_THROWS_AS(apply_time_dithering(s, p), ConfigError);
    }

    TEST_CASE("dithered chirp starts stay within the bound")
    {
        const Scenario s = apply_time_dithering(
            equipped(DensityLabel::low, Topology::front, RadarType::LRR, 8), DitherParams{});
        const auto& r = s.host_radar();
        const ChirpSchedule c{r.effective_waveform(), r.uid, r.dither_bound, 1234};
        const auto nominal = chirp_start_times(c.waveform, 3);
        bool moved = false;
        for (int k = 0; k < c.waveform.n_chirps; ++k)
        {
            const double dt = c.chirp_start(3, k) - nominal[static_cast<std::size_t>(k)];
            CHECK(dt >= -1e-15);
            CHECK(dt <= r.dither_bound + 1e-15);
            moved = moved || dt != 0.0;
        }
        CHECK(moved);
    }

    TEST_CASE("time-frequency coding: distinct cells, dwell fits the slot, bands respected")
    {
        const TfCodingParams p;
        const Scenario s = apply_time_frequency_coding(
            equipped(DensityLabel::low, Topology::full, RadarType::SBZA, 9, 0.1), p, 5);
        REQUIRE(s.radar_count() <= static_cast<std::size_t>(p.grid()));
        std::set<std::pair<int, int>> cells;
        const double band_width = (p.band_hi - p.band_lo) / p.n_bands;
        for (const auto& v : s.vehicles)
        {
            for (const auto& r : v.radars)
            {
                REQUIRE(r.tf_slot);
                CHECK(cells.insert({r.tf_slot->band, r.tf_slot->slot}).second);
                const auto w = r.effective_waveform();
                CHECK(r.clock.drift_ppm == 0.0);
                CHECK(w.fps == p.frame_rate);
                CHECK(w.dwell_length() <= p.slot_length());
                const double lo = p.band_lo + r.tf_slot->band * band_width;
                CHECK(w.carrier >= lo);
                CHECK(w.carrier + w.sweep_bandwidth() <= lo + band_width);
                const double in_slot = w.start_offset - r.tf_slot->slot * p.slot_length();
                CHECK(std::abs(in_slot) < 1e-12);
            }
        }
        // The host's cell does not depend on who else is on the road.
        const Scenario sparse = apply_time_frequency_coding(
            equipped(DensityLabel::low, Topology::full, RadarType::SBZA, 9, 0.0), p, 5);
        CHECK(*sparse.host_radar().tf_slot == *s.host_radar().tf_slot);

        TfCodingParams slow = p;
        slow.frame_rate = 100.0;  // 2.5 ms slots cannot hold a 3 ms SBZA dwell
        CHECK_THROWS_AS(apply_time_frequency_coding(
                            equipped(DensityLabel::low, Topology::full, RadarType::SBZA, 9), slow, 5),
                        ConfigError);
        slow = p;
        slow.n_bands = 0;
        CHECK_THROWS_AS(apply_time_frequency_coding(s, slow, 5), ConfigError);
    }

    TEST_CASE("reassign_tf_cells moves listed radars next to the host and keeps jitter")
    {
        TfCodingParams p;
        p.sync_jitter = 1e-6;
        Scenario s = apply_time_frequency_coding(
            equipped(DensityLabel::medium, Topology::full, RadarType::SRR, 10), p, 11);
        const Scenario before = s;
        const auto& host = s.host_radar();
        const int host_cell = host.tf_slot->band + host.tf_slot->slot * p.n_bands;
        std::vector<int> priority;
        for (const auto& v : s.vehicles)
        {
            for (const auto& r : v.radars)
            {
                if (r.uid != host.uid && priority.size() < 5)
                {
                    priority.push_back(r.uid);
                }
            }
        }
        priority.insert(priority.begin(), host.uid);  // ignored
        priority.push_back(-42);                      // unknown, ignored
        reassign_tf_cells(s, p, priority);
        CHECK(s.host_radar() == before.host_radar());

        const double band_width = (p.band_hi - p.band_lo) / p.n_bands;
        for (std::size_t vi = 0; vi < s.vehicles.size(); ++vi)
        {
            for (std::size_t ri = 0; ri < s.vehicles[vi].radars.size(); ++ri)
            {
                const auto& r = s.vehicles[vi].radars[ri];
                const auto& o = before.vehicles[vi].radars[ri];
                const auto it = std::find(priority.begin() + 1, priority.end(), r.uid);
                if (it == priority.end() || r.uid == host.uid)
                {
                    CHECK(r == o);
                    continue;
                }
                const int rank = static_cast<int>(it - priority.begin()) - 1;
                const int cell = (host_cell + 1 + rank) % p.grid();
                CHECK(r.tf_slot->band == cell % p.n_bands);
                CHECK(r.tf_slot->slot == cell / p.n_bands);
                // Carrier translation only, and the sync jitter survives the slot change.
                CHECK(r.waveform.carrier - o.waveform.carrier ==
                      doctest::Approx((r.tf_slot->band - o.tf_slot->band) * band_width).epsilon(1e-12));
                CHECK(r.waveform.slope == o.waveform.slope);
                const double j_old = o.waveform.start_offset - o.tf_slot->slot * p.slot_length();
                const double j_new = r.waveform.start_offset - r.tf_slot->slot * p.slot_length();
                CHECK(j_new == doctest::Approx(j_old).epsilon(1e-9));
                CHECK(r.band_assignment->lo == doctest::Approx(p.band_lo + r.tf_slot->band * band_width));
            }
        }

        Scenario bare = equipped(DensityLabel::low, Topology::front, RadarType::LRR, 1);
        CHECK_THROWS_AS(reassign_tf_cells(bare, p, {}), ConfigError);
    }

    TEST_CASE("with a grid that fits everyone, penetration does not change detections")
    {
        RunConfig cfg;
        cfg.seed = 17;
        cfg.max_dwells = 6;
        const MatrixCell cell{DensityLabel::low, Topology::full, RadarType::SBZA};
        const SeedKeys keys = seed_keys(cfg, cell, 0);
        const Scenario alone = build_scenario(cfg, {cell, Technique::time_frequency_coding, 0.0, 0});
        const Scenario crowd = build_scenario(cfg, {cell, Technique::time_frequency_coding, 0.15, 0});
        REQUIRE(crowd.radar_count() > alone.radar_count());
        REQUIRE(crowd.radar_count() <= static_cast<std::size_t>(cfg.mitigation.tf.grid()));
        const auto a = run_dwells(alone, cfg, keys);
        const auto b = run_dwells(crowd, cfg, keys);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            CAPTURE(i);
            CHECK(a[i].detected == b[i].detected);
            CHECK(a[i].cfar_false_alarms == b[i].cfar_false_alarms);
            CHECK(a[i].fixed_false_alarms == b[i].fixed_false_alarms);
            CHECK(a[i].noise_floor_db == doctest::Approx(b[i].noise_floor_db).epsilon(1e-9));
        }
        // Not vacuous: unmitigated, the same radars do reach the host.
        const Scenario raw = build_scenario(cfg, {cell, Technique::none, 0.15, 0});
        int paths = 0;
        for (int d : dwell_schedule(raw, cfg.max_dwells))
        {
            paths += static_cast<int>(prepare_dwell(raw, cfg, d, keys.dither).interferers.size());
        }
        CHECK(paths > 0);
    }
}
