// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
// End-to-end checks, one PASS/FAIL line per criterion. Tolerances are fixed
// here on purpose; the harness only chooses which criterion to run.
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "radint/anechoic.hpp"
#include "radint/common.hpp"
#include "radint/config.hpp"
#include "radint/matrix_io.hpp"
#include "radint/metrics.hpp"
#include "radint/processing.hpp"
#include "radint/propagation.hpp"
#include "radint/report.hpp"
#include "radint/rng.hpp"
#include "radint/simulation.hpp"
#include "radint/synthesis.hpp"
#include "radint/waveform.hpp"

using namespace radint;
namespace fs = std::filesystem;

namespace {

struct Verdict
{
    bool pass = false;
    std::string detail;
};

int workers()
{
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

RunConfig preset(const std::string& name)
{
    return load_preset(read_text_file(default_presets_path()), name);
}

std::string csv_text(const RunConfig& c, const std::vector<SweepResult>& rows)
{
    std::ostringstream out;
    write_sweep_csv(out, c, rows);
    return out.str();
}

void save(const std::string& name, const std::string& text)
{
    std::ofstream(name, std::ios::binary) << text;
}

// ---------------------------------------------------------------------------

Verdict beat_oracle()
{
    const int n_draws = 1000;
    const double fs = 30e6;
    Rng rng(20240601);
    int worst_miss = 0;
    double worst_err = 0.0;
    int drawn = 0;
    while (drawn < n_draws)
    {
        WaveformConfig hw;
        hw.chirp_duration = rng.uniform(10e-6, 25e-6);
        hw.pri = hw.chirp_duration + 2e-6;
        hw.slope = rng.uniform(5e12, 30e12);
        hw.carrier = 77e9 + rng.uniform(0.0, 1e9);
        hw.n_chirps = 1;
        hw.fps = 20.0;
        hw.n_elements = 1;
        hw.tx_power = 0.01;
        hw.element_gain = 1.0;
        hw.adc_rate = fs;
        const int n = hw.n_fast();
        const double bin = fs / n;

        // Keep the beat sweep within a bin over the observation so the
        // spectrum has a single well-defined peak.
        const double alpha_m_max = 0.5 * bin / hw.chirp_duration;
        const double a_v = hw.slope;
        const double a_i = a_v - rng.uniform(-alpha_m_max, alpha_m_max);
        const double tau = rng.uniform(-0.5, 0.5) * hw.chirp_duration;
        const double t_i = rng.uniform(0.6, 1.0) * hw.chirp_duration;
        const double f_target = rng.uniform(0.05, 0.95) * fs;  // beat at tau
        const double f_v = hw.carrier;
        const double f_i = f_v + a_i * tau - f_target;

        const ChirpTiming host{f_v, a_v, hw.chirp_duration, 0.0};
        const ChirpTiming intf{f_i, a_i, t_i, tau};
        const auto beat = beat_params(host, intf, tau);
        if (!beat)
        {
            continue;
        }
        const TimeInterval band = in_band_interval(*beat, fs);
        if (band.length() < 0.25 * hw.chirp_duration)
        {
            continue;
        }
        ++drawn;

        IFCube cube = make_cube(ChirpSchedule{hw, 1, 0.0, 0}, 0);
        add_beat(cube.chirp_row(0), *beat, fs, true);
        const RangeChirpMatrix rc = range_fft(cube, WindowKind::rect);
        int peak = 0;
        for (int k = 1; k < rc.n_range; ++k)
        {
            if (std::norm(rc.at(0, k)) > std::norm(rc.at(0, peak)))
            {
                peak = k;
            }
        }
        // Independent prediction straight from the mixing model.
        const double t_mid = 0.5 * (band.begin + band.end);
        const double f_pred = (f_v - f_i + a_i * tau) + (a_v - a_i) * t_mid;
        const double err = std::abs(peak - f_pred / bin);
        worst_err = std::max(worst_err, err);
        if (err > 1.0)
        {
            ++worst_miss;
        }
    }
    return {worst_miss == 0,
            fmt::format("{} draws, worst |peak - prediction| = {:.3f} bin, {} outside 1 bin", drawn,
                        worst_err, worst_miss)};
}

// Snell plus the p-polarization Fresnel formula, written out independently.
std::complex<double> fresnel_p_oracle(double theta, std::complex<double> n)
{
    const std::complex<double> n2 = n * n;
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const std::complex<double> root = std::sqrt(n2 - s * s);
    return (n2 * c - root) / (n2 * c + root);
}

Verdict fresnel()
{
    const MaterialModel m;
    const auto r0 = fresnel_reflection(0.0, m);
    const double oracle0 = std::abs(fresnel_p_oracle(0.0, m.refractive_index));
    const bool normal_ok = std::abs(std::abs(r0) - 0.4323) <= 1e-4 && std::abs(std::abs(r0) - oracle0) <= 1e-12;

    const double theta = 89.9 * kPi / 180.0;
    const auto rg = fresnel_reflection(theta, m);
    const double dev = std::abs(rg + 1.0);
    const bool grazing_ok = dev <= 1e-3;
    // Leading-order grazing deviation of the p coefficient, 2 n^2 cos / sqrt(n^2 - 1).
    const auto n2 = m.refractive_index * m.refractive_index;
    const double dev_theory = std::abs(2.0 * n2 * std::cos(theta) / std::sqrt(n2 - 1.0));
    return {normal_ok && grazing_ok,
            fmt::format("|R(0)| = {:.6f} (oracle {:.6f}, target 0.4323 +- 1e-4: {}); "
                        "|R(89.9 deg) + 1| = {:.5f} (limit 1e-3: {}; first-order theory {:.5f})",
                        std::abs(r0), oracle0, normal_ok ? "ok" : "bad", dev,
                        grazing_ok ? "ok" : "bad", dev_theory)};
}

Verdict range_factor()
{
    const double f = max_range_factor(6.5);
    return {std::abs(f - 0.688) <= 1e-3,
            fmt::format("max_range_factor(6.5 dB) = {:.5f} ({:.1f}% reduction)", f, 100.0 * (1.0 - f))};
}

Verdict field_range()
{
    const double p_sim = 1.0;
    const double p_field = (5.0 / 55.0) * (5.0 / 55.0);
    const double r = field_equivalent_range(55.0, p_field, p_sim);
    const double rel = std::abs(r - 5.0) / 5.0;
    return {rel <= 1e-12, fmt::format("field_equivalent_range = {:.15f} m (rel err {:.2e})", r, rel)};
}

Verdict anechoic_field()
{
    AnechoicConfig a;
    a.layout = field_layout();
    a.counts = {0, 15};
    a.n_dwells = 50;
    a.n_seeds = 10;
    a.workers = workers();
    const auto curve = run_anechoic(a);
    const double rise = curve.back().rise_db;
    return {std::abs(rise - 6.5) <= 1.5,
            fmt::format("15 interferers: rise {:.2f} dB (p10 {:.2f}, p90 {:.2f}); target 6.5 +- 1.5",
                        rise, curve.back().p10_db, curve.back().p90_db)};
}

Verdict anechoic_chamber()
{
    AnechoicConfig a;
    a.layout = chamber_layout();
    a.counts = {0, 5, 15, 30};
    a.n_dwells = 50;
    a.n_seeds = 10;
    a.workers = workers();
    const auto curve = run_anechoic(a);
    const std::map<int, double> target{{5, 2.5}, {15, 5.0}, {30, 8.0}};
    bool ok = true;
    double prev = 0.0;
    std::string detail;
    for (const auto& p : curve)
    {
        if (p.count == 0)
        {
            continue;
        }
        const double want = target.at(p.count);
        ok = ok && std::abs(p.rise_db - want) <= 1.5 && p.rise_db > prev;
        prev = p.rise_db;
        detail += fmt::format("{}: {:.2f} dB (want {:.1f}) ", p.count, p.rise_db, want);
    }
    return {ok, detail + "; monotone, +-1.5 dB each"};
}

IFCube noise_cube(const ChirpSchedule& host, const ThermalModel& noise, Rng& rng)
{
    IFCube cube = make_cube(host, 0);
    add_thermal_noise(cube, noise, rng);
    return cube;
}

Verdict cfar_pfa()
{
    const ChirpSchedule host{radar_a_profile(), 1, 0.0, 0};
    const CfarParams cfar;  // pfa 1e-4
    const ThermalModel noise;
    Rng rng(7);
    long cells = 0;
    long alarms = 0;
    while (cells < 10'000'000)
    {
        const auto map = range_doppler(noise_cube(host, noise, rng), WindowKind::hann);
        alarms += static_cast<long>(ca_cfar(map, cfar).size());
        cells += static_cast<long>(map.power.size());
    }
    const double pfa = static_cast<double>(alarms) / static_cast<double>(cells);
    const double ratio = pfa / cfar.pfa;
    return {ratio >= 0.5 && ratio <= 2.0,
            fmt::format("{} alarms in {} cells: Pfa = {:.3e} ({:.2f}x configured {:.0e})", alarms,
                        cells, pfa, ratio, cfar.pfa)};
}

Verdict detector_contrast()
{
    const ChirpSchedule host{radar_a_profile(), 1, 0.0, 0};
    const ThermalModel noise;
    const ProcessingConfig proc;
    RunConfig cfg;
    cfg.model.noise = noise;
    cfg.processing = proc;
    const double nominal = calibrate_nominal_floor(host, cfg, 99);

    // +8 dB uniform floor: independent white interference carrying
    // (10^0.8 - 1) times the thermal power.
    ThermalModel extra = noise;
    extra.noise_figure_db = noise.noise_figure_db + linear_to_db(db_to_linear(8.0) - 1.0);

    const int n_maps = 20;
    Rng rng(11);
    long fixed_base = 0, fixed_raised = 0, cfar_base = 0, cfar_raised = 0;
    double rise = 0.0;
    for (int i = 0; i < n_maps; ++i)
    {
        IFCube cube = noise_cube(host, noise, rng);
        const auto base = range_doppler(cube, proc.window);
        add_thermal_noise(cube, extra, rng);
        const auto raised = range_doppler(cube, proc.window);
        rise += linear_to_db(mean_power(raised) / mean_power(base)) / n_maps;
        fixed_base += static_cast<long>(fixed_threshold(base, nominal, proc.fixed_threshold_db).size());
        fixed_raised += static_cast<long>(fixed_threshold(raised, nominal, proc.fixed_threshold_db).size());
        cfar_base += static_cast<long>(ca_cfar(base, proc.cfar).size());
        cfar_raised += static_cast<long>(ca_cfar(raised, proc.cfar).size());
    }
    // An empty baseline is scored as one alarm, the smallest nonzero count.
    const double fixed_ratio = static_cast<double>(fixed_raised) / static_cast<double>(std::max(fixed_base, 1L));
    const double cfar_ratio = static_cast<double>(cfar_raised) / static_cast<double>(std::max(cfar_base, 1L));
    const bool ok = fixed_ratio >= 100.0 && cfar_ratio >= 0.3 && cfar_ratio <= 3.0 && cfar_base > 0;
    return {ok, fmt::format("floor +{:.2f} dB over {} maps; fixed {} -> {} ({:.0f}x, need >= 100x); "
                            "CA-CFAR {} -> {} ({:.2f}x, need 0.3..3)",
                            rise, n_maps, fixed_base, fixed_raised, fixed_ratio, cfar_base,
                            cfar_raised, cfar_ratio)};
}

std::map<std::string, double> mean_pd_by_technique(const std::vector<SweepResult>& rows)
{
    std::map<std::string, std::pair<double, int>> acc;
    for (const auto& r : rows)
    {
        acc[r.technique].first += r.pd;
        acc[r.technique].second += 1;
    }
    std::map<std::string, double> out;
    for (const auto& [k, v] : acc)
    {
        out[k] = v.first / v.second;
    }
    return out;
}

Verdict mitigation_ordering()
{
    RunConfig c = preset("mitigation_high_full");
    c.workers = workers();
    const auto rows = run_sweep(c);
    save("acceptance_9_sweep.csv", csv_text(c, rows));
    auto pd = mean_pd_by_technique(rows);
    const double tf = pd["time_frequency_coding"];
    const double pf = pd["predefined_frequency"];
    const double pp = pd["predefined_polarization"];
    const double td = pd["time_dithering"];
    const double none = pd["none"];
    const bool ok = c.n_seeds >= 20 && tf >= pf && pf >= pp && pp >= td && pp >= none &&
                    std::abs(td - none) <= 0.05 && tf >= 0.9;
    return {ok, fmt::format("{} seeds x {} dwells: tf {:.3f} >= freq {:.3f} >= pol {:.3f} >= "
                            "{{dither {:.3f} ~ none {:.3f}, |diff| {:.3f} <= 0.05}}; tf >= 0.9",
                            c.n_seeds, c.max_dwells, tf, pf, pp, td, none, std::abs(td - none))};
}

Verdict baseline_bounds()
{
    RunConfig c = preset("baseline_bounds");
    c.workers = workers();
    const auto rows = run_sweep(c);
    save("acceptance_10_sweep.csv", csv_text(c, rows));
    // Mean PD per (cell, rate) over seeds.
    std::map<std::tuple<std::string, std::string, std::string, double>, std::pair<double, int>> acc;
    for (const auto& r : rows)
    {
        auto& a = acc[{r.scenario, r.topology, r.host_type, r.penetration_rate}];
        a.first += r.pd;
        a.second += 1;
    }
    auto pd = [&](const std::string& d, const std::string& t, const std::string& h, double rate) {
        const auto& a = acc.at({d, t, h, rate});
        return a.first / a.second;
    };
    int low_cells = 0;
    double worst_base = 1.0;
    for (const auto& [k, v] : acc)
    {
        if (std::get<3>(k) == 0.0)
        {
            const double p = v.first / v.second;
            worst_base = std::min(worst_base, p);
            low_cells += p < 0.95;
        }
    }
    std::string drops;
    bool drops_ok = true;
    for (const char* d : {"medium", "high"})
    {
        for (const char* h : {"LRR", "SRR", "SBZA"})
        {
            const double drop = pd(d, "full", h, 0.0) - pd(d, "full", h, 1.0);
            drops_ok = drops_ok && drop >= 0.3;
            drops += fmt::format(" {}/{} {:.2f}", d, h, drop);
        }
    }
    return {low_cells == 0 && drops_ok,
            fmt::format("rate 0: {} of 27 cells below 0.95 (worst {:.3f}); full-topology drop at rate 1 "
                        "(need >= 0.3):{}",
                        low_cells, worst_base, drops)};
}

std::vector<double> stored_power(const StoredMatrix& m, bool squared)
{
    std::vector<double> out(m.data.size());
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        const double v = m.data[i].real();
        out[i] = squared ? v * v : v;
    }
    return out;
}

// Rows whose median along the other axis sits at least 3 dB above the
// thermal reference: excess spread along the line, not a point.
int bands_over_floor(const PowerMatrix& m, double thermal_median)
{
    int n = 0;
    std::vector<double> line(static_cast<std::size_t>(m.cols));
    for (int r = 0; r < m.rows; ++r)
    {
        std::copy(m.data.begin() + static_cast<long>(r) * m.cols,
                  m.data.begin() + static_cast<long>(r + 1) * m.cols, line.begin());
        std::nth_element(line.begin(), line.begin() + m.cols / 2, line.end());
        n += line[static_cast<std::size_t>(m.cols / 2)] > thermal_median * db_to_linear(3.0);
    }
    return n;
}

Verdict map_signatures()
{
    AnechoicConfig a;
    a.layout = field_layout();
    const int count = 5;  // one array of five, as in the measured maps
    const fs::path dir = fs::path("acceptance_11_maps");
    bool ok = true;
    std::string detail;
    for (int seed = 0; seed < 4; ++seed)
    {
        const auto radars = anechoic_interferers(a, seed);
        const DwellInputs in = anechoic_dwell(a, radars, count, 0);
        Rng r1(500 + seed);
        Rng r2(500 + seed);
        const IFCube clean = synthesize_dwell(in.host, in.dwell, in.targets, {}, a.noise, r1);
        const IFCube intf = synthesize_dwell(in.host, in.dwell, in.targets, in.interferers, a.noise, r2);
        const fs::path sub = dir / fmt::format("seed{}", seed);
        dump_dwell_maps(sub.string(), clean, intf, a.window);
        const double thermal_median = a.noise.sample_power(a.host.adc_rate) * std::log(2.0);

        int found[2][3] = {};
        double spread[2][4] = {};
        for (int k = 0; k < 2; ++k)
        {
            const char* tag = k == 0 ? "clean" : "interfered";
            const auto tcs = read_matrix((sub / fmt::format("time_chirp_{}", tag)).string());
            const auto rcs = read_matrix((sub / fmt::format("range_chirp_{}", tag)).string());
            const auto rds = read_matrix((sub / fmt::format("range_doppler_{}", tag)).string());
            const PowerMatrix tc{tcs.rows, tcs.cols, stored_power(tcs, true)};
            const PowerMatrix rc{rcs.rows, rcs.cols, stored_power(rcs, true)};
            const PowerMatrix rd{rds.rows, rds.cols, stored_power(rds, false)};
            // Stripes: chirps (rows) carrying 3 dB more energy than the typical chirp.
            found[k][0] = static_cast<int>(excess_rows(tc, LineStatistic::mean, 3.0).size());
            found[k][1] = static_cast<int>(excess_rows(rc, LineStatistic::mean, 3.0).size());
            found[k][2] = bands_over_floor(rd, thermal_median);
            const auto s_rc = line_spread(rc);
            const auto s_rd = line_spread(rd);
            spread[k][0] = s_rc.row_variance;
            spread[k][1] = s_rc.col_variance;
            spread[k][2] = s_rd.row_variance;
            spread[k][3] = s_rd.col_variance;
        }
        // Range-chirp: energy varies along the chirp axis. Range-Doppler:
        // the Doppler axis is the flat one, the slow-time structure is smeared.
        const bool flips = spread[1][0] > spread[1][1] && spread[1][3] < spread[1][2];
        const bool seed_ok = found[0][0] == 0 && found[0][1] == 0 && found[0][2] == 0 &&
                             found[1][0] > 0 && found[1][1] > 0 && found[1][2] > 0 && flips;
        ok = ok && seed_ok;
        detail += fmt::format("[seed {}: t-c {}/{} r-c {}/{} r-D {}/{}{}] ", seed, found[1][0], found[0][0],
                              found[1][1], found[0][1], found[1][2], found[0][2], flips ? "" : " no-flip");
    }
    return {ok, detail + "(interfered/clean line counts)"};
}

Verdict determinism()
{
    RunConfig c = preset("mitigation_high_full");
    c.n_seeds = 2;
    c.max_dwells = 6;
    c.penetration_rates = {0.0, 1.0};
    c.workers = 1;
    const std::string a = csv_text(c, run_sweep(c));
    const std::string b = csv_text(c, run_sweep(c));
    c.workers = std::max(4, workers());
    const std::string p = csv_text(c, run_sweep(c));
    c.workers = 1;
    c.cells = {{DensityLabel::medium, Topology::partial, RadarType::LRR}};
    c.techniques = {Technique::none};
    const std::string d = csv_text(c, run_sweep(c));
    c.workers = 3;
    const std::string e = csv_text(c, run_sweep(c));
    save("acceptance_12_sweep.csv", a);
    const bool ok = a == b && a == p && d == e;
    return {ok, fmt::format("repeat run {}, 1 vs {} workers {}, second cell set 1 vs 3 workers {} ({} bytes)",
                            a == b ? "identical" : "DIFFERENT", std::max(4, workers()),
                            a == p ? "identical" : "DIFFERENT", d == e ? "identical" : "DIFFERENT",
                            a.size())};
}

const std::map<int, std::pair<const char*, std::function<Verdict()>>>& criteria()
{
    static const std::map<int, std::pair<const char*, std::function<Verdict()>>> c{
        {1, {"beat-frequency oracle", beat_oracle}},
        {2, {"Fresnel coefficient", fresnel}},
        {3, {"range factor", range_factor}},
        {4, {"field-equivalent range", field_range}},
        {5, {"field noise rise", anechoic_field}},
        {6, {"chamber noise-rise shape", anechoic_chamber}},
        {7, {"CA-CFAR false-alarm rate", cfar_pfa}},
        {8, {"detector contrast", detector_contrast}},
        {9, {"mitigation ordering", mitigation_ordering}},
        {10, {"baseline PD bounds", baseline_bounds}},
        {11, {"map signatures", map_signatures}},
        {12, {"determinism", determinism}},
    };
    return c;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"radint acceptance checks"};
    std::vector<int> which;
    app.add_option("--criterion", which, "Criterion number(s); default all");
    CLI11_PARSE(app, argc, argv);
    if (which.empty())
    {
        for (const auto& [k, v] : criteria())
        {
            which.push_back(k);
        }
    }
    int failed = 0;
    for (int k : which)
    {
        const auto it = criteria().find(k);
        if (it == criteria().end())
        {
            fmt::print(stderr, "no criterion {}\n", k);
            return 2;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try
        {
            v = it->second.second();
        }
        catch (const std::exception& e)
        {
            v = {false, fmt::format("threw: {}", e.what())};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        fmt::print("criterion {}: {} {} ({}, {:.1f} s)\n", k, v.pass ? "PASS" : "FAIL", it->second.first,
                   v.detail, secs);
        std::fflush(stdout);
        failed += !v.pass;
    }
    return failed == 0 ? 0 : 1;
}
