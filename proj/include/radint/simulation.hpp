// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "radint/config.hpp"
#include "radint/metrics.hpp"
#include "radint/processing.hpp"
#include "radint/scenario.hpp"
#include "radint/synthesis.hpp"

namespace radint {

/// Runs fn(i) for i in [0, n) on `workers` threads. Results must be written
/// to per-index slots; the first exception is rethrown after all threads
/// stop.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

/// Everything synthesis needs for one host dwell.
struct DwellInputs
{
    int dwell = 0;
    ChirpSchedule host;
    std::vector<TargetEcho> targets;
    std::vector<InterfererSource> interferers;
    Cell truth;
    bool target_visible = false;
};

struct DwellOutcome
{
    int dwell = 0;
    bool detected = false;
    bool target_visible = false;
    double noise_floor_db = 0.0;
    double target_snr_db = 0.0;
    long fixed_false_alarms = 0;
    long cfar_false_alarms = 0;
    int n_interferer_paths = 0;
};

/// Identifies one sweep row.
struct CellKey
{
    MatrixCell cell;
    Technique technique = Technique::none;
    double rate = 0.0;
    int seed_index = 0;
};

/// Generated and equipped scenario of (cell, seed), before penetration.
Scenario base_scenario(const RunConfig& config, const MatrixCell& cell, int seed_index);

/// Base scenario with penetration and mitigation applied.
Scenario build_scenario(const RunConfig& config, const CellKey& key);

/// Dwell indices evaluated over the horizon: all of them, or max_dwells
/// spread evenly.
std::vector<int> dwell_schedule(const Scenario& scenario, int max_dwells);

ChirpSchedule host_schedule(const Scenario& scenario, std::uint64_t dither_seed);

/// Geometry, link budget and interferer paths frozen at the dwell start.
DwellInputs prepare_dwell(const Scenario& scenario, const RunConfig& config, int dwell,
                          std::uint64_t dither_seed);

/// Mean map power of a noise-only dwell of this host.
double calibrate_nominal_floor(const ChirpSchedule& host, const RunConfig& config,
                               std::uint64_t key);

/// Synthesis products of one dwell.
struct DwellProducts
{
    IFCube cube;
    RangeDopplerMap map;
};

DwellProducts synthesize_products(const DwellInputs& inputs, const RunConfig& config,
                                  std::uint64_t noise_key);

DwellOutcome evaluate_dwell(const DwellInputs& inputs, const RangeDopplerMap& map,
                            const RunConfig& config, double nominal_floor);

struct SeedKeys
{
    std::uint64_t dither = 0;
    std::uint64_t noise = 0;
    std::uint64_t calibration = 0;
};
SeedKeys seed_keys(const RunConfig& config, const MatrixCell& cell, int seed_index);

std::uint64_t noise_key(const SeedKeys& keys, int dwell, int host_uid);

/// All dwell outcomes of one prepared scenario.
std::vector<DwellOutcome> run_dwells(const Scenario& scenario, const RunConfig& config,
                                     const SeedKeys& keys);

SweepResult summarize_cell(const CellKey& key, const Scenario& scenario,
                           const std::vector<DwellOutcome>& outcomes);

using ProgressFn = std::function<void(const SweepResult&, std::size_t done, std::size_t total)>;

/// Rows in cell, technique, rate, seed order.
std::vector<SweepResult> run_sweep(const RunConfig& config, const ProgressFn& progress = {});

/// Fixed columns; `#` metadata lines first.
void write_sweep_csv(std::ostream& out, const RunConfig& config,
                     const std::vector<SweepResult>& rows);

std::string sweep_csv_header();

}  // namespace radint
