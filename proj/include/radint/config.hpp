// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radint/mitigation.hpp"
#include "radint/processing.hpp"
#include "radint/propagation.hpp"
#include "radint/scenario.hpp"
#include "radint/synthesis.hpp"

namespace radint {

/// One row of the scene x topology x host matrix.
struct MatrixCell
{
    DensityLabel density = DensityLabel::low;
    Topology topology = Topology::front;
    RadarType host_type = RadarType::LRR;
    bool operator==(const MatrixCell&) const = default;
};

/// The 27-row scene/topology/host matrix in canonical order.
std::vector<MatrixCell> table_matrix();

struct ProcessingConfig
{
    WindowKind window = WindowKind::hann;
    CfarParams cfar;
    double fixed_threshold_db = 13.0;
    int gate = 2;  // association gate, bins per axis
};

struct ModelConfig
{
    ThermalModel noise;
    MaterialModel material;
    RoadGeometry road;
    HighwayOptions highway;
    ReferenceTarget target;
    bool walls = true;
    bool blockage = true;
    bool lpf_gating = true;
    /// Interferer paths weaker than this (dB relative to the per-sample noise
    /// power) are dropped before synthesis.
    double interference_cut_db = -40.0;
    double max_drift_ppm = 20.0;
};

struct RunConfig
{
    std::string name = "custom";
    std::uint64_t seed = 1;
    std::vector<MatrixCell> cells{MatrixCell{}};
    std::optional<std::string> scenario_file;
    std::vector<Technique> techniques{Technique::none};
    MitigationPlan mitigation;
    std::vector<double> penetration_rates{0.0, 0.1, 0.25, 0.5, 0.75, 1.0};
    int n_seeds = 1;
    /// 0 runs every dwell of the horizon; otherwise this many dwells spread
    /// evenly across it.
    int max_dwells = 0;
    int workers = 1;
    std::string output_dir = "radint-out";
    bool dump_maps = false;
    ProcessingConfig processing;
    ModelConfig model;

    /// Throws ConfigError.
    void validate() const;
};

/// Parses a config document. Keys missing from `text` keep the values of
/// `base`.
RunConfig parse_run_config(std::string_view text, const RunConfig& base = {});
std::string serialize_run_config(const RunConfig& config);

/// Named presets from a presets document: {"presets": {name: config, ...}}.
std::vector<std::string> preset_names(std::string_view presets_text);
RunConfig load_preset(std::string_view presets_text, std::string_view name);

/// Reads a whole file; throws ConfigError with the path on failure.
std::string read_text_file(const std::string& path);

/// Presets shipped with the source tree.
std::string default_presets_path();

/// `key=value` lines describing every model default of a run.
std::vector<std::pair<std::string, std::string>> run_metadata(const RunConfig& config);

}  // namespace radint
