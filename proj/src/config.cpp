// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#include "radint/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "radint/common.hpp"

#ifndef RADINT_CONFIG_DIR
#define RADINT_CONFIG_DIR "configs"
#endif

namespace radint {

using nlohmann::json;

namespace {

template <typename T>
void take(const json& j, const char* key, T& out)
{
    if (auto it = j.find(key); it != j.end() && !it->is_null())
    {
        out = it->get<T>();
    }
}

json cells_json(const std::vector<MatrixCell>& cells)
{
    json a = json::array();
    for (const auto& c : cells)
    {
        a.push_back({{"density", to_string(c.density)},
                     {"topology", to_string(c.topology)},
                     {"host", to_string(c.host_type)}});
    }
    return a;
}

std::vector<MatrixCell> cells_from(const json& j)
{
    if (j.is_string())
    {
        if (j.get<std::string>() == "table")
        {
            return table_matrix();
        }
        throw ConfigError(fmt::format("unknown cell set '{}'", j.get<std::string>()));
    }
    std::vector<MatrixCell> out;
    for (const auto& c : j)
    {
        MatrixCell m;
        m.density = parse_density(c.at("density").get<std::string>());
        m.topology = parse_topology(c.at("topology").get<std::string>());
        m.host_type = parse_radar_type(c.at("host").get<std::string>());
        out.push_back(m);
    }
    return out;
}

std::vector<Technique> techniques_from(const json& j)
{
    std::vector<Technique> out;
    if (j.is_string())
    {
        if (j.get<std::string>() == "all")
        {
            return {Technique::none, Technique::predefined_frequency,
                    Technique::predefined_polarization, Technique::time_dithering,
                    Technique::time_frequency_coding};
        }
        out.push_back(parse_technique(j.get<std::string>()));
        return out;
    }
    for (const auto& t : j)
    {
        out.push_back(parse_technique(t.get<std::string>()));
    }
    return out;
}

void mitigation_from(const json& j, MitigationPlan& m)
{
    take(j, "seed", m.seed);
    if (auto it = j.find("bands"); it != j.end())
    {
        if (it->size() != 4)
        {
            throw ConfigError("mitigation.bands needs one [lo, hi] pair per mount class");
        }
        for (std::size_t i = 0; i < 4; ++i)
        {
            m.bands.bands[i] = {(*it)[i].at(0).get<double>(), (*it)[i].at(1).get<double>()};
        }
    }
    if (auto it = j.find("polarization"); it != j.end())
    {
        take(*it, "direct_suppression_db", m.polarization.direct_suppression_db);
        take(*it, "reflected_suppression_db", m.polarization.reflected_suppression_db);
    }
    if (auto it = j.find("dither"); it != j.end())
    {
        take(*it, "jitter_bound", m.dither.jitter_bound);
        take(*it, "dither_host", m.dither.dither_host);
    }
    if (auto it = j.find("tf"); it != j.end())
    {
        take(*it, "n_bands", m.tf.n_bands);
        take(*it, "n_slots", m.tf.n_slots);
        take(*it, "sync_jitter", m.tf.sync_jitter);
        take(*it, "frame_rate", m.tf.frame_rate);
        take(*it, "band_lo", m.tf.band_lo);
        take(*it, "band_hi", m.tf.band_hi);
    }
}

json mitigation_json(const MitigationPlan& m)
{
    json bands = json::array();
    for (const auto& b : m.bands.bands)
    {
        bands.push_back({b.lo, b.hi});
    }
    return {{"seed", m.seed},
            {"bands", bands},
            {"polarization",
             {{"direct_suppression_db", m.polarization.direct_suppression_db},
              {"reflected_suppression_db", m.polarization.reflected_suppression_db}}},
            {"dither", {{"jitter_bound", m.dither.jitter_bound}, {"dither_host", m.dither.dither_host}}},
            {"tf",
             {{"n_bands", m.tf.n_bands},
              {"n_slots", m.tf.n_slots},
              {"sync_jitter", m.tf.sync_jitter},
              {"frame_rate", m.tf.frame_rate},
              {"band_lo", m.tf.band_lo},
              {"band_hi", m.tf.band_hi}}}};
}

void processing_from(const json& j, ProcessingConfig& p)
{
    if (auto it = j.find("window"); it != j.end())
    {
        p.window = parse_window(it->get<std::string>());
    }
    if (auto it = j.find("cfar"); it != j.end())
    {
        take(*it, "guard", p.cfar.guard);
        take(*it, "train", p.cfar.train);
        take(*it, "pfa", p.cfar.pfa);
    }
    take(j, "fixed_threshold_db", p.fixed_threshold_db);
    take(j, "gate", p.gate);
}

json processing_json(const ProcessingConfig& p)
{
    return {{"window", to_string(p.window)},
            {"cfar", {{"guard", p.cfar.guard}, {"train", p.cfar.train}, {"pfa", p.cfar.pfa}}},
            {"fixed_threshold_db", p.fixed_threshold_db},
            {"gate", p.gate}};
}

void model_from(const json& j, ModelConfig& m)
{
    take(j, "noise_figure_db", m.noise.noise_figure_db);
    take(j, "kt0_dbm_per_hz", m.noise.kt0_dbm_per_hz);
    take(j, "walls", m.walls);
    take(j, "blockage", m.blockage);
    take(j, "lpf_gating", m.lpf_gating);
    take(j, "interference_cut_db", m.interference_cut_db);
    take(j, "max_drift_ppm", m.max_drift_ppm);
    if (auto it = j.find("refractive_index"); it != j.end())
    {
        m.material.refractive_index = {it->at(0).get<double>(), it->at(1).get<double>()};
    }
    if (auto it = j.find("road"); it != j.end())
    {
        take(*it, "lanes_per_direction", m.road.n_lanes_per_direction);
        take(*it, "lane_width", m.road.lane_width);
        take(*it, "length", m.road.road_length);
        take(*it, "wall_offset", m.road.wall_offset);
    }
    if (auto it = j.find("highway"); it != j.end())
    {
        take(*it, "truck_fraction", m.highway.truck_fraction);
        take(*it, "exact_count", m.highway.exact_count);
        take(*it, "min_gap", m.highway.min_gap);
        take(*it, "speed_min", m.highway.speed_min);
        take(*it, "speed_max", m.highway.speed_max);
        take(*it, "duration", m.highway.duration);
        take(*it, "vehicle_count", m.highway.vehicle_count);
    }
    if (auto it = j.find("target"); it != j.end())
    {
        take(*it, "range", m.target.range);
        double az_deg = m.target.azimuth * 180.0 / kPi;
        take(*it, "azimuth_deg", az_deg);
        m.target.azimuth = deg_to_rad(az_deg);
        take(*it, "rcs", m.target.rcs);
        take(*it, "radial_speed", m.target.radial_speed);
        take(*it, "blockable", m.target.blockable);
    }
}

json model_json(const ModelConfig& m)
{
    return {{"noise_figure_db", m.noise.noise_figure_db},
            {"kt0_dbm_per_hz", m.noise.kt0_dbm_per_hz},
            {"walls", m.walls},
            {"blockage", m.blockage},
            {"lpf_gating", m.lpf_gating},
            {"interference_cut_db", m.interference_cut_db},
            {"max_drift_ppm", m.max_drift_ppm},
            {"refractive_index", {m.material.refractive_index.real(), m.material.refractive_index.imag()}},
            {"road",
             {{"lanes_per_direction", m.road.n_lanes_per_direction},
              {"lane_width", m.road.lane_width},
              {"length", m.road.road_length},
              {"wall_offset", m.road.wall_offset}}},
            {"highway",
             {{"truck_fraction", m.highway.truck_fraction},
              {"exact_count", m.highway.exact_count},
              {"min_gap", m.highway.min_gap},
              {"speed_min", m.highway.speed_min},
              {"speed_max", m.highway.speed_max},
              {"duration", m.highway.duration},
              {"vehicle_count", m.highway.vehicle_count}}},
            {"target",
             {{"range", m.target.range},
              {"azimuth_deg", m.target.azimuth * 180.0 / kPi},
              {"rcs", m.target.rcs},
              {"radial_speed", m.target.radial_speed},
              {"blockable", m.target.blockable}}}};
}

json config_json(const RunConfig& c)
{
    json techniques = json::array();
    for (auto t : c.techniques)
    {
        techniques.push_back(to_string(t));
    }
    return {{"name", c.name},
            {"seed", c.seed},
            {"cells", cells_json(c.cells)},
            {"scenario_file", c.scenario_file ? json(*c.scenario_file) : json(nullptr)},
            {"techniques", techniques},
            {"penetration_rates", c.penetration_rates},
            {"n_seeds", c.n_seeds},
            {"max_dwells", c.max_dwells},
            {"workers", c.workers},
            {"output_dir", c.output_dir},
            {"dump_maps", c.dump_maps},
            {"mitigation", mitigation_json(c.mitigation)},
            {"processing", processing_json(c.processing)},
            {"model", model_json(c.model)}};
}

RunConfig config_from(const json& j, RunConfig c)
{
    take(j, "name", c.name);
    take(j, "seed", c.seed);
    if (auto it = j.find("cells"); it != j.end())
    {
        c.cells = cells_from(*it);
    }
    if (auto it = j.find("scenario_file"); it != j.end())
    {
        c.scenario_file = it->is_null() ? std::nullopt
                                        : std::optional<std::string>(it->get<std::string>());
    }
    if (auto it = j.find("techniques"); it != j.end())
    {
        c.techniques = techniques_from(*it);
    }
    take(j, "penetration_rates", c.penetration_rates);
    take(j, "n_seeds", c.n_seeds);
    take(j, "max_dwells", c.max_dwells);
    take(j, "workers", c.workers);
    take(j, "output_dir", c.output_dir);
    take(j, "dump_maps", c.dump_maps);
    if (auto it = j.find("mitigation"); it != j.end())
    {
        mitigation_from(*it, c.mitigation);
    }
    if (auto it = j.find("processing"); it != j.end())
    {
        processing_from(*it, c.processing);
    }
    if (auto it = j.find("model"); it != j.end())
    {
        model_from(*it, c.model);
    }
    return c;
}

}  // namespace

std::vector<MatrixCell> table_matrix()
{
    std::vector<MatrixCell> out;
    for (auto d : {DensityLabel::low, DensityLabel::medium, DensityLabel::high})
    {
        for (auto t : {Topology::front, Topology::partial, Topology::full})
        {
            for (auto h : {RadarType::SBZA, RadarType::SRR, RadarType::LRR})
            {
                out.push_back({d, t, h});
            }
        }
    }
    return out;
}

void RunConfig::validate() const
{
    if (n_seeds < 1)
    {
        throw ConfigError("n_seeds must be >= 1");
    }
    if (workers < 1)
    {
        throw ConfigError("workers must be >= 1");
    }
    if (max_dwells < 0)
    {
        throw ConfigError("max_dwells must be >= 0");
    }
    if (cells.empty() && !scenario_file)
    {
        throw ConfigError("no scenario cells configured");
    }
    if (techniques.empty())
    {
        throw ConfigError("no techniques configured");
    }
    if (penetration_rates.empty())
    {
        throw ConfigError("no penetration rates configured");
    }
    for (double r : penetration_rates)
    {
        if (!(r >= 0.0 && r <= 1.0))
        {
            throw ConfigError(fmt::format("penetration rate {} outside [0, 1]", r));
        }
    }
    if (!std::is_sorted(penetration_rates.begin(), penetration_rates.end()))
    {
        throw ConfigError("penetration rates must be sorted ascending");
    }
    for (const auto& c : cells)
    {
        if (!is_host_type(c.host_type))
        {
            throw ConfigError(fmt::format("{} cannot be a host radar", to_string(c.host_type)));
        }
    }
    processing.cfar.validate();
    if (processing.gate < 0)
    {
        throw ConfigError("association gate must be >= 0");
    }
    model.road.validate();
    model.material.validate();
    if (model.max_drift_ppm < 0.0 || model.max_drift_ppm > 100.0)
    {
        throw ConfigError("max_drift_ppm must lie in [0, 100]");
    }
}

RunConfig parse_run_config(std::string_view text, const RunConfig& base)
{
    try
    {
        return config_from(json::parse(text), base);
    }
    catch (const json::exception& e)
    {
        throw ConfigError(fmt::format("config: {}", e.what()));
    }
}

std::string serialize_run_config(const RunConfig& config)
{
    return config_json(config).dump(2);
}

std::vector<std::string> preset_names(std::string_view presets_text)
{
    try
    {
        const json doc = json::parse(presets_text);
        std::vector<std::string> out;
        for (const auto& [name, value] : doc.at("presets").items())
        {
            out.push_back(name);
        }
        return out;
    }
    catch (const json::exception& e)
    {
        throw ConfigError(fmt::format("presets: {}", e.what()));
    }
}

RunConfig load_preset(std::string_view presets_text, std::string_view name)
{
    try
    {
        const json doc = json::parse(presets_text);
        const json& presets = doc.at("presets");
        auto it = presets.find(std::string(name));
        if (it == presets.end())
        {
            throw ConfigError(fmt::format("no preset named '{}'", name));
        }
        RunConfig base;
        if (auto d = doc.find("defaults"); d != doc.end())
        {
            base = config_from(*d, base);
        }
        RunConfig c = config_from(*it, base);
        c.name = std::string(name);
        return c;
    }
    catch (const json::exception& e)
    {
        throw ConfigError(fmt::format("presets: {}", e.what()));
    }
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw ConfigError(fmt::format("cannot open '{}'", path));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string default_presets_path()
{
    return std::string(RADINT_CONFIG_DIR) + "/presets.json";
}

std::vector<std::pair<std::string, std::string>> run_metadata(const RunConfig& c)
{
    std::vector<std::pair<std::string, std::string>> m;
    auto add = [&m](std::string k, auto v) { m.emplace_back(std::move(k), fmt::format("{}", v)); };
    add("config", c.name);
    add("seed", c.seed);
    add("n_seeds", c.n_seeds);
    add("max_dwells", c.max_dwells);
    add("window", to_string(c.processing.window));
    add("cfar_guard", c.processing.cfar.guard);
    add("cfar_train", c.processing.cfar.train);
    add("cfar_pfa", c.processing.cfar.pfa);
    add("fixed_threshold_db", c.processing.fixed_threshold_db);
    add("association_gate_bins", c.processing.gate);
    add("noise_figure_db", c.model.noise.noise_figure_db);
    add("kt0_dbm_per_hz", c.model.noise.kt0_dbm_per_hz);
    add("lpf", c.model.lpf_gating ? "brickwall_0_to_fs" : "off");
    add("walls", c.model.walls);
    add("blockage", c.model.blockage);
    add("refractive_index", fmt::format("{}{:+}j", c.model.material.refractive_index.real(),
                                        c.model.material.refractive_index.imag()));
    add("interference_cut_db", c.model.interference_cut_db);
    add("max_drift_ppm", c.model.max_drift_ppm);
    add("truck_fraction", c.model.highway.truck_fraction);
    add("duration_s", c.model.highway.duration);
    add("target_range_m", c.model.target.range);
    add("target_rcs_m2", c.model.target.rcs);
    add("target_blockable", c.model.target.blockable);
    add("pol_direct_db", c.mitigation.polarization.direct_suppression_db);
    add("pol_reflected_db", c.mitigation.polarization.reflected_suppression_db);
    add("dither_bound_s", c.mitigation.dither.jitter_bound);
    add("dither_host", c.mitigation.dither.dither_host);
    add("tf_grid", fmt::format("{}x{}", c.mitigation.tf.n_bands, c.mitigation.tf.n_slots));
    add("tf_frame_rate_hz", c.mitigation.tf.frame_rate);
    add("tf_sync_jitter_s", c.mitigation.tf.sync_jitter);
    return m;
}

}  // namespace radint
