// SPDX-License-Identifier: Apache-2.0
//
// radint command-line driver.
// ------------------------------------------------------------------------
#include <fmt/format.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "radint/anechoic.hpp"
#include "radint/common.hpp"
#include "radint/config.hpp"
#include "radint/matrix_io.hpp"
#include "radint/report.hpp"
#include "radint/rng.hpp"
#include "radint/simulation.hpp"

using namespace radint;

namespace {

constexpr const char* kOutputEnv = "RADINT_OUTPUT_DIR";

std::string output_dir(const std::string& configured)
{
    if (const char* env = std::getenv(kOutputEnv); env != nullptr && *env != '\0')
    {
        return env;
    }
    return configured;
}

void ensure_dir(const std::string& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
    {
        throw ConfigError(fmt::format("cannot create '{}': {}", dir, ec.message()));
    }
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw ConfigError(fmt::format("cannot write '{}'", path));
    }
    return out;
}

struct SweepFlags
{
    std::string preset;
    std::string presets_file = default_presets_path();
    std::string config_file;
    std::optional<std::uint64_t> seed;
    std::optional<int> n_seeds;
    std::optional<int> max_dwells;
    std::optional<int> workers;
    std::optional<std::string> out;
    std::vector<std::string> techniques;
    std::vector<double> rates;
    std::optional<std::string> scenario_file;
};

void add_sweep_flags(CLI::App* app, SweepFlags& f)
{
    app->add_option("--preset", f.preset, "Named preset from the presets file");
    app->add_option("--presets-file", f.presets_file, "Presets document")->capture_default_str();
    app->add_option("--config", f.config_file, "Config document (applied over the preset)");
    app->add_option("--seed", f.seed, "Run seed");
    app->add_option("--n-seeds", f.n_seeds, "Seeds per cell");
    app->add_option("--max-dwells", f.max_dwells, "Dwells per run, spread over the horizon (0 = all)");
    app->add_option("--workers", f.workers, "Worker threads");
    app->add_option("--out", f.out, "Output directory");
    app->add_option("--techniques", f.techniques, "Techniques (none, predefined_frequency, ...)")->delimiter(',');
    app->add_option("--rates", f.rates, "Penetration rates")->delimiter(',');
    app->add_option("--scenario-file", f.scenario_file, "Replay a serialized scenario");
}

RunConfig resolve_config(const SweepFlags& f)
{
    RunConfig c;
    if (!f.preset.empty())
    {
        c = load_preset(read_text_file(f.presets_file), f.preset);
    }
    if (!f.config_file.empty())
    {
        c = parse_run_config(read_text_file(f.config_file), c);
    }
    if (f.seed) c.seed = *f.seed;
    if (f.n_seeds) c.n_seeds = *f.n_seeds;
    if (f.max_dwells) c.max_dwells = *f.max_dwells;
    if (f.workers) c.workers = *f.workers;
    if (f.out) c.output_dir = *f.out;
    if (f.scenario_file) c.scenario_file = *f.scenario_file;
    if (!f.techniques.empty())
    {
        c.techniques.clear();
        for (const auto& t : f.techniques)
        {
            c.techniques.push_back(parse_technique(t));
        }
    }
    if (!f.rates.empty())
    {
        c.penetration_rates = f.rates;
    }
    c.output_dir = output_dir(c.output_dir);
    c.validate();
    return c;
}

int cmd_generate(const std::string& density, const std::string& topology, const std::string& host,
                 std::uint64_t seed, double rate, const std::string& technique, const std::string& out)
{
    RunConfig c;
    c.seed = seed;
    c.cells = {{parse_density(density), parse_topology(topology), parse_radar_type(host)}};
    const CellKey key{c.cells.front(), parse_technique(technique), rate, 0};
    const Scenario s = build_scenario(c, key);
    const std::string text = serialize_scenario(s);
    if (out.empty() || out == "-")
    {
        std::cout << text << '\n';
    }
    else
    {
        auto f = open_out(out);
        f << text << '\n';
        std::cerr << fmt::format("wrote {} ({} vehicles, {} radars)\n", out, s.vehicles.size(), s.radar_count());
    }
    return 0;
}

int cmd_sweep(const SweepFlags& flags)
{
    const RunConfig c = resolve_config(flags);
    ensure_dir(c.output_dir);
    const auto rows = run_sweep(c, [](const SweepResult& r, std::size_t done, std::size_t total) {
        std::cerr << fmt::format("[{}/{}] {} {} {} {} rate={:.2f} seed={} pd={:.3f}\n", done, total,
                                 r.scenario, r.topology, r.host_type, r.technique,
                                 r.penetration_rate, r.seed, r.pd);
    });
    const std::string csv = c.output_dir + "/sweep.csv";
    {
        auto f = open_out(csv);
        write_sweep_csv(f, c, rows);
    }
    {
        auto f = open_out(c.output_dir + "/config.json");
        f << serialize_run_config(c) << '\n';
    }
    std::cerr << fmt::format("wrote {} ({} rows)\n", csv, rows.size());
    return 0;
}

int cmd_anechoic(const std::string& layout, std::vector<int> counts, int dwells, int seeds,
                 std::optional<double> loss, std::uint64_t seed, int workers, const std::string& out_dir)
{
    AnechoicConfig a;
    a.layout = layout_by_name(layout);
    if (loss)
    {
        a.layout.coupling_loss_db = *loss;
    }
    if (!counts.empty())
    {
        a.counts = counts;
    }
    a.n_dwells = dwells;
    a.n_seeds = seeds;
    a.seed = seed;
    a.workers = workers;
    const auto curve = run_anechoic(a);
    const std::string dir = output_dir(out_dir);
    ensure_dir(dir);
    const std::string path = dir + "/noise_rise_" + a.layout.name + ".csv";
    auto f = open_out(path);
    f << fmt::format("# layout={}\n# coupling_loss_db={}\n# dwells={}\n# seeds={}\n# seed={}\n",
                     a.layout.name, a.layout.coupling_loss_db, a.n_dwells, a.n_seeds, a.seed);
    f << fmt::format("# noise_figure_db={}\n# window={}\n", a.noise.noise_figure_db, to_string(a.window));
    f << "count,rise_db,p10_db,p90_db\n";
    for (const auto& p : curve)
    {
        f << fmt::format("{},{:.4f},{:.4f},{:.4f}\n", p.count, p.rise_db, p.p10_db, p.p90_db);
        std::cout << fmt::format("{:>3} interferers: {:+.2f} dB\n", p.count, p.rise_db);
    }
    return 0;
}

int cmd_dump(const SweepFlags& flags, int dwell, int anechoic_count, const std::string& layout)
{
    const RunConfig c = resolve_config(flags);
    IFCube clean;
    IFCube interfered;
    if (anechoic_count > 0)
    {
        AnechoicConfig a;
        a.layout = layout_by_name(layout);
        a.seed = c.seed;
        const auto radars = anechoic_interferers(a, 0);
        RunConfig rc = c;
        rc.model.walls = false;
        const std::uint64_t key = derive_seed({c.seed, static_cast<std::uint64_t>(dwell)});
        clean = synthesize_products(anechoic_dwell(a, radars, 0, dwell), rc, key).cube;
        interfered = synthesize_products(anechoic_dwell(a, radars, anechoic_count, dwell), rc, key).cube;
    }
    else
    {
        const CellKey key{c.cells.front(), c.techniques.front(), c.penetration_rates.back(), 0};
        const Scenario s = build_scenario(c, key);
        const SeedKeys keys = seed_keys(c, key.cell, 0);
        DwellInputs in = prepare_dwell(s, c, dwell, keys.dither);
        const std::uint64_t nk = noise_key(keys, dwell, s.host_radar().uid);
        interfered = synthesize_products(in, c, nk).cube;
        in.interferers.clear();
        clean = synthesize_products(in, c, nk).cube;
    }
    const std::string& dir = c.output_dir;
    const auto set = dump_dwell_maps(dir, clean, interfered, c.processing.window);
    for (const auto& f : set.files)
    {
        std::cerr << "wrote " << f << ".bin\n";
    }
    return 0;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& by, const std::string& out)
{
    std::vector<SweepResult> rows;
    for (const auto& path : inputs)
    {
        std::ifstream in(path);
        if (!in)
        {
            throw ConfigError(fmt::format("cannot open '{}'", path));
        }
        auto part = read_sweep_csv(in);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    const auto summary = by == "technique" ? summarize_by_technique(rows) : summarize_sweep(rows);
    write_summary_table(std::cout, summary);
    if (!out.empty())
    {
        auto f = open_out(out);
        write_summary_csv(f, summary);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"IF-level automotive radar interference simulator"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate-scenario", "Generate and equip one highway scene");
    std::string density = "low", topology = "front", host = "LRR", technique = "none", gen_out;
    std::uint64_t gen_seed = 1;
    double gen_rate = 1.0;
    gen->add_option("--density", density)->capture_default_str();
    gen->add_option("--topology", topology)->capture_default_str();
    gen->add_option("--host", host)->capture_default_str();
    gen->add_option("--seed", gen_seed)->capture_default_str();
    gen->add_option("--rate", gen_rate, "Penetration rate")->capture_default_str();
    gen->add_option("--technique", technique)->capture_default_str();
    gen->add_option("-o,--out", gen_out, "Output file (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "Penetration sweep over a config matrix");
    SweepFlags sweep_flags;
    add_sweep_flags(sweep, sweep_flags);

    auto* anechoic = app.add_subcommand("anechoic", "Noise floor versus active interferers");
    std::string layout = "field", an_out = "radint-out";
    std::vector<int> counts;
    int an_dwells = 50, an_seeds = 10, an_workers = 1;
    std::uint64_t an_seed = 1;
    std::optional<double> loss;
    anechoic->add_option("--layout", layout, "field or chamber")->capture_default_str();
    anechoic->add_option("--counts", counts, "Interferer counts")->delimiter(',');
    anechoic->add_option("--dwells", an_dwells)->capture_default_str();
    anechoic->add_option("--seeds", an_seeds)->capture_default_str();
    anechoic->add_option("--seed", an_seed)->capture_default_str();
    anechoic->add_option("--workers", an_workers)->capture_default_str();
    anechoic->add_option("--coupling-loss-db", loss, "Override the layout coupling loss");
    anechoic->add_option("--out", an_out)->capture_default_str();

    auto* dump = app.add_subcommand("dump-maps", "Write time-chirp, range-chirp and range-Doppler matrices");
    SweepFlags dump_flags;
    add_sweep_flags(dump, dump_flags);
    int dump_dwell = 0, dump_anechoic = 0;
    std::string dump_layout = "field";
    dump->add_option("--dwell", dump_dwell)->capture_default_str();
    dump->add_option("--anechoic", dump_anechoic, "Use the anechoic layout with this many interferers");
    dump->add_option("--layout", dump_layout)->capture_default_str();

    auto* report = app.add_subcommand("report", "Summarize sweep CSVs per technique");
    std::vector<std::string> report_in;
    std::string report_by = "cell", report_out;
    report->add_option("inputs", report_in, "Sweep CSV files")->required();
    report->add_option("--by", report_by, "cell or technique")->capture_default_str();
    report->add_option("--out", report_out, "Summary CSV");

    try
    {
        CLI11_PARSE(app, argc, argv);
        if (gen->parsed()) return cmd_generate(density, topology, host, gen_seed, gen_rate, technique, gen_out);
        if (sweep->parsed()) return cmd_sweep(sweep_flags);
        if (anechoic->parsed())
            return cmd_anechoic(layout, counts, an_dwells, an_seeds, loss, an_seed, an_workers, an_out);
        if (dump->parsed()) return cmd_dump(dump_flags, dump_dwell, dump_anechoic, dump_layout);
        if (report->parsed()) return cmd_report(report_in, report_by, report_out);
    }
    catch (const std::exception& e)
    {
        std::cerr << "radint: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
