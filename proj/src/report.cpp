// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#include "radint/report.hpp"

#include <fmt/format.h>

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "radint/common.hpp"
#include "radint/simulation.hpp"

namespace radint {

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ','))
    {
        out.push_back(field);
    }
    return out;
}

template <typename Key>
std::vector<SummaryRow> group(const std::vector<SweepResult>& rows, Key key_of)
{
    using K = decltype(key_of(rows.front()));
    std::map<K, std::pair<std::vector<double>, std::vector<double>>> groups;
    std::map<K, SummaryRow> protos;
    for (const auto& r : rows)
    {
        const K k = key_of(r);
        groups[k].first.push_back(r.pd);
        groups[k].second.push_back(r.mean_noise_floor_db);
        if (!protos.count(k))
        {
            SummaryRow p;
            p.technique = r.technique;
            p.scenario = r.scenario;
            p.topology = r.topology;
            p.host_type = r.host_type;
            p.penetration_rate = r.penetration_rate;
            protos.emplace(k, p);
        }
    }
    std::vector<SummaryRow> out;
    for (auto& [k, v] : groups)
    {
        SummaryRow row = protos.at(k);
        row.pd = summarize(v.first);
        row.noise_floor_db = summarize(v.second);
        out.push_back(row);
    }
    return out;
}

}  // namespace

std::vector<SweepResult> read_sweep_csv(std::istream& in)
{
    std::vector<SweepResult> out;
    std::string line;
    bool header_seen = false;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.empty() || line[0] == '#')
        {
            continue;
        }
        if (!header_seen)
        {
            if (line != sweep_csv_header())
            {
                throw ConfigError(fmt::format("line {}: unexpected sweep CSV header", line_no));
            }
            header_seen = true;
            continue;
        }
        const auto f = split(line);
        if (f.size() != 12)
        {
            throw ConfigError(fmt::format("line {}: expected 12 fields, got {}", line_no, f.size()));
        }
        try
        {
            SweepResult r;
            r.scenario = f[0];
            r.topology = f[1];
            r.host_type = f[2];
            r.technique = f[3];
            r.penetration_rate = std::stod(f[4]);
            r.seed = std::stoull(f[5]);
            r.pd = std::stod(f[6]);
            r.mean_noise_floor_db = std::stod(f[7]);
            r.mean_target_snr_db = std::stod(f[8]);
            r.n_dwells = std::stoi(f[9]);
            r.fixed_false_alarms = std::stol(f[10]);
            r.cfar_false_alarms = std::stol(f[11]);
            out.push_back(r);
        }
        catch (const std::exception&)
        {
            throw ConfigError(fmt::format("line {}: malformed number", line_no));
        }
    }
    return out;
}

std::vector<SummaryRow> summarize_sweep(const std::vector<SweepResult>& rows)
{
    if (rows.empty())
    {
        return {};
    }
    return group(rows, [](const SweepResult& r) {
        return std::tuple{r.technique, r.scenario, r.topology, r.host_type, r.penetration_rate};
    });
}

std::vector<SummaryRow> summarize_by_technique(const std::vector<SweepResult>& rows)
{
    if (rows.empty())
    {
        return {};
    }
    auto out = group(rows, [](const SweepResult& r) { return std::tuple{r.technique, r.penetration_rate}; });
    for (auto& r : out)
    {
        r.scenario = "*";
        r.topology = "*";
        r.host_type = "*";
    }
    return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows)
{
    out << "technique,scenario,topology,host_type,penetration_rate,n,pd_mean,pd_p10,pd_p90,"
           "noise_floor_mean_db\n";
    for (const auto& r : rows)
    {
        out << fmt::format("{},{},{},{},{:.4f},{},{:.6f},{:.6f},{:.6f},{:.4f}\n", r.technique,
                           r.scenario, r.topology, r.host_type, r.penetration_rate, r.pd.n,
                           r.pd.mean, r.pd.p10, r.pd.p90, r.noise_floor_db.mean);
    }
}

void write_summary_table(std::ostream& out, const std::vector<SummaryRow>& rows)
{
    std::string current;
    for (const auto& r : rows)
    {
        if (r.technique != current)
        {
            current = r.technique;
            out << fmt::format("\n{}\n", current);
            out << fmt::format("  {:<8} {:<8} {:<5} {:>6} {:>4} {:>7} {:>7} {:>7}\n", "scenario",
                               "topology", "host", "rate", "n", "pd", "p10", "p90");
        }
        out << fmt::format("  {:<8} {:<8} {:<5} {:>6.3f} {:>4} {:>7.3f} {:>7.3f} {:>7.3f}\n",
                           r.scenario, r.topology, r.host_type, r.penetration_rate, r.pd.n,
                           r.pd.mean, r.pd.p10, r.pd.p90);
    }
}

}  // namespace radint
