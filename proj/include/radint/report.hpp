// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "radint/metrics.hpp"

namespace radint {

/// Parses rows written by write_sweep_csv; metadata lines are skipped.
std::vector<SweepResult> read_sweep_csv(std::istream& in);

/// PD statistics per (technique, scenario, topology, host, rate), across
/// seeds.
struct SummaryRow
{
    std::string technique;
    std::string scenario;
    std::string topology;
    std::string host_type;
    double penetration_rate = 0.0;
    SummaryStats pd;
    SummaryStats noise_floor_db;
};

std::vector<SummaryRow> summarize_sweep(const std::vector<SweepResult>& rows);

/// Per (technique, rate) PD across every cell and seed.
std::vector<SummaryRow> summarize_by_technique(const std::vector<SweepResult>& rows);

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
/// Aligned plain-text table, one block per technique.
void write_summary_table(std::ostream& out, const std::vector<SummaryRow>& rows);

}  // namespace radint
