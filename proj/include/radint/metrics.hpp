// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace radint {

/// Fraction of true outcomes. Throws DomainError on an empty list.
double probability_of_detection(std::span<const bool> outcomes);
double probability_of_detection(const std::vector<bool>& outcomes);

/// R_max multiplier after losing `snr_loss_db` of SNR (fourth-root law).
double max_range_factor(double snr_loss_db);

/// Distance at which a source of power p_sim reproduces, at the receiver, the
/// level of a p_field source at r_sim.
double field_equivalent_range(double r_sim, double p_field, double p_sim);

/// Neumaier-compensated running sum.
class CompensatedSum
{
  public:
    void add(double x);
    double value() const { return sum_ + c_; }

  private:
    double sum_ = 0.0;
    double c_ = 0.0;
};

double compensated_sum(std::span<const double> values);
double mean(std::span<const double> values);
/// Linear-interpolated percentile, p in [0, 100].
double percentile(std::vector<double> values, double p);

/// One interferer count of a noise-rise experiment: per-dwell noise floors in
/// dB, pooled over seeds.
struct NoiseFloorSamples
{
    int count = 0;
    std::vector<double> floors_db;
};

struct NoiseRisePoint
{
    int count = 0;
    double rise_db = 0.0;
    double p10_db = 0.0;  // percentiles of the per-seed rise
    double p90_db = 0.0;
};

/// Mean floor at each count minus the mean floor at count 0. Throws
/// DomainError if no count-0 entry is present.
std::vector<NoiseRisePoint> noise_rise_curve(std::span<const NoiseFloorSamples> samples);

struct SweepResult
{
    std::string scenario;  // density label or scene name
    std::string topology;
    std::string host_type;
    std::string technique;
    double penetration_rate = 0.0;
    std::uint64_t seed = 0;
    double pd = 0.0;
    double mean_noise_floor_db = 0.0;
    double mean_target_snr_db = 0.0;
    int n_dwells = 0;
    long fixed_false_alarms = 0;
    long cfar_false_alarms = 0;
};

struct SummaryStats
{
    double mean = 0.0;
    double p10 = 0.0;
    double p90 = 0.0;
    int n = 0;
};

SummaryStats summarize(std::span<const double> values);

}  // namespace radint
