// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#include "radint/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "radint/common.hpp"

namespace radint {

double probability_of_detection(std::span<const bool> outcomes)
{
    if (outcomes.empty())
    {
        throw DomainError("probability_of_detection of an empty list");
    }
    const auto hits = std::count(outcomes.begin(), outcomes.end(), true);
    return static_cast<double>(hits) / static_cast<double>(outcomes.size());
}

double probability_of_detection(const std::vector<bool>& outcomes)
{
    if (outcomes.empty())
    {
        throw DomainError("probability_of_detection of an empty list");
    }
    const auto hits = std::count(outcomes.begin(), outcomes.end(), true);
    return static_cast<double>(hits) / static_cast<double>(outcomes.size());
}

double max_range_factor(double snr_loss_db)
{
    if (snr_loss_db < 0.0)
    {
        throw DomainError("max_range_factor needs a non-negative loss");
    }
    return std::pow(10.0, -snr_loss_db / 40.0);
}

double field_equivalent_range(double r_sim, double p_field, double p_sim)
{
    if (!(p_field > 0.0) || !(p_sim > 0.0))
    {
        throw DomainError("field_equivalent_range needs positive powers");
    }
    return r_sim * std::sqrt(p_field / p_sim);
}

void CompensatedSum::add(double x)
{
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
    {
        c_ += (sum_ - t) + x;
    }
    else
    {
        c_ += (x - t) + sum_;
    }
    sum_ = t;
}

double compensated_sum(std::span<const double> values)
{
    CompensatedSum s;
    for (double v : values)
    {
        s.add(v);
    }
    return s.value();
}

double mean(std::span<const double> values)
{
    if (values.empty())
    {
        throw DomainError("mean of an empty list");
    }
    return compensated_sum(values) / static_cast<double>(values.size());
}

double percentile(std::vector<double> values, double p)
{
    if (values.empty())
    {
        throw DomainError("percentile of an empty list");
    }
    std::sort(values.begin(), values.end());
    const double pos = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(values.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const std::size_t j = std::min(i + 1, values.size() - 1);
    const double f = pos - static_cast<double>(i);
    return values[i] + f * (values[j] - values[i]);
}

std::vector<NoiseRisePoint> noise_rise_curve(std::span<const NoiseFloorSamples> samples)
{
    const auto base = std::find_if(samples.begin(), samples.end(),
                                   [](const NoiseFloorSamples& s) { return s.count == 0; });
    if (base == samples.end() || base->floors_db.empty())
    {
        throw DomainError("noise_rise_curve needs a count-0 baseline");
    }
    const double ref = mean(base->floors_db);
    std::vector<NoiseRisePoint> out;
    for (const auto& s : samples)
    {
        NoiseRisePoint p;
        p.count = s.count;
        if (s.count == 0)
        {
            out.push_back(p);
            continue;
        }
        p.rise_db = mean(s.floors_db) - ref;
        std::vector<double> rises(s.floors_db.size());
        std::transform(s.floors_db.begin(), s.floors_db.end(), rises.begin(),
                       [ref](double f) { return f - ref; });
        p.p10_db = percentile(rises, 10.0);
        p.p90_db = percentile(rises, 90.0);
        out.push_back(p);
    }
    std::sort(out.begin(), out.end(),
              [](const NoiseRisePoint& a, const NoiseRisePoint& b) { return a.count < b.count; });
    return out;
}

SummaryStats summarize(std::span<const double> values)
{
    SummaryStats s;
    s.n = static_cast<int>(values.size());
    if (values.empty())
    {
        return s;
    }
    s.mean = mean(values);
    std::vector<double> v(values.begin(), values.end());
    s.p10 = percentile(v, 10.0);
    s.p90 = percentile(v, 90.0);
    return s;
}

}  // namespace radint
