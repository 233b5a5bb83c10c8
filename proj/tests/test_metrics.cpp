// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "radint/common.hpp"
#include "radint/metrics.hpp"
#include "radint/rng.hpp"

using namespace radint;

TEST_SUITE("metrics")
{
    TEST_CASE("probability of detection is the hit fraction")
    {
        const std::vector<bool> v{true, false, true, true};
        CHECK(probability_of_detection(v) == 0.75);
        const bool a[] = {false, false};
        CHECK(probability_of_detection(std::span<const bool>(a)) == 0.0);
        CHECK_THROWS_AS(probability_of_detection(std::vector<bool>{}), DomainError);
    }

    TEST_CASE("range factor follows the fourth-root law")
    {
        CHECK(max_range_factor(0.0) == 1.0);
        CHECK(max_range_factor(6.5) == doctest::Approx(0.688).epsilon(1e-3));
        // Independent oracle: R^4 scales with SNR, so a 40 dB loss is a tenth of the range.
        CHECK(max_range_factor(40.0) == doctest::Approx(0.1).epsilon(1e-12));
        Rng rng(1);
        for (int i = 0; i < 100; ++i)
        {
            const double a = 20.0 * rng.uniform();
            const double b = 20.0 * rng.uniform();
            CHECK(max_range_factor(a + b) ==
                  doctest::Approx(max_range_factor(a) * max_range_factor(b)).epsilon(1e-12));
            CHECK(std::pow(max_range_factor(a), 4.0) == doctest::Approx(std::pow(10.0, -a / 10.0)).epsilon(1e-12));
        }
        CHECK_THROWS_AS(max_range_factor(-1.0), DomainError);
    }

    TEST_CASE("field-equivalent range")
    {
        CHECK(field_equivalent_range(5.0, 1.0, 1.0) == 5.0);
        // Four times the power reaches twice as far for a one-way link.
        CHECK(field_equivalent_range(5.0, 4.0, 1.0) == doctest::Approx(10.0).epsilon(1e-15));
        // Round trip: back-converting recovers the input.
        const double r = field_equivalent_range(7.0, 3.0, 0.2);
        CHECK(field_equivalent_range(r, 0.2, 3.0) == doctest::Approx(7.0).epsilon(1e-14));
        CHECK_THROWS_AS(field_equivalent_range(5.0, 0.0, 1.0), DomainError);
        CHECK_THROWS_AS(field_equivalent_range(5.0, 1.0, -1.0), DomainError);
    }

    TEST_CASE("compensated sum beats naive summation")
    {
        std::vector<double> v{1e16};
        for (int i = 0; i < 1000; ++i)
        {
            v.push_back(1.0);
        }
        v.push_back(-1e16);
        double naive = 0.0;
        for (double x : v)
        {
            naive += x;
        }
        CHECK(naive != 1000.0);
        CHECK(compensated_sum(v) == 1000.0);
        CHECK(mean(std::vector<double>{1.0, 2.0, 6.0}) == 3.0);
        CHECK_THROWS_AS(mean(std::vector<double>{}), DomainError);
    }

    TEST_CASE("percentile interpolates linearly between order statistics")
    {
        const std::vector<double> v{5.0, 1.0, 4.0, 2.0, 3.0};
        CHECK(percentile(v, 0.0) == 1.0);
        CHECK(percentile(v, 50.0) == 3.0);
        CHECK(percentile(v, 100.0) == 5.0);
        CHECK(percentile(v, 10.0) == doctest::Approx(1.4));
        CHECK(percentile(v, 90.0) == doctest::Approx(4.6));
        CHECK(percentile({7.0}, 30.0) == 7.0);
        CHECK_THROWS_AS(percentile({}, 50.0), DomainError);
    }

    TEST_CASE("noise rise is relative to the count-0 baseline")
    {
        const std::vector<NoiseFloorSamples> s{
            {15, {-90.0, -88.0, -86.0}},
            {0, {-100.0, -100.5, -99.5}},
            {5, {-97.0, -97.0}},
        };
        const auto c = noise_rise_curve(s);
        REQUIRE(c.size() == 3);
        CHECK(c[0].count == 0);
        CHECK(c[0].rise_db == 0.0);
        CHECK(c[1].count == 5);
        CHECK(c[1].rise_db == doctest::Approx(3.0));
        CHECK(c[2].count == 15);
        CHECK(c[2].rise_db == doctest::Approx(12.0));
        CHECK(c[2].p10_db == doctest::Approx(10.4));
        CHECK(c[2].p90_db == doctest::Approx(13.6));
        CHECK(c[2].p10_db <= c[2].rise_db);
        CHECK(c[2].rise_db <= c[2].p90_db);

        const std::vector<NoiseFloorSamples> no_base{{5, {-97.0}}};
        CHECK_THROWS_AS(noise_rise_curve(no_base), DomainError);
    }

    TEST_CASE("summarize")
    {
        const std::vector<double> v{0.0, 0.5, 1.0};
        const auto s = summarize(v);
        CHECK(s.n == 3);
        CHECK(s.mean == doctest::Approx(0.5));
        CHECK(s.p10 == doctest::Approx(0.1));
        CHECK(s.p90 == doctest::Approx(0.9));
        CHECK(summarize(std::vector<double>{}).n == 0);
    }
}
