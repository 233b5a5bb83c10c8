// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace radint {

/// SplitMix64 finalizer; also used as the seed expander for Rng.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Order-sensitive mix of a key tuple into a substream seed.
///
/// Every stochastic task (scenario draw, dwell noise, dither jitter) derives
/// its seed from its logical coordinates through this function, so results
/// never depend on which worker executes the task or in what order.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> keys) noexcept;

/// xoshiro256** generator with portable, hand-written distributions.
///
/// The standard library distributions are implementation-defined, which would
/// break byte-identical output across toolchains, so the draws used by the
/// simulator are implemented here.
class Rng
{
  public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept { return next(); }
    result_type next() noexcept;

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) noexcept;
    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept;
    /// Standard normal (Marsaglia polar method).
    double normal() noexcept;
    double exponential(double mean) noexcept;
    bool bernoulli(double p) noexcept;

  private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Stateless uniform draw in [0, 1) keyed by a seed; used where a value must
/// be reproducible from its coordinates alone (per-chirp dither jitter).
double keyed_uniform(std::uint64_t key) noexcept;

}  // namespace radint
