// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#include "radint/rng.hpp"

#include <cmath>

namespace radint {

namespace {
constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
{
    return (x << k) | (x >> (64 - k));
}

constexpr double to_unit(std::uint64_t bits) noexcept
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}
}  // namespace

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> keys) noexcept
{
    std::uint64_t h = 0x6A09E667F3BCC909ULL;
    for (auto k : keys)
    {
        h = splitmix64(h ^ splitmix64(k + 0x632BE59BD9B4E019ULL));
    }
    return h;
}

Rng::Rng(std::uint64_t seed) noexcept
{
    std::uint64_t x = seed;
    for (auto& s : s_)
    {
        x = splitmix64(x);
        s = x;
    }
}

Rng::result_type Rng::next() noexcept
{
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() noexcept
{
    return to_unit(next());
}

double Rng::uniform(double lo, double hi) noexcept
{
    return lo + (hi - lo) * uniform();
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) noexcept
{
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0)
    {
        return static_cast<std::int64_t>(next());
    }
    // Reject the ragged top so the modulo stays unbiased.
    const std::uint64_t limit = max() - max() % span;
    std::uint64_t v = next();
    while (v >= limit)
    {
        v = next();
    }
    return lo + static_cast<std::int64_t>(v % span);
}

double Rng::normal() noexcept
{
    if (has_spare_)
    {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do
    {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
}

double Rng::exponential(double mean) noexcept
{
    return -mean * std::log1p(-uniform());
}

bool Rng::bernoulli(double p) noexcept
{
    return uniform() < p;
}

double keyed_uniform(std::uint64_t key) noexcept
{
    return to_unit(splitmix64(key));
}

}  // namespace radint
