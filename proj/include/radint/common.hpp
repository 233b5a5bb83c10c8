// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace radint {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Invalid or unreachable configuration (bad ranges, infeasible layouts).
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A function was called outside its mathematical domain.
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a)
{
    a = std::remainder(a, kTwoPi);
    return a <= -kPi ? a + kTwoPi : a;
}

}  // namespace radint
