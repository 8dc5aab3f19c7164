#pragma once

#include <cstdint>

#include "wheelrotor/vehicle_config.hpp"

namespace wheelrotor {

/// n-th output (n = 0, 1, ...) of the SplitMix64 sequence started at `seed`:
/// mix(seed + (n + 1) * 0x9E3779B97F4A7C15).
std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t n);

/// Top 53 bits of splitmix64_at scaled to [0, 1).
double uniform01_at(std::uint64_t seed, std::uint64_t n);

struct MixCheckReport {
  std::uint64_t samples{0};
  std::uint64_t seed{0};
  double max_rel_error{0.0};
  std::uint64_t worst_sample{0};
  std::uint64_t saturated{0};
};

/// Draws `samples` actuator states inside the limits (sample i uses draws
/// 4i..4i+3: theta1, theta2 uniform in [-max_tilt, max_tilt], thrusts uniform
/// in [0.05, 1] * max_thrust), maps them to a wrench, inverts that with the
/// mixer and maps the result forward again. Reports the largest relative error
/// |forward(inverse(w)) - w|_inf / |w|_inf.
MixCheckReport run_mixcheck(const VehicleParams& p, std::uint64_t samples, std::uint64_t seed,
                            unsigned workers = 1);

}  // namespace wheelrotor
