#include "wheelrotor/mixcheck.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "wheelrotor/aerial_control.hpp"
#include "wheelrotor/aerial_plant.hpp"

namespace wheelrotor {

std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t n) {
  std::uint64_t z = seed + (n + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform01_at(std::uint64_t seed, std::uint64_t n) {
  return static_cast<double>(splitmix64_at(seed, n) >> 11) * 0x1.0p-53;
}

namespace {

struct Partial {
  double max_err{0.0};
  std::uint64_t worst{0};
  std::uint64_t saturated{0};
};

Partial check_range(const VehicleParams& p, std::uint64_t seed, std::uint64_t begin,
                    std::uint64_t end) {
  Partial out;
  for (std::uint64_t i = begin; i < end; ++i) {
    auto u = [&](std::uint64_t k) { return uniform01_at(seed, 4 * i + k); };
    const ActuatorState a{(2.0 * u(0) - 1.0) * p.max_tilt, (2.0 * u(1) - 1.0) * p.max_tilt,
                          (0.05 + 0.95 * u(2)) * p.max_thrust_per_rotor,
                          (0.05 + 0.95 * u(3)) * p.max_thrust_per_rotor};
    const BodyWrench w = wrench_from_actuators(a, p);
    const MixerOutput mix = mixer_inverse(w.torque_b, w.collective, p);
    if (mix.saturated.any()) ++out.saturated;
    const auto& c = mix.command;
    const BodyWrench back =
        wrench_from_actuators({c.theta1_cmd, c.theta2_cmd, c.f1_cmd, c.f2_cmd}, p);

    const double scale = std::max(std::abs(w.collective), w.torque_b.cwiseAbs().maxCoeff());
    const double err = std::max(std::abs(back.collective - w.collective),
                                (back.torque_b - w.torque_b).cwiseAbs().maxCoeff()) /
                       scale;
    if (err > out.max_err) {
      out.max_err = err;
      out.worst = i;
    }
  }
  return out;
}

}  // namespace

MixCheckReport run_mixcheck(const VehicleParams& p, std::uint64_t samples, std::uint64_t seed,
                            unsigned workers) {
  workers = std::max(1u, workers);
  const std::uint64_t chunk = (samples + workers - 1) / workers;
  std::vector<Partial> parts(workers);
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = std::min<std::uint64_t>(samples, w * chunk);
    const std::uint64_t end = std::min<std::uint64_t>(samples, begin + chunk);
    threads.emplace_back([&, w, begin, end] { parts[w] = check_range(p, seed, begin, end); });
  }
  for (auto& t : threads) t.join();

  MixCheckReport report;
  report.samples = samples;
  report.seed = seed;
  // Chunks are in index order, so a strict '>' keeps the lowest worst index on ties.
  for (const auto& part : parts) {
    report.saturated += part.saturated;
    if (part.max_err > report.max_rel_error) {
      report.max_rel_error = part.max_err;
      report.worst_sample = part.worst;
    }
  }
  return report;
}

}  // namespace wheelrotor
