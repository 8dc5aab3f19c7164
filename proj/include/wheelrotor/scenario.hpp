#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wheelrotor/aerial_control.hpp"
#include "wheelrotor/ground_control.hpp"
#include "wheelrotor/sim_log.hpp"

namespace wheelrotor {

struct ModeEntry {
  double t{0.0};
  Mode mode{Mode::Aerial};
};

/// Attitude setpoints are stored as Euler angles at the file boundary and
/// converted once. An absent thrust means hover thrust m*g.
struct TimedAttitudeSetpoint {
  double t{0.0};
  EulerZYX euler{};
  std::optional<double> thrust_n;
};

struct TimedGroundSetpoint {
  double t{0.0};
  GroundSetpoint sp{};
};

enum class DisturbanceKind {
  TorqueImpulse,  // aerial: angular impulse in body axes, N*m*s
  PitchKick,      // ground: step in pitch rate, rad/s
};

struct Disturbance {
  double t{0.0};
  DisturbanceKind kind{DisturbanceKind::TorqueImpulse};
  Vec3 value{Vec3::Zero()};  // PitchKick uses value.x()
};

struct InitialConditions {
  Vec3 position{Vec3::Zero()};
  Vec3 velocity{Vec3::Zero()};
  EulerZYX attitude{};
  Vec3 omega{Vec3::Zero()};
  double delta{0.0};
  double delta_dot{0.0};
  double v{0.0};
  double yaw_rate{0.0};
  // Start aerial runs with the actuators at the mixer output for the first
  // setpoint instead of at rest.
  bool trim{true};
};

struct Scenario {
  std::string name;
  double duration{0.0};
  double dt_plant{1e-3};
  double dt_control{1e-3};
  int log_every{10};
  InitialConditions initial;
  std::vector<ModeEntry> mode_schedule;
  std::vector<TimedAttitudeSetpoint> attitude_setpoints;
  std::vector<TimedGroundSetpoint> ground_setpoints;
  std::vector<Disturbance> disturbances;

  Mode mode_at(double t) const;
};

/// Throws ValidationError naming every offending field.
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);

/// Checks the scenario against a vehicle configuration (setpoint bounds, loop
/// rate divisibility). Throws ValidationError.
void validate_scenario(const Scenario& sc, const VehicleConfig& cfg);

std::filesystem::path shipped_scenario_path(const std::string& name);
const std::vector<std::string>& shipped_scenario_names();

}  // namespace wheelrotor
