#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "wheelrotor/core_math.hpp"

namespace wheelrotor {

/// Physical constants of the vehicle. Aerial geometry follows the rotor-torque
/// model: D is the lateral rotor separation, H the vertical offset from the
/// centre of mass to the tilt axis.
struct VehicleParams {
  double mass{1.5};
  Mat3 inertia{Vec3(0.01, 0.02, 0.02).asDiagonal()};
  double rotor_separation{0.25};  // D
  double tilt_axis_offset{0.05};  // H
  double wheel_radius{0.125};
  double gear_ratio{16.0 / 25.0};  // wheel speed = motor speed * gear_ratio
  double max_thrust_per_rotor{14.5};
  double max_tilt{0.6};
  double servo_time_constant{0.05};
  double rotor_time_constant{0.02};
  double gravity{9.81};

  // Ground-mode (two-wheeled inverted pendulum) extras.
  double wheel_mass{0.1};          // per wheel
  double wheel_inertia{0.0012};    // per wheel, about the axle
  double com_height{0.03};         // body centre of mass above the axle
  double wheel_friction{0.002};    // viscous, N*m*s/rad, per wheel
  double wheel_torque_limit{1.0};  // per wheel, N*m
  double wheel_servo_gain{0.1};    // N*m per rad/s of wheel-speed error
  double max_motor_speed{80.0};    // rad/s, motor side

  double body_mass() const { return mass - 2.0 * wheel_mass; }
  double hover_thrust_per_rotor() const { return mass * gravity / 2.0; }
};

struct ControllerGains {
  Vec3 kp_att{6.0, 6.0, 3.0};
  Vec3 kp_rt{0.3, 0.3, 0.3};
  Vec3 ki_rt{0.1, 0.1, 0.1};
  Vec3 kd_rt{0.002, 0.002, 0.0};
  double rate_loop_hz{1000.0};
  double attitude_loop_hz{250.0};

  double kv_whl{-0.35};
  double kp_whl{30.0};
  double ki_whl{150.0};
  double kd_whl{0.8};
  double kgamma_whl{60.0};
  double ground_loop_hz{250.0};
  double pitch_rate_filter_hz{30.0};
  double max_pitch_setpoint{deg2rad(15.0)};
  double max_ground_speed{1.5};
  double max_yaw_rate{2.0};
  double ground_integral_limit{0.2};  // rad*s
};

/// Mode-dependent electrical power. Defaults are the measured steady powers.
struct PowerModel {
  double aerial_power_w{691.4};
  double ground_power_w{4.5};
  double per_kg_aerial{460.9};
  double per_kg_ground{3.0};
  // Scale aerial power by (sum of thrust / weight)^1.5. Off by default.
  bool effort_scaled{false};
};

struct VehicleConfig {
  VehicleParams params;
  ControllerGains gains;
  PowerModel power;
};

/// Parses and validates a config document. Every key is optional and falls back
/// to the default above; unknown keys are rejected.
VehicleConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const VehicleConfig& cfg);

/// Throws ValidationError listing every violated invariant.
void validate(const VehicleConfig& cfg);

VehicleConfig load_params(const std::filesystem::path& path);
void save_params(const VehicleConfig& cfg, const std::filesystem::path& path);

/// Path of the shipped default profile (config/default.json).
std::filesystem::path default_config_path();

}  // namespace wheelrotor
