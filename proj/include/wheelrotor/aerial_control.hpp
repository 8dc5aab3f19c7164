#pragma once

#include <limits>

#include "wheelrotor/aerial_plant.hpp"
#include "wheelrotor/core_math.hpp"
#include "wheelrotor/vehicle_config.hpp"

namespace wheelrotor {

struct AttitudeSetpoint {
  Quaternion q_d{};
  double f_d{0.0};  // desired collective force along body z, N
};

struct RatePidState {
  Vec3 integral{Vec3::Zero()};
  Vec3 prev_error{Vec3::Zero()};
  bool primed{false};  // false until the first sample has been seen
};

struct RatePidGains {
  Vec3 kp{Vec3::Zero()};
  Vec3 ki{Vec3::Zero()};
  Vec3 kd{Vec3::Zero()};
  // Bound on |integral| per axis (rad). Infinite means unbounded.
  Vec3 integral_limit{Vec3::Constant(std::numeric_limits<double>::infinity())};
};

struct RateLoopOutput {
  Vec3 torque;
  RatePidState state;
};

struct SaturationFlags {
  bool theta1{false};
  bool theta2{false};
  bool f1{false};
  bool f2{false};

  bool any() const { return theta1 || theta2 || f1 || f2; }
};

struct MixerOutput {
  ActuatorCommand command;    // clamped to actuator limits
  ActuatorCommand unclamped;  // exact inverse of the forward map
  SaturationFlags saturated;
};

/// Quaternion-error proportional law. q_e = q_d* ⊗ q is brought to the
/// hemisphere eta >= 0 (so q_d and -q_d give the same output), then
/// omega_d = kp .* (phi / sin(phi/2)) * eps_e with phi = 2 atan2(|eps_e|, eta_e).
/// The ratio tends to 2 as the error vanishes; below |eps_e| < 1e-6 the limit is used.
Vec3 attitude_outer_loop(const Quaternion& q_d, const Quaternion& q, const Vec3& kp_att);

/// Rate PID: trapezoidal integral (clamped), backward-difference derivative.
/// The first call after a reset has no derivative kick and integrates a
/// constant error over the step.
RateLoopOutput rate_inner_loop(const Vec3& omega_d, const Vec3& omega, const RatePidState& st,
                               const RatePidGains& gains, double dt);

/// Per-axis torque the rotors can produce from a hover-level collective.
Vec3 torque_authority(const VehicleParams& p);

/// Inverts the rotor allocation map: desired body torque and collective force
/// to tilt angles and thrusts. Throws InvalidInput if f_d <= 0.
MixerOutput mixer_inverse(const Vec3& tau_d, double f_d, const VehicleParams& p);

/// Attitude loop at the outer rate, rate loop and mixer at the inner rate.
class AerialController {
public:
  AerialController(const VehicleParams& params, const ControllerGains& gains);

  /// One inner-loop tick. The outer loop is refreshed when `run_outer` is set.
  ActuatorCommand update(const AttitudeSetpoint& sp, const RigidBodyState& s, bool run_outer,
                         double dt);

  void reset();

  const Vec3& rate_setpoint() const { return rate_sp_; }
  const Vec3& torque_setpoint() const { return torque_sp_; }
  const SaturationFlags& last_saturation() const { return sat_; }

private:
  VehicleParams params_;
  ControllerGains gains_;
  RatePidGains rate_gains_;
  RatePidState rate_state_;
  Vec3 rate_sp_{Vec3::Zero()};
  Vec3 torque_sp_{Vec3::Zero()};
  SaturationFlags sat_;
  bool have_rate_sp_{false};
};

}  // namespace wheelrotor
