#pragma once

#include <optional>
#include <span>

#include "wheelrotor/vehicle_config.hpp"

namespace wheelrotor {

/// Planar two-wheeled inverted pendulum state.
///
/// delta is body pitch, positive nose-up (top of the body behind the axle),
/// which matches the aerial Euler pitch. gamma is heading from north toward
/// east, so yaw rate is positive when turning right. Wheel 2 runs faster than
/// wheel 1 in a positive-yaw turn.
struct GroundState {
  double x{0.0};
  double y{0.0};
  double gamma{0.0};
  double gamma_dot{0.0};
  double v{0.0};
  double delta{0.0};
  double delta_dot{0.0};

  bool all_finite() const;
};

struct GroundDerivative {
  double x_dot{0.0};
  double y_dot{0.0};
  double gamma_dot{0.0};
  double gamma_ddot{0.0};
  double v_dot{0.0};
  double delta_dot{0.0};
  double delta_ddot{0.0};
};

/// Motor-side wheel speed commands, rad/s.
struct WheelCommand {
  double omega_whl1{0.0};
  double omega_whl2{0.0};
};

struct WheelTorques {
  double wheel1{0.0};
  double wheel2{0.0};
};

/// Lumped mass properties of the pendulum model derived from VehicleParams.
struct TwipModel {
  double translational{0.0};  // a = M_b + 2 m_w + 2 I_w / r^2
  double coupling{0.0};       // b = M_b l
  double pitch_inertia{0.0};  // c = I_b + M_b l^2
  double yaw_inertia{0.0};
  double radius{0.0};
  double track{0.0};

  static TwipModel from(const VehicleParams& p);
};

/// Equations of motion for wheel torques applied between body and wheels.
/// Throws FallenOver if |delta| >= pi/2.
GroundDerivative twip_derivative(const GroundState& s, double torque1, double torque2,
                                 const VehicleParams& p);

GroundState step_twip_rk4(const GroundState& s, double torque1, double torque2, double dt,
                          const VehicleParams& p);

/// Total mechanical energy (kinetic + potential about the axle height).
double twip_energy(const GroundState& s, const VehicleParams& p);

/// Wheel speed relative to the body (what the motor sees, wheel side).
double relative_wheel_speed(const GroundState& s, int wheel, const VehicleParams& p);

/// Gear stage: wheel speed = motor speed * gear_ratio.
double motor_to_wheel_speed(double motor_speed, const VehicleParams& p);

/// Proportional wheel-speed servo with a torque clamp.
WheelTorques wheel_velocity_tracking(const GroundState& s, const WheelCommand& cmd,
                                     const VehicleParams& p);

/// Turn radius v / gamma_dot; std::nullopt for straight-line motion.
std::optional<double> circle_kinematics_check(double v, double gamma_dot);

struct CircleFit {
  double cx{0.0};
  double cy{0.0};
  double radius{0.0};
  double rms_residual{0.0};
};

/// Algebraic least-squares circle fit. Throws InvalidInput with fewer than 3 points.
CircleFit fit_circle(std::span<const double> xs, std::span<const double> ys);

}  // namespace wheelrotor
