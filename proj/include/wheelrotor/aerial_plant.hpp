#pragma once

#include "wheelrotor/core_math.hpp"
#include "wheelrotor/vehicle_config.hpp"

namespace wheelrotor {

/// 6-DOF aerial state. Position and velocity are inertial (NED), omega_b is the
/// body angular rate and q rotates body vectors into the inertial frame.
struct RigidBodyState {
  Vec3 pos{Vec3::Zero()};
  Vec3 vel{Vec3::Zero()};
  Quaternion q{};
  Vec3 omega_b{Vec3::Zero()};

  bool all_finite() const;
};

struct RigidBodyDerivative {
  Vec3 pos_dot{Vec3::Zero()};
  Vec3 vel_dot{Vec3::Zero()};
  Quaternion q_dot{0.0, Vec3::Zero()};
  Vec3 omega_dot{Vec3::Zero()};
};

/// Tilt angles are measured from body z; thrusts are per rotor.
struct ActuatorState {
  double theta1{0.0};
  double theta2{0.0};
  double f1{0.0};
  double f2{0.0};
};

struct ActuatorCommand {
  double theta1_cmd{0.0};
  double theta2_cmd{0.0};
  double f1_cmd{0.0};
  double f2_cmd{0.0};
};

/// Collective thrust magnitude and body torque produced by the rotors.
/// force_b is the applied body force: thrust acts along -z_B (up in NED).
struct BodyWrench {
  double collective{0.0};  // F = F1 cos th1 + F2 cos th2
  Vec3 force_b{Vec3::Zero()};
  Vec3 torque_b{Vec3::Zero()};
};

BodyWrench wrench_from_actuators(const ActuatorState& a, const VehicleParams& p);

RigidBodyDerivative rigid_body_derivative(const RigidBodyState& s, const BodyWrench& w,
                                          const VehicleParams& p);

/// Exact first-order lag over dt toward the command, then clamped to limits.
ActuatorState actuator_step(const ActuatorState& a, const ActuatorCommand& cmd, double dt,
                            const VehicleParams& p);

/// Clamps tilts to +-max_tilt and thrusts to [0, max_thrust_per_rotor].
ActuatorState clamp_to_limits(const ActuatorState& a, const VehicleParams& p);

/// Classical RK4 with the actuators held over the step. Throws SimulationDiverged
/// if the result is not finite.
RigidBodyState step_rk4(const RigidBodyState& s, const ActuatorState& a, double dt,
                        const VehicleParams& p);

/// Same, with an explicit wrench.
RigidBodyState step_rk4(const RigidBodyState& s, const BodyWrench& w, double dt,
                        const VehicleParams& p);

double rotational_kinetic_energy(const RigidBodyState& s, const VehicleParams& p);
Vec3 inertial_angular_momentum(const RigidBodyState& s, const VehicleParams& p);

}  // namespace wheelrotor
