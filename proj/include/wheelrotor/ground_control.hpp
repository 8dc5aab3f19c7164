#pragma once

#include "wheelrotor/ground_plant.hpp"
#include "wheelrotor/vehicle_config.hpp"

namespace wheelrotor {

struct GroundSetpoint {
  double v_d{0.0};            // m/s
  double omega_gamma_d{0.0};  // rad/s
};

struct GroundPidState {
  double integral{0.0};       // rad*s
  double prev_error{0.0};     // rad
  double filtered_rate{0.0};  // low-passed d(delta_e)/dt
  bool primed{false};
};

struct GroundCascadeOutput {
  WheelCommand command;
  GroundPidState state;
  double pitch_setpoint{0.0};
  double pitch_error{0.0};
};

/// Velocity loop to pitch setpoint, pitch PID to common wheel speed, yaw-rate
/// error to differential wheel speed. `speed_limit` bounds each motor command;
/// on saturation the common term is cut first so the differential survives.
GroundCascadeOutput ground_cascade(const GroundSetpoint& sp, const GroundState& s,
                                   const GroundPidState& st, const ControllerGains& g,
                                   double speed_limit, double dt);

class GroundController {
public:
  GroundController(const VehicleParams& params, const ControllerGains& gains)
      : gains_(gains), speed_limit_(params.max_motor_speed) {}

  WheelCommand update(const GroundSetpoint& sp, const GroundState& s, double dt) {
    auto out = ground_cascade(sp, s, state_, gains_, speed_limit_, dt);
    state_ = out.state;
    return out.command;
  }

  void reset() { state_ = {}; }
  const GroundPidState& state() const { return state_; }

private:
  ControllerGains gains_;
  double speed_limit_;
  GroundPidState state_;
};

}  // namespace wheelrotor
