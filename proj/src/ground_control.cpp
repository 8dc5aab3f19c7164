#include "wheelrotor/ground_control.hpp"

#include <algorithm>
#include <cmath>

#include "wheelrotor/errors.hpp"

namespace wheelrotor {

GroundCascadeOutput ground_cascade(const GroundSetpoint& sp, const GroundState& s,
                                   const GroundPidState& st, const ControllerGains& g,
                                   double speed_limit, double dt) {
  if (!(dt > 0.0)) throw InvalidInput("ground_cascade: dt must be > 0");

  GroundCascadeOutput out;
  out.pitch_setpoint =
      std::clamp(g.kv_whl * (sp.v_d - s.v), -g.max_pitch_setpoint, g.max_pitch_setpoint);
  const double err = out.pitch_setpoint - s.delta;
  out.pitch_error = err;

  const double prev = st.primed ? st.prev_error : err;
  GroundPidState next;
  next.integral = std::clamp(st.integral + 0.5 * (err + prev) * dt, -g.ground_integral_limit,
                             g.ground_integral_limit);
  next.prev_error = err;
  next.primed = true;
  const double raw_rate = (err - prev) / dt;
  const double tau = 1.0 / (2.0 * kPi * g.pitch_rate_filter_hz);
  const double alpha = dt / (tau + dt);
  next.filtered_rate = st.filtered_rate + alpha * (raw_rate - st.filtered_rate);

  const double common = g.kp_whl * err + g.ki_whl * next.integral + g.kd_whl * next.filtered_rate;
  const double diff = g.kgamma_whl * (sp.omega_gamma_d - s.gamma_dot);

  const double d = std::clamp(diff, -speed_limit, speed_limit);
  const double room = speed_limit - std::abs(d);
  const double c = std::clamp(common, -room, room);
  out.command = {c - d, c + d};
  out.state = next;
  return out;
}

}  // namespace wheelrotor
