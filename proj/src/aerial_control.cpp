#include "wheelrotor/aerial_control.hpp"

#include <algorithm>
#include <cmath>

#include "wheelrotor/errors.hpp"

namespace wheelrotor {

namespace {
constexpr double kSmallAngleEps = 1e-6;
}

Vec3 attitude_outer_loop(const Quaternion& q_d, const Quaternion& q, const Vec3& kp_att) {
  Quaternion qe = quat_error(q_d, q);
  // sign(eta_e); eta_e == 0 is the 180 degree case and either hemisphere is fine.
  if (qe.eta < 0.0) qe = -qe;

  const double n = qe.eps.norm();
  double ratio = 2.0;
  if (n >= kSmallAngleEps) {
    const double phi = 2.0 * std::atan2(n, qe.eta);
    ratio = phi / std::sin(phi / 2.0);
  }
  return kp_att.cwiseProduct(ratio * qe.eps);
}

RateLoopOutput rate_inner_loop(const Vec3& omega_d, const Vec3& omega, const RatePidState& st,
                               const RatePidGains& gains, double dt) {
  if (!(dt > 0.0)) throw InvalidInput("rate_inner_loop: dt must be > 0");
  const Vec3 err = omega_d - omega;
  const Vec3 prev = st.primed ? st.prev_error : err;

  RatePidState next;
  next.integral = st.integral + 0.5 * (err + prev) * dt;
  for (int i = 0; i < 3; ++i) {
    const double lim = gains.integral_limit[i];
    next.integral[i] = std::clamp(next.integral[i], -lim, lim);
  }
  next.prev_error = err;
  next.primed = true;

  const Vec3 derivative = (err - prev) / dt;
  const Vec3 torque = gains.kp.cwiseProduct(err) + gains.ki.cwiseProduct(next.integral) +
                      gains.kd.cwiseProduct(derivative);
  return {torque, next};
}

Vec3 torque_authority(const VehicleParams& p) {
  const double f = p.max_thrust_per_rotor;
  const double st = std::sin(p.max_tilt);
  return {f * p.rotor_separation / 2.0, 2.0 * f * st * p.tilt_axis_offset,
          f * st * p.rotor_separation};
}

MixerOutput mixer_inverse(const Vec3& tau_d, double f_d, const VehicleParams& p) {
  if (!(f_d > 0.0) || !std::isfinite(f_d)) {
    throw InvalidInput("mixer_inverse: desired collective force must be > 0");
  }
  if (!tau_d.allFinite()) throw InvalidInput("mixer_inverse: desired torque must be finite");
  const double d = p.rotor_separation;
  const double h = p.tilt_axis_offset;

  // Rotor i thrust components: a_i = F_i sin(theta_i), b_i = F_i cos(theta_i).
  const double b1 = f_d / 2.0 + tau_d.x() / d;
  const double b2 = f_d / 2.0 - tau_d.x() / d;
  const double a1 = tau_d.y() / (2.0 * h) + tau_d.z() / d;
  const double a2 = tau_d.y() / (2.0 * h) - tau_d.z() / d;

  MixerOutput out;
  out.unclamped = {std::atan2(a1, b1), std::atan2(a2, b2), std::hypot(a1, b1),
                   std::hypot(a2, b2)};

  const auto& u = out.unclamped;
  out.command = {std::clamp(u.theta1_cmd, -p.max_tilt, p.max_tilt),
                 std::clamp(u.theta2_cmd, -p.max_tilt, p.max_tilt),
                 std::clamp(u.f1_cmd, 0.0, p.max_thrust_per_rotor),
                 std::clamp(u.f2_cmd, 0.0, p.max_thrust_per_rotor)};
  out.saturated = {out.command.theta1_cmd != u.theta1_cmd, out.command.theta2_cmd != u.theta2_cmd,
                   out.command.f1_cmd != u.f1_cmd, out.command.f2_cmd != u.f2_cmd};
  return out;
}

AerialController::AerialController(const VehicleParams& params, const ControllerGains& gains)
    : params_(params), gains_(gains) {
  rate_gains_.kp = gains.kp_rt;
  rate_gains_.ki = gains.ki_rt;
  rate_gains_.kd = gains.kd_rt;
  // |ki * integral| <= 50% of the per-axis torque authority.
  const Vec3 auth = torque_authority(params);
  for (int i = 0; i < 3; ++i) {
    const double ki = std::abs(gains.ki_rt[i]);
    rate_gains_.integral_limit[i] =
        ki > 0.0 ? 0.5 * auth[i] / ki : std::numeric_limits<double>::infinity();
  }
}

void AerialController::reset() {
  rate_state_ = {};
  rate_sp_.setZero();
  torque_sp_.setZero();
  sat_ = {};
  have_rate_sp_ = false;
}

ActuatorCommand AerialController::update(const AttitudeSetpoint& sp, const RigidBodyState& s,
                                         bool run_outer, double dt) {
  if (run_outer || !have_rate_sp_) {
    // Fed as (current, desired) so that q_e is the body-frame rotation from the
    // current attitude to the desired one; this gives negative feedback.
    rate_sp_ = attitude_outer_loop(s.q, sp.q_d, gains_.kp_att);
    have_rate_sp_ = true;
  }
  if (!(sp.f_d > 0.0)) {
    // Zero collective means rotors off; there is nothing to allocate.
    rate_state_ = {};
    torque_sp_.setZero();
    sat_ = {};
    return {};
  }
  auto inner = rate_inner_loop(rate_sp_, s.omega_b, rate_state_, rate_gains_, dt);
  rate_state_ = inner.state;
  torque_sp_ = inner.torque;

  const auto mix = mixer_inverse(torque_sp_, sp.f_d, params_);
  sat_ = mix.saturated;
  return mix.command;
}

}  // namespace wheelrotor
