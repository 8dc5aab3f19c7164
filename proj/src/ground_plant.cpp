#include "wheelrotor/ground_plant.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "wheelrotor/errors.hpp"

namespace wheelrotor {

bool GroundState::all_finite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(gamma) &&
         std::isfinite(gamma_dot) && std::isfinite(v) && std::isfinite(delta) &&
         std::isfinite(delta_dot);
}

TwipModel TwipModel::from(const VehicleParams& p) {
  const double r = p.wheel_radius;
  const double mb = p.body_mass();
  const double l = p.com_height;
  const double wheel_equiv = p.wheel_mass + p.wheel_inertia / (r * r);
  TwipModel m;
  m.translational = mb + 2.0 * wheel_equiv;
  m.coupling = mb * l;
  m.pitch_inertia = p.inertia(1, 1) + mb * l * l;
  m.yaw_inertia = p.inertia(2, 2) + 2.0 * wheel_equiv * std::pow(p.rotor_separation / 2.0, 2);
  m.radius = r;
  m.track = p.rotor_separation;
  return m;
}

double relative_wheel_speed(const GroundState& s, int wheel, const VehicleParams& p) {
  const double side = wheel == 1 ? -1.0 : 1.0;
  return (s.v + side * s.gamma_dot * p.rotor_separation / 2.0) / p.wheel_radius + s.delta_dot;
}

GroundDerivative twip_derivative(const GroundState& s, double torque1, double torque2,
                                 const VehicleParams& p) {
  if (!(std::abs(s.delta) < kPi / 2.0)) throw FallenOver("body pitch reached +-90 degrees");
  const auto m = TwipModel::from(p);

  // Viscous loss acts on the relative (motor) rotation of each wheel.
  const double t1 = torque1 - p.wheel_friction * relative_wheel_speed(s, 1, p);
  const double t2 = torque2 - p.wheel_friction * relative_wheel_speed(s, 2, p);
  const double sum = t1 + t2;

  const double cd = std::cos(s.delta), sd = std::sin(s.delta);
  const double a = m.translational, b = m.coupling, c = m.pitch_inertia;
  // [ a      -b cd ] [v_dot    ]   [ sum/r - b sd delta_dot^2 ]
  // [ -b cd   c    ] [delta_dd ] = [ sum   + b g sd           ]
  const double r1 = sum / m.radius - b * sd * s.delta_dot * s.delta_dot;
  const double r2 = sum + b * p.gravity * sd;
  const double det = a * c - b * b * cd * cd;

  GroundDerivative d;
  d.x_dot = s.v * std::cos(s.gamma);
  d.y_dot = s.v * std::sin(s.gamma);
  d.gamma_dot = s.gamma_dot;
  d.gamma_ddot = (m.track / (2.0 * m.radius)) * (t2 - t1) / m.yaw_inertia;
  d.v_dot = (c * r1 + b * cd * r2) / det;
  d.delta_dot = s.delta_dot;
  d.delta_ddot = (b * cd * r1 + a * r2) / det;
  return d;
}

namespace {

GroundState advance(const GroundState& s, const GroundDerivative& d, double h) {
  return {s.x + h * d.x_dot,         s.y + h * d.y_dot, s.gamma + h * d.gamma_dot,
          s.gamma_dot + h * d.gamma_ddot, s.v + h * d.v_dot, s.delta + h * d.delta_dot,
          s.delta_dot + h * d.delta_ddot};
}

}  // namespace

GroundState step_twip_rk4(const GroundState& s, double torque1, double torque2, double dt,
                          const VehicleParams& p) {
  if (!(dt > 0.0)) throw InvalidInput("step_twip_rk4: dt must be > 0");
  const auto k1 = twip_derivative(s, torque1, torque2, p);
  const auto k2 = twip_derivative(advance(s, k1, dt / 2.0), torque1, torque2, p);
  const auto k3 = twip_derivative(advance(s, k2, dt / 2.0), torque1, torque2, p);
  const auto k4 = twip_derivative(advance(s, k3, dt), torque1, torque2, p);

  GroundDerivative sum;
  sum.x_dot = k1.x_dot + 2 * k2.x_dot + 2 * k3.x_dot + k4.x_dot;
  sum.y_dot = k1.y_dot + 2 * k2.y_dot + 2 * k3.y_dot + k4.y_dot;
  sum.gamma_dot = k1.gamma_dot + 2 * k2.gamma_dot + 2 * k3.gamma_dot + k4.gamma_dot;
  sum.gamma_ddot = k1.gamma_ddot + 2 * k2.gamma_ddot + 2 * k3.gamma_ddot + k4.gamma_ddot;
  sum.v_dot = k1.v_dot + 2 * k2.v_dot + 2 * k3.v_dot + k4.v_dot;
  sum.delta_dot = k1.delta_dot + 2 * k2.delta_dot + 2 * k3.delta_dot + k4.delta_dot;
  sum.delta_ddot = k1.delta_ddot + 2 * k2.delta_ddot + 2 * k3.delta_ddot + k4.delta_ddot;

  GroundState next = advance(s, sum, dt / 6.0);
  if (!next.all_finite()) throw SimulationDiverged("ground state became non-finite");
  if (!(std::abs(next.delta) < kPi / 2.0)) throw FallenOver("body pitch reached +-90 degrees");
  return next;
}

double twip_energy(const GroundState& s, const VehicleParams& p) {
  const auto m = TwipModel::from(p);
  const double kinetic = 0.5 * m.translational * s.v * s.v -
                         m.coupling * std::cos(s.delta) * s.v * s.delta_dot +
                         0.5 * m.pitch_inertia * s.delta_dot * s.delta_dot +
                         0.5 * m.yaw_inertia * s.gamma_dot * s.gamma_dot;
  const double potential = m.coupling * p.gravity * std::cos(s.delta);
  return kinetic + potential;
}

double motor_to_wheel_speed(double motor_speed, const VehicleParams& p) {
  return motor_speed * p.gear_ratio;
}

WheelTorques wheel_velocity_tracking(const GroundState& s, const WheelCommand& cmd,
                                     const VehicleParams& p) {
  const double lim = p.wheel_torque_limit;
  auto servo = [&](double motor_cmd, int wheel) {
    const double err = motor_to_wheel_speed(motor_cmd, p) - relative_wheel_speed(s, wheel, p);
    return std::clamp(p.wheel_servo_gain * err, -lim, lim);
  };
  return {servo(cmd.omega_whl1, 1), servo(cmd.omega_whl2, 2)};
}

std::optional<double> circle_kinematics_check(double v, double gamma_dot) {
  if (gamma_dot == 0.0) return std::nullopt;
  return std::abs(v / gamma_dot);
}

CircleFit fit_circle(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 3) {
    throw InvalidInput("fit_circle: need at least 3 matching points");
  }
  const auto n = static_cast<Eigen::Index>(xs.size());
  // x^2 + y^2 = 2 cx x + 2 cy y + (r^2 - cx^2 - cy^2)
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = xs[static_cast<std::size_t>(i)], y = ys[static_cast<std::size_t>(i)];
    a(i, 0) = 2.0 * x;
    a(i, 1) = 2.0 * y;
    a(i, 2) = 1.0;
    rhs(i) = x * x + y * y;
  }
  const Eigen::Vector3d sol = a.colPivHouseholderQr().solve(rhs);
  CircleFit fit;
  fit.cx = sol(0);
  fit.cy = sol(1);
  fit.radius = std::sqrt(sol(2) + fit.cx * fit.cx + fit.cy * fit.cy);
  double ss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double dr = std::hypot(xs[static_cast<std::size_t>(i)] - fit.cx,
                                 ys[static_cast<std::size_t>(i)] - fit.cy) -
                      fit.radius;
    ss += dr * dr;
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

}  // namespace wheelrotor
