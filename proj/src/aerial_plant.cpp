#include "wheelrotor/aerial_plant.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "wheelrotor/errors.hpp"

namespace wheelrotor {

bool RigidBodyState::all_finite() const {
  return pos.allFinite() && vel.allFinite() && std::isfinite(q.eta) && q.eps.allFinite() &&
         omega_b.allFinite();
}

BodyWrench wrench_from_actuators(const ActuatorState& a, const VehicleParams& p) {
  const double d = p.rotor_separation;
  const double h = p.tilt_axis_offset;
  const double s1 = a.f1 * std::sin(a.theta1), c1 = a.f1 * std::cos(a.theta1);
  const double s2 = a.f2 * std::sin(a.theta2), c2 = a.f2 * std::cos(a.theta2);

  BodyWrench w;
  w.collective = c1 + c2;
  w.force_b = Vec3(0.0, 0.0, -w.collective);
  w.torque_b = Vec3((c1 - c2) * d / 2.0, (s1 + s2) * h, (s1 - s2) * d / 2.0);
  return w;
}

RigidBodyDerivative rigid_body_derivative(const RigidBodyState& s, const BodyWrench& w,
                                          const VehicleParams& p) {
  const Vec3 gravity(0.0, 0.0, p.mass * p.gravity);
  const Vec3& om = s.omega_b;
  const Mat3& j = p.inertia;

  RigidBodyDerivative d;
  d.pos_dot = s.vel;
  d.vel_dot = (gravity + s.q.rotate(w.force_b)) / p.mass;
  d.omega_dot = j.ldlt().solve(w.torque_b - om.cross(j * om));
  const Quaternion half = quat_product(s.q, Quaternion{0.0, om});
  d.q_dot = {0.5 * half.eta, 0.5 * half.eps};
  return d;
}

ActuatorState clamp_to_limits(const ActuatorState& a, const VehicleParams& p) {
  return {std::clamp(a.theta1, -p.max_tilt, p.max_tilt),
          std::clamp(a.theta2, -p.max_tilt, p.max_tilt),
          std::clamp(a.f1, 0.0, p.max_thrust_per_rotor),
          std::clamp(a.f2, 0.0, p.max_thrust_per_rotor)};
}

ActuatorState actuator_step(const ActuatorState& a, const ActuatorCommand& cmd, double dt,
                            const VehicleParams& p) {
  if (!(dt > 0.0)) throw InvalidInput("actuator_step: dt must be > 0");
  const double ks = -std::expm1(-dt / p.servo_time_constant);
  const double kr = -std::expm1(-dt / p.rotor_time_constant);
  ActuatorState next{a.theta1 + (cmd.theta1_cmd - a.theta1) * ks,
                     a.theta2 + (cmd.theta2_cmd - a.theta2) * ks,
                     a.f1 + (cmd.f1_cmd - a.f1) * kr,
                     a.f2 + (cmd.f2_cmd - a.f2) * kr};
  return clamp_to_limits(next, p);
}

namespace {

RigidBodyState advance(const RigidBodyState& s, const RigidBodyDerivative& d, double h) {
  RigidBodyState out;
  out.pos = s.pos + h * d.pos_dot;
  out.vel = s.vel + h * d.vel_dot;
  out.q = {s.q.eta + h * d.q_dot.eta, s.q.eps + h * d.q_dot.eps};
  out.omega_b = s.omega_b + h * d.omega_dot;
  return out;
}

}  // namespace

RigidBodyState step_rk4(const RigidBodyState& s, const BodyWrench& w, double dt,
                        const VehicleParams& p) {
  if (!(dt > 0.0)) throw InvalidInput("step_rk4: dt must be > 0");
  const auto k1 = rigid_body_derivative(s, w, p);
  const auto k2 = rigid_body_derivative(advance(s, k1, dt / 2.0), w, p);
  const auto k3 = rigid_body_derivative(advance(s, k2, dt / 2.0), w, p);
  const auto k4 = rigid_body_derivative(advance(s, k3, dt), w, p);

  RigidBodyDerivative sum;
  sum.pos_dot = k1.pos_dot + 2.0 * k2.pos_dot + 2.0 * k3.pos_dot + k4.pos_dot;
  sum.vel_dot = k1.vel_dot + 2.0 * k2.vel_dot + 2.0 * k3.vel_dot + k4.vel_dot;
  sum.q_dot.eta = k1.q_dot.eta + 2.0 * k2.q_dot.eta + 2.0 * k3.q_dot.eta + k4.q_dot.eta;
  sum.q_dot.eps = k1.q_dot.eps + 2.0 * k2.q_dot.eps + 2.0 * k3.q_dot.eps + k4.q_dot.eps;
  sum.omega_dot = k1.omega_dot + 2.0 * k2.omega_dot + 2.0 * k3.omega_dot + k4.omega_dot;

  RigidBodyState next = advance(s, sum, dt / 6.0);
  if (!next.all_finite()) throw SimulationDiverged("aerial state became non-finite");
  next.q = next.q.normalized();
  if (!next.all_finite()) throw SimulationDiverged("aerial state became non-finite");
  return next;
}

RigidBodyState step_rk4(const RigidBodyState& s, const ActuatorState& a, double dt,
                        const VehicleParams& p) {
  return step_rk4(s, wrench_from_actuators(a, p), dt, p);
}

double rotational_kinetic_energy(const RigidBodyState& s, const VehicleParams& p) {
  return 0.5 * s.omega_b.dot(p.inertia * s.omega_b);
}

Vec3 inertial_angular_momentum(const RigidBodyState& s, const VehicleParams& p) {
  return s.q.rotate(p.inertia * s.omega_b);
}

}  // namespace wheelrotor
