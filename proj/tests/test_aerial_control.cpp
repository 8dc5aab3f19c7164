#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wheelrotor/aerial_control.hpp"
#include "wheelrotor/errors.hpp"

using namespace wheelrotor;

namespace {

Quaternion random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Quaternion{n(rng), Vec3(n(rng), n(rng), n(rng))}.normalized();
}

Vec3 random_axis(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Vec3(n(rng), n(rng), n(rng)).normalized();
}

ActuatorState as_state(const ActuatorCommand& c) {
  return {c.theta1_cmd, c.theta2_cmd, c.f1_cmd, c.f2_cmd};
}

double rel_error(const BodyWrench& w, const Vec3& tau, double f) {
  Eigen::Vector4d got(w.torque_b.x(), w.torque_b.y(), w.torque_b.z(), w.collective);
  Eigen::Vector4d want(tau.x(), tau.y(), tau.z(), f);
  return (got - want).cwiseAbs().maxCoeff() / want.cwiseAbs().maxCoeff();
}

}  // namespace

TEST(AttitudeOuterLoop, ZeroError) {
  std::mt19937_64 rng(1);
  const auto q = random_unit(rng);
  EXPECT_EQ(attitude_outer_loop(q, q, Vec3(6, 6, 3)).norm(), 0.0);
}

TEST(AttitudeOuterLoop, SmallRotationAboutX) {
  const auto q = Quaternion::from_axis_angle(Vec3::UnitX(), 0.002);
  const Vec3 w = attitude_outer_loop(Quaternion::identity(), q, Vec3::Constant(5.0));
  EXPECT_NEAR(w.x(), 0.01, 0.01 * 1e-3);
  EXPECT_NEAR(w.y(), 0.0, 1e-15);
  EXPECT_NEAR(w.z(), 0.0, 1e-15);
}

TEST(AttitudeOuterLoop, HalfTurnAboutZ) {
  const Quaternion q{0.0, Vec3(0, 0, 1)};
  const Vec3 w = attitude_outer_loop(Quaternion::identity(), q, Vec3::Ones());
  EXPECT_NEAR(w.norm(), kPi, 1e-12);
  EXPECT_NEAR(std::abs(w.z()), kPi, 1e-12);
}

TEST(AttitudeOuterLoop, MagnitudeEqualsGainTimesAngle) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> angle(0.01, 3.1);
  for (int i = 0; i < 1000; ++i) {
    const double a = angle(rng);
    const auto q = Quaternion::from_axis_angle(random_axis(rng), a);
    const Vec3 w = attitude_outer_loop(Quaternion::identity(), q, Vec3::Constant(2.0));
    EXPECT_NEAR(w.norm(), 2.0 * a, 1e-9);
  }
}

TEST(AttitudeOuterLoop, SmallAngleMatchesLinearLaw) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(1e-8, 0.01);
  std::uniform_real_distribution<double> gain(0.5, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const Vec3 kp(gain(rng), gain(rng), gain(rng));
    const auto qd = random_unit(rng);
    const auto q = quat_multiply(qd, Quaternion::from_axis_angle(random_axis(rng), angle(rng)));
    auto qe = quat_error(qd, q);
    if (qe.eta < 0) qe = -qe;
    const Vec3 linear = 2.0 * kp.cwiseProduct(qe.eps);
    const Vec3 w = attitude_outer_loop(qd, q, kp);
    EXPECT_LE((w - linear).norm(), 1e-3 * linear.norm());
  }
}

TEST(AttitudeOuterLoop, ContinuousAtSmallAngleSwitch) {
  const Vec3 kp = Vec3::Ones();
  for (const Vec3& axis : {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 1).normalized()}) {
    auto at = [&](double eps_norm) {
      const Quaternion q{std::sqrt(1.0 - eps_norm * eps_norm), eps_norm * axis};
      return attitude_outer_loop(Quaternion::identity(), q, kp);
    };
    EXPECT_LT((at(1e-6 + 1e-9) - at(1e-6 - 1e-9)).norm(), 1e-8);
    EXPECT_LT((at(1e-6) - at(1e-6 - 1e-12)).norm(), 1e-8);
  }
}

TEST(AttitudeOuterLoop, DoubleCoverInvariance) {
  std::mt19937_64 rng(4);
  const Vec3 kp(6, 6, 3);
  for (int i = 0; i < 1000; ++i) {
    const auto qd = random_unit(rng), q = random_unit(rng);
    const Vec3 ref = attitude_outer_loop(qd, q, kp);
    EXPECT_LT((attitude_outer_loop(-qd, q, kp) - ref).norm(), 1e-12);
    EXPECT_LT((attitude_outer_loop(qd, -q, kp) - ref).norm(), 1e-12);
    EXPECT_LE(ref.cwiseQuotient(kp).norm(), kPi + 1e-12);
  }
}

TEST(AttitudeOuterLoop, NegatedIdentityErrorIsZero) {
  const Quaternion minus_one{-1.0, Vec3::Zero()};
  EXPECT_EQ(attitude_outer_loop(Quaternion::identity(), minus_one, Vec3::Ones()).norm(), 0.0);
}

TEST(RateInnerLoop, ZeroError) {
  RatePidGains g;
  g.kp = g.ki = g.kd = Vec3::Ones();
  const auto out = rate_inner_loop(Vec3(1, 2, 3), Vec3(1, 2, 3), {}, g, 1e-3);
  EXPECT_EQ(out.torque, Vec3::Zero());
}

TEST(RateInnerLoop, PureProportional) {
  RatePidGains g;
  g.kp = Vec3::Constant(2.0);
  const auto out = rate_inner_loop(Vec3(1, 0, 0), Vec3::Zero(), {}, g, 1e-3);
  EXPECT_EQ(out.torque, Vec3(2, 0, 0));
}

TEST(RateInnerLoop, TrapezoidIntegralOfStep) {
  RatePidGains g;
  g.ki = Vec3::Ones();
  const Vec3 err(0.5, -1.0, 2.0);
  RatePidState st;
  Vec3 torque;
  for (int i = 0; i < 10; ++i) {
    const auto out = rate_inner_loop(err, Vec3::Zero(), st, g, 0.01);
    st = out.state;
    torque = out.torque;
  }
  EXPECT_LT((torque - 0.1 * err).norm(), 1e-15);
}

TEST(RateInnerLoop, TrapezoidAverageOnRamp) {
  RatePidGains g;
  g.ki = Vec3::Ones();
  RatePidState st;
  const double dt = 0.01;
  st = rate_inner_loop(Vec3::Zero(), Vec3::Zero(), st, g, dt).state;
  // error e_k = k: integral after n steps is sum of (k-1 + k)/2 * dt = n^2/2 * dt.
  for (int k = 1; k <= 20; ++k) st = rate_inner_loop(Vec3::Constant(k), Vec3::Zero(), st, g, dt).state;
  EXPECT_NEAR(st.integral.x(), 20.0 * 20.0 / 2.0 * dt, 1e-12);
}

TEST(RateInnerLoop, DerivativeIsBackwardDifference) {
  RatePidGains g;
  g.kd = Vec3::Ones();
  auto first = rate_inner_loop(Vec3(1, 0, 0), Vec3::Zero(), {}, g, 0.01);
  EXPECT_EQ(first.torque, Vec3::Zero());
  const auto second = rate_inner_loop(Vec3(1.5, 0, 0), Vec3::Zero(), first.state, g, 0.01);
  EXPECT_NEAR(second.torque.x(), 50.0, 1e-12);
}

TEST(RateInnerLoop, IntegralIsClamped) {
  RatePidGains g;
  g.ki = Vec3::Ones();
  g.integral_limit = Vec3(0.05, 0.05, 0.05);
  RatePidState st;
  for (int i = 0; i < 1000; ++i) st = rate_inner_loop(Vec3(1, -1, 0), Vec3::Zero(), st, g, 0.01).state;
  EXPECT_DOUBLE_EQ(st.integral.x(), 0.05);
  EXPECT_DOUBLE_EQ(st.integral.y(), -0.05);
}

TEST(RateInnerLoop, ZeroGainsGiveZeroTorque) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-100, 100);
  RatePidState st;
  for (int i = 0; i < 1000; ++i) {
    const auto out = rate_inner_loop(Vec3(u(rng), u(rng), u(rng)), Vec3(u(rng), u(rng), u(rng)), st,
                                     RatePidGains{}, 1e-3);
    EXPECT_EQ(out.torque, Vec3::Zero());
    st = out.state;
  }
}

TEST(RateInnerLoop, NonPositiveDtRejected) {
  EXPECT_THROW(rate_inner_loop(Vec3::Zero(), Vec3::Zero(), {}, {}, 0.0), InvalidInput);
}

TEST(MixerInverse, HoverSplit) {
  const VehicleParams p;
  const auto out = mixer_inverse(Vec3::Zero(), 1.5 * 9.81, p);
  EXPECT_EQ(out.command.theta1_cmd, 0.0);
  EXPECT_EQ(out.command.theta2_cmd, 0.0);
  EXPECT_EQ(out.command.f1_cmd, 7.3575);
  EXPECT_EQ(out.command.f2_cmd, 7.3575);
  EXPECT_FALSE(out.saturated.any());
}

TEST(MixerInverse, PitchTorqueHandValues) {
  VehicleParams p;
  p.tilt_axis_offset = 0.05;
  const auto out = mixer_inverse(Vec3(0, 0.1, 0), 10.0, p);
  // a1 = a2 = 0.1 / (2 * 0.05) = 1, b1 = b2 = 5.
  EXPECT_NEAR(out.command.theta1_cmd, std::atan2(1.0, 5.0), 1e-15);
  EXPECT_NEAR(out.command.theta2_cmd, 0.1974, 1e-4);
  EXPECT_NEAR(out.command.f1_cmd, std::sqrt(26.0), 1e-14);
  EXPECT_NEAR(out.command.f2_cmd, 5.0990, 1e-4);
  const auto w = wrench_from_actuators(as_state(out.command), p);
  EXPECT_NEAR(w.torque_b.y(), 0.1, 1e-15);
  EXPECT_NEAR(w.collective, 10.0, 1e-14);
}

TEST(MixerInverse, RoundTripInsideEnvelope) {
  const VehicleParams p;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> tilt(-p.max_tilt, p.max_tilt);
  std::uniform_real_distribution<double> thrust(0.05 * p.max_thrust_per_rotor, p.max_thrust_per_rotor);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const ActuatorState a{tilt(rng), tilt(rng), thrust(rng), thrust(rng)};
    const auto w = wrench_from_actuators(a, p);
    const auto out = mixer_inverse(w.torque_b, w.collective, p);
    EXPECT_FALSE(out.saturated.any());
    worst = std::max(worst, rel_error(wrench_from_actuators(as_state(out.command), p),
                                      w.torque_b, w.collective));
    EXPECT_NEAR(out.command.theta1_cmd, a.theta1, 1e-9);
    EXPECT_NEAR(out.command.f2_cmd, a.f2, 1e-9);
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(MixerInverse, UnclampedSolutionAlwaysInverts) {
  const VehicleParams p;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> tau(-3, 3), f(0.1, 60);
  for (int i = 0; i < 10000; ++i) {
    const Vec3 t(tau(rng), tau(rng), tau(rng));
    const double fd = f(rng);
    const auto out = mixer_inverse(t, fd, p);
    EXPECT_LT(rel_error(wrench_from_actuators(as_state(out.unclamped), p), t, fd), 1e-9);
  }
}

TEST(MixerInverse, SwapReflect) {
  const VehicleParams p;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> tau(-1, 1), f(1, 25);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 t(tau(rng), tau(rng), tau(rng));
    const double fd = f(rng);
    const auto a = mixer_inverse(t, fd, p).unclamped;
    const auto b = mixer_inverse(Vec3(-t.x(), t.y(), -t.z()), fd, p).unclamped;
    EXPECT_NEAR(a.theta1_cmd, b.theta2_cmd, 1e-14);
    EXPECT_NEAR(a.theta2_cmd, b.theta1_cmd, 1e-14);
    EXPECT_NEAR(a.f1_cmd, b.f2_cmd, 1e-12);
    EXPECT_NEAR(a.f2_cmd, b.f1_cmd, 1e-12);
  }
}

TEST(MixerInverse, SaturationIsFlaggedNotThrown) {
  const VehicleParams p;
  const auto out = mixer_inverse(Vec3(0, 2.0, 0), 40.0, p);
  EXPECT_TRUE(out.saturated.f1);
  EXPECT_TRUE(out.saturated.theta1 || out.saturated.f2);
  EXPECT_LE(out.command.f1_cmd, p.max_thrust_per_rotor);
  EXPECT_LE(std::abs(out.command.theta1_cmd), p.max_tilt);
}

TEST(MixerInverse, LargeRollAtLowCollectiveUsesCorrectQuadrant) {
  const VehicleParams p;
  // b2 < 0: rotor 2 would have to push downward.
  const auto out = mixer_inverse(Vec3(1.0, 0, 0), 2.0, p);
  EXPECT_GT(std::abs(out.unclamped.theta2_cmd), kPi / 2);
  EXPECT_TRUE(out.saturated.theta2);
}

TEST(MixerInverse, NonPositiveCollectiveRejected) {
  const VehicleParams p;
  EXPECT_THROW(mixer_inverse(Vec3::Zero(), 0.0, p), InvalidInput);
  EXPECT_THROW(mixer_inverse(Vec3::Zero(), -1.0, p), InvalidInput);
}

TEST(AerialController, LevelHoverCommandsTrim) {
  const VehicleParams p;
  AerialController ctrl(p, ControllerGains{});
  RigidBodyState s;
  const auto cmd = ctrl.update({Quaternion::identity(), p.mass * p.gravity}, s, true, 1e-3);
  EXPECT_NEAR(cmd.f1_cmd, p.hover_thrust_per_rotor(), 1e-12);
  EXPECT_NEAR(cmd.f2_cmd, p.hover_thrust_per_rotor(), 1e-12);
  EXPECT_EQ(cmd.theta1_cmd, 0.0);
}

TEST(AerialController, RollErrorProducesRestoringTorque) {
  const VehicleParams p;
  AerialController ctrl(p, ControllerGains{});
  RigidBodyState s;
  s.q = quat_from_euler({0.0, 0.0, deg2rad(10.0)});
  ctrl.update({Quaternion::identity(), p.mass * p.gravity}, s, true, 1e-3);
  EXPECT_LT(ctrl.rate_setpoint().x(), 0.0);
  EXPECT_LT(ctrl.torque_setpoint().x(), 0.0);

  s.q = quat_from_euler({deg2rad(20.0), deg2rad(-5.0), 0.0});
  ctrl.reset();
  ctrl.update({Quaternion::identity(), p.mass * p.gravity}, s, true, 1e-3);
  EXPECT_LT(ctrl.rate_setpoint().z(), 0.0);
  EXPECT_GT(ctrl.rate_setpoint().y(), 0.0);
}

TEST(AerialController, ZeroCollectiveMeansRotorsOff) {
  const VehicleParams p;
  AerialController ctrl(p, ControllerGains{});
  const auto cmd = ctrl.update({Quaternion::identity(), 0.0}, RigidBodyState{}, true, 1e-3);
  EXPECT_EQ(cmd.f1_cmd, 0.0);
  EXPECT_EQ(cmd.f2_cmd, 0.0);
}

TEST(TorqueAuthority, DefaultValues) {
  const VehicleParams p;
  const Vec3 a = torque_authority(p);
  EXPECT_DOUBLE_EQ(a.x(), 14.5 * 0.25 / 2);
  EXPECT_DOUBLE_EQ(a.y(), 2 * 14.5 * std::sin(0.6) * 0.05);
  EXPECT_DOUBLE_EQ(a.z(), 14.5 * std::sin(0.6) * 0.25);
}
