#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wheelrotor/errors.hpp"
#include "wheelrotor/ground_control.hpp"

using namespace wheelrotor;

namespace {

ControllerGains zero_gains() {
  ControllerGains g;
  g.kv_whl = g.kp_whl = g.ki_whl = g.kd_whl = g.kgamma_whl = 0.0;
  return g;
}

constexpr double kNoLimit = 1e9;

}  // namespace

TEST(GroundCascade, FullEquilibriumGivesZeroCommands) {
  GroundState s;
  s.v = 0.4;
  s.gamma_dot = 0.3;
  const auto out = ground_cascade({0.4, 0.3}, s, {}, ControllerGains{}, kNoLimit, 4e-3);
  EXPECT_EQ(out.command.omega_whl1, 0.0);
  EXPECT_EQ(out.command.omega_whl2, 0.0);
}

TEST(GroundCascade, PureYawErrorIsAntisymmetric) {
  auto g = zero_gains();
  g.kgamma_whl = 2.0;
  GroundState s;
  s.gamma_dot = -0.5;
  const auto out = ground_cascade({0.0, 0.5}, s, {}, g, kNoLimit, 4e-3);
  EXPECT_DOUBLE_EQ(out.command.omega_whl1, -2.0);
  EXPECT_DOUBLE_EQ(out.command.omega_whl2, 2.0);
}

TEST(GroundCascade, VelocityToPitchHandValue) {
  auto g = zero_gains();
  g.kv_whl = 0.2;
  g.kp_whl = 10.0;
  GroundState s;
  s.v = 0.5;
  s.delta = 0.05;
  const auto out = ground_cascade({1.5, 0.0}, s, {}, g, kNoLimit, 4e-3);
  EXPECT_NEAR(out.pitch_error, 0.15, 1e-15);
  EXPECT_NEAR(out.command.omega_whl1, 1.5, 1e-14);
  EXPECT_NEAR(out.command.omega_whl2, 1.5, 1e-14);
}

TEST(GroundCascade, PitchSetpointIsClamped) {
  auto g = zero_gains();
  g.kv_whl = 10.0;
  const auto out = ground_cascade({1.0, 0.0}, GroundState{}, {}, g, kNoLimit, 4e-3);
  EXPECT_DOUBLE_EQ(out.pitch_setpoint, g.max_pitch_setpoint);
}

TEST(GroundCascade, SumAndDifferenceDecompose) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1, 1);
  const ControllerGains g;
  for (int i = 0; i < 2000; ++i) {
    GroundState s;
    s.v = u(rng);
    s.delta = 0.2 * u(rng);
    s.delta_dot = u(rng);
    s.gamma_dot = u(rng);
    GroundPidState st;
    st.integral = 0.1 * u(rng);
    st.prev_error = 0.1 * u(rng);
    st.filtered_rate = u(rng);
    st.primed = true;
    const GroundSetpoint sp{u(rng), u(rng)};

    const auto out = ground_cascade(sp, s, st, g, kNoLimit, 4e-3);
    const double diff = (out.command.omega_whl2 - out.command.omega_whl1) / 2.0;
    EXPECT_NEAR(diff, g.kgamma_whl * (sp.omega_gamma_d - s.gamma_dot), 1e-12);

    // Changing only the yaw inputs must leave the common mode untouched.
    GroundState s2 = s;
    s2.gamma_dot = u(rng);
    const auto out2 = ground_cascade({sp.v_d, u(rng)}, s2, st, g, kNoLimit, 4e-3);
    EXPECT_NEAR(out.command.omega_whl1 + out.command.omega_whl2,
                out2.command.omega_whl1 + out2.command.omega_whl2, 1e-12);
  }
}

TEST(GroundCascade, ZeroGainsGiveZeroCommands) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-5, 5);
  const auto g = zero_gains();
  GroundPidState st;
  for (int i = 0; i < 1000; ++i) {
    GroundState s;
    s.v = u(rng);
    s.delta = 0.3 * u(rng);
    s.gamma_dot = u(rng);
    const auto out = ground_cascade({u(rng), u(rng)}, s, st, g, kNoLimit, 4e-3);
    EXPECT_EQ(out.command.omega_whl1, 0.0);
    EXPECT_EQ(out.command.omega_whl2, 0.0);
    st = out.state;
  }
}

TEST(GroundCascade, SaturationKeepsDifferential) {
  auto g = zero_gains();
  g.kp_whl = 100.0;
  g.kgamma_whl = 10.0;
  GroundState s;
  s.delta = -0.2;  // common term 20
  const auto out = ground_cascade({0.0, 0.5}, s, {}, g, 12.0, 4e-3);
  EXPECT_DOUBLE_EQ(out.command.omega_whl2 - out.command.omega_whl1, 10.0);
  EXPECT_DOUBLE_EQ(out.command.omega_whl2, 12.0);
  EXPECT_DOUBLE_EQ(out.command.omega_whl1, 2.0);
}

TEST(GroundCascade, DifferentialAloneBeyondLimitIsClamped) {
  auto g = zero_gains();
  g.kgamma_whl = 100.0;
  const auto out = ground_cascade({0.0, 1.0}, GroundState{}, {}, g, 12.0, 4e-3);
  EXPECT_DOUBLE_EQ(out.command.omega_whl1, -12.0);
  EXPECT_DOUBLE_EQ(out.command.omega_whl2, 12.0);
}

TEST(GroundCascade, CommandsNeverExceedLimit) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-2, 2);
  const ControllerGains g;
  GroundPidState st;
  for (int i = 0; i < 5000; ++i) {
    GroundState s;
    s.v = u(rng);
    s.delta = 0.5 * u(rng);
    s.gamma_dot = u(rng);
    const auto out = ground_cascade({u(rng), u(rng)}, s, st, g, 80.0, 4e-3);
    EXPECT_LE(std::abs(out.command.omega_whl1), 80.0);
    EXPECT_LE(std::abs(out.command.omega_whl2), 80.0);
    st = out.state;
  }
}

TEST(GroundCascade, IntegralIsTrapezoidalAndClamped) {
  auto g = zero_gains();
  g.ki_whl = 1.0;
  g.ground_integral_limit = 0.05;
  GroundState s;
  s.delta = -0.1;  // error +0.1
  GroundPidState st;
  for (int i = 0; i < 10; ++i) st = ground_cascade({}, s, st, g, kNoLimit, 0.01).state;
  EXPECT_NEAR(st.integral, 0.01, 1e-15);
  for (int i = 0; i < 1000; ++i) st = ground_cascade({}, s, st, g, kNoLimit, 0.01).state;
  EXPECT_DOUBLE_EQ(st.integral, 0.05);
}

TEST(GroundCascade, DerivativeIsLowPassedDifference) {
  auto g = zero_gains();
  g.kd_whl = 1.0;
  const double dt = 4e-3;
  const double tau = 1.0 / (2.0 * kPi * g.pitch_rate_filter_hz);
  const double alpha = dt / (tau + dt);
  GroundState s;
  auto out = ground_cascade({}, s, {}, g, kNoLimit, dt);
  EXPECT_EQ(out.command.omega_whl1, 0.0);
  s.delta = -0.01;  // error steps by +0.01
  out = ground_cascade({}, s, out.state, g, kNoLimit, dt);
  EXPECT_NEAR(out.command.omega_whl1, alpha * 0.01 / dt, 1e-12);
  const double first = out.command.omega_whl1;
  out = ground_cascade({}, s, out.state, g, kNoLimit, dt);
  EXPECT_NEAR(out.command.omega_whl1, (1 - alpha) * first, 1e-12);
}

TEST(GroundCascade, NonPositiveDtRejected) {
  EXPECT_THROW(ground_cascade({}, {}, {}, ControllerGains{}, kNoLimit, 0.0), InvalidInput);
}

TEST(GroundController, ResetClearsMemory) {
  const VehicleParams p;
  GroundController c(p, ControllerGains{});
  GroundState s;
  s.delta = 0.1;
  const auto first = c.update({}, s, 4e-3);
  for (int i = 0; i < 50; ++i) c.update({}, s, 4e-3);
  EXPECT_NE(c.state().integral, 0.0);
  c.reset();
  const auto again = c.update({}, s, 4e-3);
  EXPECT_EQ(again.omega_whl1, first.omega_whl1);
  EXPECT_EQ(again.omega_whl2, first.omega_whl2);
}

namespace {

struct ClosedLoop {
  VehicleParams p;
  ControllerGains g;
  GroundState s;
  GroundController ctrl{p, g};
  WheelCommand cmd;
  long k = 0;

  void step(const GroundSetpoint& sp) {
    const long every = std::lround(1.0 / (g.ground_loop_hz * 1e-3));
    if (k % every == 0) cmd = ctrl.update(sp, s, every * 1e-3);
    const auto t = wheel_velocity_tracking(s, cmd, p);
    s = step_twip_rk4(s, t.wheel1, t.wheel2, 1e-3, p);
    ++k;
  }
};

}  // namespace

TEST(GroundClosedLoop, RecoversFromFiveDegrees) {
  ClosedLoop cl;
  cl.s.delta = deg2rad(5.0);
  double worst_late = 0.0;
  for (int i = 0; i < 20000; ++i) {
    cl.step({});
    if (i >= 5000) worst_late = std::max(worst_late, std::abs(cl.s.delta));
  }
  EXPECT_LT(worst_late, deg2rad(0.5));
}

TEST(GroundClosedLoop, VelocityStepSettlesInBand) {
  ClosedLoop cl;
  double lo = 1e9, hi = -1e9;
  for (int i = 0; i < 20000; ++i) {
    cl.step({0.5, 0.0});
    if (i >= 10000) {
      lo = std::min(lo, cl.s.v);
      hi = std::max(hi, cl.s.v);
    }
  }
  EXPECT_GT(lo, 0.475);
  EXPECT_LT(hi, 0.525);
}
