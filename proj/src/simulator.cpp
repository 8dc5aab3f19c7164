#include "wheelrotor/simulator.hpp"

#include <cmath>
#include <string>
#include <string_view>

#include <Eigen/Cholesky>

#include "wheelrotor/aerial_control.hpp"
#include "wheelrotor/errors.hpp"
#include "wheelrotor/ground_control.hpp"
#include "wheelrotor/metrics.hpp"

namespace wheelrotor {

RigidBodyState aerial_from_ground(const GroundState& g, double altitude) {
  RigidBodyState s;
  s.pos = Vec3(g.x, g.y, altitude);
  s.vel = Vec3(g.v * std::cos(g.gamma), g.v * std::sin(g.gamma), 0.0);
  s.q = quat_from_euler({g.gamma, g.delta, 0.0});
  // Body rates for zero roll: p = -sin(pitch) yaw_rate, q = pitch_rate, r = cos(pitch) yaw_rate.
  s.omega_b = Vec3(-std::sin(g.delta) * g.gamma_dot, g.delta_dot, std::cos(g.delta) * g.gamma_dot);
  return s;
}

GroundState ground_from_aerial(const RigidBodyState& s) {
  const EulerZYX e = euler_from_quat(s.q);
  const double cr = std::cos(e.phi), sr = std::sin(e.phi);
  GroundState g;
  g.x = s.pos.x();
  g.y = s.pos.y();
  g.gamma = e.kappa;
  g.v = s.vel.x() * std::cos(e.kappa) + s.vel.y() * std::sin(e.kappa);
  g.delta = e.omega;
  g.delta_dot = s.omega_b.y() * cr - s.omega_b.z() * sr;
  g.gamma_dot = (s.omega_b.y() * sr + s.omega_b.z() * cr) / std::cos(e.omega);
  return g;
}

bool landing_permitted(const RigidBodyState& s) {
  const EulerZYX e = euler_from_quat(s.q);
  return std::abs(e.phi) < kLandingMaxRoll && s.vel.z() < kLandingMaxDescentRate;
}

namespace {

void add_event(std::string& events, const char* flag) {
  const std::string_view f(flag);
  std::string_view rest(events);
  while (!rest.empty()) {
    const auto bar = rest.find('|');
    if (rest.substr(0, bar) == f) return;
    if (bar == std::string_view::npos) break;
    rest.remove_prefix(bar + 1);
  }
  if (!events.empty()) events += '|';
  events += f;
}

template <typename T>
const T* active_entry(const std::vector<T>& v, double t) {
  const T* cur = nullptr;
  for (const auto& e : v) {
    if (e.t <= t + 1e-12) cur = &e;
  }
  return cur;
}

long ratio(double num, double den) { return std::lround(num / den); }

class Runner {
public:
  Runner(const Scenario& sc, const VehicleConfig& cfg)
      : sc_(sc), cfg_(cfg), p_(cfg.params), aerial_ctrl_(p_, cfg.gains), ground_ctrl_(p_, cfg.gains) {}

  SimLog run() {
    init();
    const long n_steps = std::lround(sc_.duration / sc_.dt_plant);
    const long control_every = ratio(sc_.dt_control, sc_.dt_plant);
    const long rate_every = ratio(1.0 / cfg_.gains.rate_loop_hz, sc_.dt_control);
    const long att_every = ratio(1.0 / cfg_.gains.attitude_loop_hz, sc_.dt_control);
    const long ground_every = ratio(1.0 / cfg_.gains.ground_loop_hz, sc_.dt_control);
    const double rate_dt = 1.0 / cfg_.gains.rate_loop_hz;
    const double ground_dt = 1.0 / cfg_.gains.ground_loop_hz;

    for (long k = 0; k <= n_steps; ++k) {
      const double t = static_cast<double>(k) * sc_.dt_plant;

      const Mode scheduled = sc_.mode_at(t);
      if (scheduled != mode_ && !switch_mode(scheduled)) {
        terminate(t, events::kTransitionRefused);
        break;
      }
      apply_disturbances(t);

      bool logged = false;
      try {
        if (k % control_every == 0) {
          const long tick = k / control_every;
          if (mode_ == Mode::Aerial) {
            if (tick % rate_every == 0) {
              const auto sp = attitude_setpoint(t);
              aerial_cmd_ = aerial_ctrl_.update(sp, body_, tick % att_every == 0, rate_dt);
              if (aerial_ctrl_.last_saturation().any()) add_event(pending_, events::kSaturation);
            }
          } else if (tick % ground_every == 0) {
            wheel_cmd_ = ground_ctrl_.update(ground_setpoint(t), ground_, ground_dt);
          }
        }

        if (k % sc_.log_every == 0) {
          log_row(t);
          logged = true;
        }
        if (k == n_steps) break;
        step_plant();
      } catch (const FallenOver&) {
        fail(t, logged, events::kFall);
        break;
      } catch (const SimulationDiverged&) {
        fail(t, logged, events::kDiverged);
        break;
      } catch (const InvalidInput&) {
        // A controller fed a non-finite state ends up here.
        fail(t, logged, events::kDiverged);
        break;
      }
    }
    return std::move(log_);
  }

private:
  void init() {
    mode_ = sc_.mode_schedule.front().mode;
    const auto& ic = sc_.initial;
    if (mode_ == Mode::Aerial) {
      body_.pos = ic.position;
      body_.vel = ic.velocity;
      body_.q = quat_from_euler(ic.attitude);
      body_.omega_b = ic.omega;
      if (ic.trim) {
        const auto sp = attitude_setpoint(0.0);
        if (sp.f_d > 0.0) {
          const auto cmd = mixer_inverse(Vec3::Zero(), sp.f_d, p_).command;
          act_ = {cmd.theta1_cmd, cmd.theta2_cmd, cmd.f1_cmd, cmd.f2_cmd};
          aerial_cmd_ = cmd;
        }
      }
      ground_altitude_ = ic.position.z();
    } else {
      ground_.x = ic.position.x();
      ground_.y = ic.position.y();
      ground_.gamma = ic.attitude.kappa;
      ground_.delta = ic.delta;
      ground_.delta_dot = ic.delta_dot;
      ground_.v = ic.v;
      ground_.gamma_dot = ic.yaw_rate;
      ground_altitude_ = ic.position.z();
    }
  }

  AttitudeSetpoint attitude_setpoint(double t) const {
    AttitudeSetpoint sp;
    sp.f_d = p_.mass * p_.gravity;
    if (const auto* e = active_entry(sc_.attitude_setpoints, t)) {
      sp.q_d = quat_from_euler(e->euler);
      if (e->thrust_n) sp.f_d = *e->thrust_n;
    }
    return sp;
  }

  GroundSetpoint ground_setpoint(double t) const {
    const auto* e = active_entry(sc_.ground_setpoints, t);
    return e ? e->sp : GroundSetpoint{};
  }

  bool switch_mode(Mode to) {
    if (to == Mode::Aerial) {
      body_ = aerial_from_ground(ground_, ground_altitude_);
      aerial_ctrl_.reset();
    } else {
      if (!landing_permitted(body_)) return false;
      ground_ = ground_from_aerial(body_);
      ground_altitude_ = body_.pos.z();
      ground_ctrl_.reset();
    }
    act_ = {};
    aerial_cmd_ = {};
    wheel_cmd_ = {};
    mode_ = to;
    add_event(pending_, events::kTransition);
    return true;
  }

  void apply_disturbances(double t) {
    while (next_disturbance_ < sc_.disturbances.size() &&
           sc_.disturbances[next_disturbance_].t <= t + 1e-12) {
      const auto& d = sc_.disturbances[next_disturbance_++];
      if (d.kind == DisturbanceKind::TorqueImpulse && mode_ == Mode::Aerial) {
        body_.omega_b += p_.inertia.ldlt().solve(d.value);
        add_event(pending_, events::kImpulse);
      } else if (d.kind == DisturbanceKind::PitchKick && mode_ == Mode::Ground) {
        ground_.delta_dot += d.value.x();
        add_event(pending_, events::kImpulse);
      }
    }
  }

  void step_plant() {
    const double dt = sc_.dt_plant;
    if (mode_ == Mode::Aerial) {
      act_ = actuator_step(act_, aerial_cmd_, dt, p_);
      body_ = step_rk4(body_, act_, dt, p_);
    } else {
      const auto torques = wheel_velocity_tracking(ground_, wheel_cmd_, p_);
      ground_ = step_twip_rk4(ground_, torques.wheel1, torques.wheel2, dt, p_);
    }
  }

  LogRow make_row(double t) const {
    LogRow r;
    r.t = t;
    r.mode = mode_;
    RigidBodyState body;
    GroundState ground;
    if (mode_ == Mode::Aerial) {
      body = body_;
      ground = ground_from_aerial(body_);
      r.theta1 = act_.theta1;
      r.theta2 = act_.theta2;
      r.f1 = act_.f1;
      r.f2 = act_.f2;
    } else {
      ground = ground_;
      body = aerial_from_ground(ground_, ground_altitude_);
      r.w_whl1 = wheel_cmd_.omega_whl1;
      r.w_whl2 = wheel_cmd_.omega_whl2;
    }
    r.pos = body.pos;
    r.vel = body.vel;
    r.q = body.q;
    r.omega = body.omega_b;
    r.delta = ground.delta;
    r.v_fwd = ground.v;
    r.gamma = ground.gamma;
    r.gamma_dot = ground.gamma_dot;
    r.power_w = instantaneous_power(mode_, mode_ == Mode::Aerial ? act_ : ActuatorState{}, p_,
                                    cfg_.power);
    return r;
  }

  void log_row(double t) {
    LogRow r = make_row(t);
    r.event = std::move(pending_);
    pending_.clear();
    if (!r.all_finite()) throw SimulationDiverged("non-finite log row");
    log_.rows.push_back(std::move(r));
  }

  void terminate(double t, const char* flag) {
    log_.terminated = true;
    log_.terminal_event = flag;
    if (!log_.rows.empty() && log_.rows.back().t == t) {
      add_event(log_.rows.back().event, flag);
      return;
    }
    LogRow r = make_row(t);
    r.event = std::move(pending_);
    pending_.clear();
    add_event(r.event, flag);
    if (r.all_finite()) {
      log_.rows.push_back(std::move(r));
    } else if (!log_.rows.empty()) {
      add_event(log_.rows.back().event, flag);
    }
  }

  // The row at t, if any, holds the last finite state.
  void fail(double t, bool logged, const char* flag) {
    if (!logged) {
      terminate(t, flag);
      return;
    }
    log_.terminated = true;
    log_.terminal_event = flag;
    if (!log_.rows.empty()) add_event(log_.rows.back().event, flag);
  }

  const Scenario& sc_;
  const VehicleConfig& cfg_;
  const VehicleParams& p_;
  AerialController aerial_ctrl_;
  GroundController ground_ctrl_;

  Mode mode_{Mode::Aerial};
  RigidBodyState body_;
  ActuatorState act_;
  ActuatorCommand aerial_cmd_;
  GroundState ground_;
  WheelCommand wheel_cmd_;
  double ground_altitude_{0.0};
  std::size_t next_disturbance_{0};
  std::string pending_;
  SimLog log_;
};

}  // namespace

SimLog run_scenario(const Scenario& sc, const VehicleConfig& cfg) {
  validate(cfg);
  validate_scenario(sc, cfg);
  return Runner(sc, cfg).run();
}

}  // namespace wheelrotor
