#include "wheelrotor/vehicle_config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <Eigen/Cholesky>

#include "wheelrotor/errors.hpp"

namespace wheelrotor {

namespace {

std::string join_issues(const std::vector<ValidationError::Issue>& issues) {
  std::ostringstream os;
  os << "invalid configuration:";
  for (const auto& i : issues) os << "\n  " << i.field << ": " << i.message;
  return os.str();
}

using json = nlohmann::json;

class Reader {
public:
  explicit Reader(std::vector<ValidationError::Issue>& issues) : issues_(issues) {}

  void number(const std::string& key, const json& v, double& out) {
    if (!v.is_number()) return fail(key, "expected a number");
    out = v.get<double>();
  }

  void boolean(const std::string& key, const json& v, bool& out) {
    if (!v.is_boolean()) return fail(key, "expected true or false");
    out = v.get<bool>();
  }

  void vec3(const std::string& key, const json& v, Vec3& out) {
    if (!v.is_array() || v.size() != 3) return fail(key, "expected an array of 3 numbers");
    for (int i = 0; i < 3; ++i) {
      if (!v[i].is_number()) return fail(key, "expected an array of 3 numbers");
      out[i] = v[i].get<double>();
    }
  }

  void mat3(const std::string& key, const json& v, Mat3& out) {
    if (!v.is_array() || v.size() != 3) return fail(key, "expected a 3x3 nested array");
    for (int r = 0; r < 3; ++r) {
      if (!v[r].is_array() || v[r].size() != 3) return fail(key, "expected a 3x3 nested array");
      for (int c = 0; c < 3; ++c) {
        if (!v[r][c].is_number()) return fail(key, "expected a 3x3 nested array");
        out(r, c) = v[r][c].get<double>();
      }
    }
  }

  void fail(const std::string& key, const std::string& msg) { issues_.push_back({key, msg}); }

private:
  std::vector<ValidationError::Issue>& issues_;
};

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json to_json(const Mat3& m) {
  json out = json::array();
  for (int r = 0; r < 3; ++r) out.push_back(json::array({m(r, 0), m(r, 1), m(r, 2)}));
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<Issue> issues)
    : Error(join_issues(issues)), issues_(std::move(issues)) {}

VehicleConfig config_from_json(const json& doc) {
  if (!doc.is_object()) {
    throw ValidationError(std::vector<ValidationError::Issue>{{"<root>", "config must be a JSON object"}});
  }
  VehicleConfig cfg;
  auto& p = cfg.params;
  auto& g = cfg.gains;
  auto& pw = cfg.power;
  std::vector<ValidationError::Issue> issues;
  Reader rd(issues);

  using Setter = std::function<void(const std::string&, const json&)>;
  auto num = [&rd](double& field) -> Setter {
    return [&rd, &field](const std::string& k, const json& v) { rd.number(k, v, field); };
  };
  auto vec = [&rd](Vec3& field) -> Setter {
    return [&rd, &field](const std::string& k, const json& v) { rd.vec3(k, v, field); };
  };

  const std::map<std::string, Setter> setters{
      {"mass", num(p.mass)},
      {"inertia", [&](const std::string& k, const json& v) { rd.mat3(k, v, p.inertia); }},
      {"rotor_separation", num(p.rotor_separation)},
      {"tilt_axis_offset", num(p.tilt_axis_offset)},
      {"wheel_radius", num(p.wheel_radius)},
      {"gear_ratio", num(p.gear_ratio)},
      {"max_thrust_per_rotor", num(p.max_thrust_per_rotor)},
      {"max_tilt", num(p.max_tilt)},
      {"servo_time_constant", num(p.servo_time_constant)},
      {"rotor_time_constant", num(p.rotor_time_constant)},
      {"gravity", num(p.gravity)},
      {"wheel_mass", num(p.wheel_mass)},
      {"wheel_inertia", num(p.wheel_inertia)},
      {"com_height", num(p.com_height)},
      {"wheel_friction", num(p.wheel_friction)},
      {"wheel_torque_limit", num(p.wheel_torque_limit)},
      {"wheel_servo_gain", num(p.wheel_servo_gain)},
      {"max_motor_speed", num(p.max_motor_speed)},
      {"kp_att", vec(g.kp_att)},
      {"kp_rt", vec(g.kp_rt)},
      {"ki_rt", vec(g.ki_rt)},
      {"kd_rt", vec(g.kd_rt)},
      {"rate_loop_hz", num(g.rate_loop_hz)},
      {"attitude_loop_hz", num(g.attitude_loop_hz)},
      {"kv_whl", num(g.kv_whl)},
      {"kp_whl", num(g.kp_whl)},
      {"ki_whl", num(g.ki_whl)},
      {"kd_whl", num(g.kd_whl)},
      {"kgamma_whl", num(g.kgamma_whl)},
      {"ground_loop_hz", num(g.ground_loop_hz)},
      {"pitch_rate_filter_hz", num(g.pitch_rate_filter_hz)},
      {"max_pitch_setpoint", num(g.max_pitch_setpoint)},
      {"max_ground_speed", num(g.max_ground_speed)},
      {"max_yaw_rate", num(g.max_yaw_rate)},
      {"ground_integral_limit", num(g.ground_integral_limit)},
      {"aerial_power_w", num(pw.aerial_power_w)},
      {"ground_power_w", num(pw.ground_power_w)},
      {"per_kg_aerial", num(pw.per_kg_aerial)},
      {"per_kg_ground", num(pw.per_kg_ground)},
      {"effort_scaled", [&](const std::string& k, const json& v) { rd.boolean(k, v, pw.effort_scaled); }},
  };

  for (const auto& [key, value] : doc.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) {
      issues.push_back({key, "unknown key"});
      continue;
    }
    it->second(key, value);
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));

  validate(cfg);
  return cfg;
}

json config_to_json(const VehicleConfig& cfg) {
  const auto& p = cfg.params;
  const auto& g = cfg.gains;
  const auto& pw = cfg.power;
  return json{
      {"mass", p.mass},
      {"inertia", to_json(p.inertia)},
      {"rotor_separation", p.rotor_separation},
      {"tilt_axis_offset", p.tilt_axis_offset},
      {"wheel_radius", p.wheel_radius},
      {"gear_ratio", p.gear_ratio},
      {"max_thrust_per_rotor", p.max_thrust_per_rotor},
      {"max_tilt", p.max_tilt},
      {"servo_time_constant", p.servo_time_constant},
      {"rotor_time_constant", p.rotor_time_constant},
      {"gravity", p.gravity},
      {"wheel_mass", p.wheel_mass},
      {"wheel_inertia", p.wheel_inertia},
      {"com_height", p.com_height},
      {"wheel_friction", p.wheel_friction},
      {"wheel_torque_limit", p.wheel_torque_limit},
      {"wheel_servo_gain", p.wheel_servo_gain},
      {"max_motor_speed", p.max_motor_speed},
      {"kp_att", to_json(g.kp_att)},
      {"kp_rt", to_json(g.kp_rt)},
      {"ki_rt", to_json(g.ki_rt)},
      {"kd_rt", to_json(g.kd_rt)},
      {"rate_loop_hz", g.rate_loop_hz},
      {"attitude_loop_hz", g.attitude_loop_hz},
      {"kv_whl", g.kv_whl},
      {"kp_whl", g.kp_whl},
      {"ki_whl", g.ki_whl},
      {"kd_whl", g.kd_whl},
      {"kgamma_whl", g.kgamma_whl},
      {"ground_loop_hz", g.ground_loop_hz},
      {"pitch_rate_filter_hz", g.pitch_rate_filter_hz},
      {"max_pitch_setpoint", g.max_pitch_setpoint},
      {"max_ground_speed", g.max_ground_speed},
      {"max_yaw_rate", g.max_yaw_rate},
      {"ground_integral_limit", g.ground_integral_limit},
      {"aerial_power_w", pw.aerial_power_w},
      {"ground_power_w", pw.ground_power_w},
      {"per_kg_aerial", pw.per_kg_aerial},
      {"per_kg_ground", pw.per_kg_ground},
      {"effort_scaled", pw.effort_scaled},
  };
}

void validate(const VehicleConfig& cfg) {
  std::vector<ValidationError::Issue> issues;
  auto check = [&issues](bool ok, const char* field, const char* msg) {
    if (!ok) issues.push_back({field, msg});
  };
  auto finite = [](double v) { return std::isfinite(v); };
  auto positive = [&](double v) { return finite(v) && v > 0.0; };
  auto non_negative = [&](double v) { return finite(v) && v >= 0.0; };

  const auto& p = cfg.params;
  check(positive(p.mass), "mass", "must be > 0");
  {
    const Mat3& j = p.inertia;
    bool ok = j.allFinite() && (j - j.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * j.cwiseAbs().maxCoeff();
    if (ok) {
      Eigen::LLT<Mat3> llt(j);
      ok = llt.info() == Eigen::Success;
    }
    check(ok, "inertia", "must be symmetric positive-definite");
  }
  check(positive(p.rotor_separation), "rotor_separation", "must be > 0");
  check(positive(p.tilt_axis_offset), "tilt_axis_offset", "must be > 0");
  check(positive(p.wheel_radius), "wheel_radius", "must be > 0");
  check(positive(p.gear_ratio), "gear_ratio", "must be > 0");
  check(positive(p.max_thrust_per_rotor), "max_thrust_per_rotor", "must be > 0");
  check(finite(p.max_tilt) && p.max_tilt > 0.0 && p.max_tilt < kPi / 2.0, "max_tilt",
        "must lie in (0, pi/2)");
  check(positive(p.servo_time_constant), "servo_time_constant", "must be > 0");
  check(positive(p.rotor_time_constant), "rotor_time_constant", "must be > 0");
  check(non_negative(p.gravity), "gravity", "must be >= 0");
  check(non_negative(p.wheel_mass) && 2.0 * p.wheel_mass < p.mass, "wheel_mass",
        "must be >= 0 and the two wheels lighter than the vehicle");
  check(positive(p.wheel_inertia), "wheel_inertia", "must be > 0");
  check(positive(p.com_height), "com_height", "must be > 0");
  check(non_negative(p.wheel_friction), "wheel_friction", "must be >= 0");
  check(positive(p.wheel_torque_limit), "wheel_torque_limit", "must be > 0");
  check(positive(p.wheel_servo_gain), "wheel_servo_gain", "must be > 0");
  check(positive(p.max_motor_speed), "max_motor_speed", "must be > 0");
  if (positive(p.mass) && non_negative(p.gravity) && positive(p.max_thrust_per_rotor)) {
    check(p.hover_thrust_per_rotor() < p.max_thrust_per_rotor, "max_thrust_per_rotor",
          "must exceed the hover thrust m*g/2");
  }

  const auto& g = cfg.gains;
  check(g.kp_att.allFinite(), "kp_att", "must be finite");
  check(g.kp_rt.allFinite(), "kp_rt", "must be finite");
  check(g.ki_rt.allFinite(), "ki_rt", "must be finite");
  check(g.kd_rt.allFinite(), "kd_rt", "must be finite");
  check(positive(g.rate_loop_hz), "rate_loop_hz", "must be > 0");
  check(positive(g.attitude_loop_hz), "attitude_loop_hz", "must be > 0");
  check(!(g.attitude_loop_hz > g.rate_loop_hz), "attitude_loop_hz",
        "must not exceed rate_loop_hz");
  check(finite(g.kv_whl), "kv_whl", "must be finite");
  check(finite(g.kp_whl), "kp_whl", "must be finite");
  check(finite(g.ki_whl), "ki_whl", "must be finite");
  check(finite(g.kd_whl), "kd_whl", "must be finite");
  check(finite(g.kgamma_whl), "kgamma_whl", "must be finite");
  check(positive(g.ground_loop_hz), "ground_loop_hz", "must be > 0");
  check(positive(g.pitch_rate_filter_hz), "pitch_rate_filter_hz", "must be > 0");
  check(finite(g.max_pitch_setpoint) && g.max_pitch_setpoint > 0.0 && g.max_pitch_setpoint < kPi / 2.0,
        "max_pitch_setpoint", "must lie in (0, pi/2)");
  check(positive(g.max_ground_speed), "max_ground_speed", "must be > 0");
  check(positive(g.max_yaw_rate), "max_yaw_rate", "must be > 0");
  check(non_negative(g.ground_integral_limit), "ground_integral_limit", "must be >= 0");

  const auto& pw = cfg.power;
  check(non_negative(pw.aerial_power_w), "aerial_power_w", "must be >= 0");
  check(non_negative(pw.ground_power_w), "ground_power_w", "must be >= 0");
  check(non_negative(pw.per_kg_aerial), "per_kg_aerial", "must be >= 0");
  check(non_negative(pw.per_kg_ground), "per_kg_ground", "must be >= 0");

  if (!issues.empty()) throw ValidationError(std::move(issues));
}

VehicleConfig load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::vector<ValidationError::Issue>{{"<parse>", path.string() + ": " + e.what()}});
  }
  return config_from_json(doc);
}

void save_params(const VehicleConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config file: " + path.string());
  out << config_to_json(cfg).dump(2) << '\n';
  if (!out) throw IoError("failed writing config file: " + path.string());
}

std::filesystem::path default_config_path() {
  return std::filesystem::path(WHEELROTOR_DATA_DIR) / "config" / "default.json";
}

}  // namespace wheelrotor
