#include "wheelrotor/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "wheelrotor/errors.hpp"

namespace wheelrotor {

using json = nlohmann::json;

namespace {

class Parser {
public:
  std::vector<ValidationError::Issue> issues;

  void fail(const std::string& field, const std::string& msg) { issues.push_back({field, msg}); }

  std::optional<double> number(const json& obj, const std::string& key, const std::string& path,
                               bool required) {
    if (!obj.contains(key)) {
      if (required) fail(path + key, "missing");
      return std::nullopt;
    }
    const auto& v = obj.at(key);
    if (!v.is_number()) {
      fail(path + key, "expected a number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<Vec3> vec3(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (!v.is_array() || v.size() != 3 ||
        !std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); })) {
      fail(path + key, "expected an array of 3 numbers");
      return std::nullopt;
    }
    return Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
  }

  void only_keys(const json& obj, std::initializer_list<const char*> allowed,
                 const std::string& path) {
    for (const auto& [k, _] : obj.items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&k = k](const char* a) { return k == a; })) {
        fail(path + k, "unknown key");
      }
    }
  }

  const json* array(const json& obj, const std::string& key, bool required) {
    if (!obj.contains(key)) {
      if (required) fail(key, "missing");
      return nullptr;
    }
    if (!obj.at(key).is_array()) {
      fail(key, "expected an array");
      return nullptr;
    }
    return &obj.at(key);
  }
};

// Euler triplets in files are [roll, pitch, yaw] in degrees.
EulerZYX euler_from_deg(const Vec3& rpy) {
  return {deg2rad(rpy.z()), deg2rad(rpy.y()), deg2rad(rpy.x())};
}

template <typename T>
bool sorted_by_time(const std::vector<T>& v) {
  return std::is_sorted(v.begin(), v.end(), [](const T& a, const T& b) { return a.t < b.t; });
}

bool is_integer_ratio(double num, double den) {
  const double r = num / den;
  return r >= 1.0 - 1e-9 && std::abs(r - std::round(r)) <= 1e-6 * std::max(1.0, r);
}

}  // namespace

Mode Scenario::mode_at(double t) const {
  Mode m = mode_schedule.empty() ? Mode::Aerial : mode_schedule.front().mode;
  for (const auto& e : mode_schedule) {
    if (e.t <= t + 1e-12) m = e.mode;
  }
  return m;
}

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError(std::vector<ValidationError::Issue>{{"<root>", "scenario must be a JSON object"}});
  Parser ps;
  Scenario sc;
  ps.only_keys(doc,
               {"name", "duration", "dt_plant", "dt_control", "log_every", "initial",
                "mode_schedule", "attitude_setpoints", "ground_setpoints", "disturbances",
                "description"},
               "");

  if (doc.contains("name") && doc["name"].is_string()) {
    sc.name = doc["name"].get<std::string>();
  } else {
    ps.fail("name", "missing or not a string");
  }
  sc.duration = ps.number(doc, "duration", "", true).value_or(0.0);
  sc.dt_plant = ps.number(doc, "dt_plant", "", false).value_or(sc.dt_plant);
  sc.dt_control = ps.number(doc, "dt_control", "", false).value_or(sc.dt_control);
  if (doc.contains("log_every")) {
    if (doc["log_every"].is_number_integer() && doc["log_every"].get<int>() >= 1) {
      sc.log_every = doc["log_every"].get<int>();
    } else {
      ps.fail("log_every", "expected an integer >= 1");
    }
  }

  if (doc.contains("initial")) {
    const auto& in = doc["initial"];
    if (!in.is_object()) {
      ps.fail("initial", "expected an object");
    } else {
      const std::string p = "initial.";
      ps.only_keys(in,
                   {"position", "velocity", "euler_deg", "omega", "delta_deg", "delta_dot", "v",
                    "yaw_rate", "trim"},
                   p);
      auto& ic = sc.initial;
      ic.position = ps.vec3(in, "position", p).value_or(ic.position);
      ic.velocity = ps.vec3(in, "velocity", p).value_or(ic.velocity);
      if (auto e = ps.vec3(in, "euler_deg", p)) ic.attitude = euler_from_deg(*e);
      ic.omega = ps.vec3(in, "omega", p).value_or(ic.omega);
      ic.delta = deg2rad(ps.number(in, "delta_deg", p, false).value_or(0.0));
      ic.delta_dot = ps.number(in, "delta_dot", p, false).value_or(0.0);
      ic.v = ps.number(in, "v", p, false).value_or(0.0);
      ic.yaw_rate = ps.number(in, "yaw_rate", p, false).value_or(0.0);
      if (in.contains("trim")) {
        if (in["trim"].is_boolean()) {
          ic.trim = in["trim"].get<bool>();
        } else {
          ps.fail(p + "trim", "expected true or false");
        }
      }
    }
  }

  if (const json* arr = ps.array(doc, "mode_schedule", true)) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& e = (*arr)[i];
      const std::string p = "mode_schedule[" + std::to_string(i) + "].";
      if (!e.is_object()) {
        ps.fail(p, "expected an object");
        continue;
      }
      ps.only_keys(e, {"t", "mode"}, p);
      ModeEntry m;
      m.t = ps.number(e, "t", p, true).value_or(0.0);
      try {
        m.mode = mode_from_string(e.value("mode", std::string{}));
      } catch (const InvalidInput&) {
        ps.fail(p + "mode", "expected \"aerial\" or \"ground\"");
      }
      sc.mode_schedule.push_back(m);
    }
  }

  if (const json* arr = ps.array(doc, "attitude_setpoints", false)) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& e = (*arr)[i];
      const std::string p = "attitude_setpoints[" + std::to_string(i) + "].";
      if (!e.is_object()) {
        ps.fail(p, "expected an object");
        continue;
      }
      ps.only_keys(e, {"t", "euler_deg", "thrust_n"}, p);
      TimedAttitudeSetpoint s;
      s.t = ps.number(e, "t", p, true).value_or(0.0);
      if (auto rpy = ps.vec3(e, "euler_deg", p)) s.euler = euler_from_deg(*rpy);
      s.thrust_n = ps.number(e, "thrust_n", p, false);
      sc.attitude_setpoints.push_back(s);
    }
  }

  if (const json* arr = ps.array(doc, "ground_setpoints", false)) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& e = (*arr)[i];
      const std::string p = "ground_setpoints[" + std::to_string(i) + "].";
      if (!e.is_object()) {
        ps.fail(p, "expected an object");
        continue;
      }
      ps.only_keys(e, {"t", "v", "yaw_rate"}, p);
      TimedGroundSetpoint s;
      s.t = ps.number(e, "t", p, true).value_or(0.0);
      s.sp.v_d = ps.number(e, "v", p, false).value_or(0.0);
      s.sp.omega_gamma_d = ps.number(e, "yaw_rate", p, false).value_or(0.0);
      sc.ground_setpoints.push_back(s);
    }
  }

  if (const json* arr = ps.array(doc, "disturbances", false)) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& e = (*arr)[i];
      const std::string p = "disturbances[" + std::to_string(i) + "].";
      if (!e.is_object()) {
        ps.fail(p, "expected an object");
        continue;
      }
      ps.only_keys(e, {"t", "kind", "value"}, p);
      Disturbance d;
      d.t = ps.number(e, "t", p, true).value_or(0.0);
      const std::string kind = e.value("kind", std::string{});
      if (kind == "torque_impulse") {
        d.kind = DisturbanceKind::TorqueImpulse;
        if (auto v = ps.vec3(e, "value", p)) {
          d.value = *v;
        } else if (!e.contains("value")) {
          ps.fail(p + "value", "missing");
        }
      } else if (kind == "pitch_kick") {
        d.kind = DisturbanceKind::PitchKick;
        d.value.x() = ps.number(e, "value", p, true).value_or(0.0);
      } else {
        ps.fail(p + "kind", "expected \"torque_impulse\" or \"pitch_kick\"");
      }
      sc.disturbances.push_back(d);
    }
  }

  // Structural invariants.
  if (!(sc.duration > 0.0) || !std::isfinite(sc.duration)) ps.fail("duration", "must be > 0");
  if (!(sc.dt_plant > 0.0)) ps.fail("dt_plant", "must be > 0");
  if (!(sc.dt_control > 0.0)) {
    ps.fail("dt_control", "must be > 0");
  } else if (sc.dt_plant > 0.0 && !is_integer_ratio(sc.dt_control, sc.dt_plant)) {
    ps.fail("dt_control", "must be an integer multiple of dt_plant");
  }
  if (sc.mode_schedule.empty()) {
    ps.fail("mode_schedule", "must contain at least one entry");
  } else if (sc.mode_schedule.front().t != 0.0) {
    ps.fail("mode_schedule[0].t", "first entry must start at t = 0");
  }
  if (!sorted_by_time(sc.mode_schedule)) ps.fail("mode_schedule", "must be sorted by time");
  if (!sorted_by_time(sc.attitude_setpoints)) ps.fail("attitude_setpoints", "must be sorted by time");
  if (!sorted_by_time(sc.ground_setpoints)) ps.fail("ground_setpoints", "must be sorted by time");
  if (!sorted_by_time(sc.disturbances)) ps.fail("disturbances", "must be sorted by time");
  for (std::size_t i = 0; i < sc.attitude_setpoints.size(); ++i) {
    const auto& s = sc.attitude_setpoints[i];
    if (!(std::abs(s.euler.omega) < kPi / 2.0)) {
      ps.fail("attitude_setpoints[" + std::to_string(i) + "].euler_deg", "pitch must be inside (-90, 90)");
    }
    if (s.thrust_n && !(*s.thrust_n >= 0.0)) {
      ps.fail("attitude_setpoints[" + std::to_string(i) + "].thrust_n", "must be >= 0");
    }
  }
  if (!(std::abs(sc.initial.attitude.omega) < kPi / 2.0)) {
    ps.fail("initial.euler_deg", "pitch must be inside (-90, 90)");
  }
  if (!(std::abs(sc.initial.delta) < kPi / 2.0)) ps.fail("initial.delta_deg", "must be inside (-90, 90)");

  if (!ps.issues.empty()) throw ValidationError(std::move(ps.issues));
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::vector<ValidationError::Issue>{{"<parse>", path.string() + ": " + e.what()}});
  }
  return scenario_from_json(doc);
}

void validate_scenario(const Scenario& sc, const VehicleConfig& cfg) {
  std::vector<ValidationError::Issue> issues;
  const auto& g = cfg.gains;
  auto divides = [&](double hz, const char* field) {
    if (!is_integer_ratio(1.0 / hz, sc.dt_control)) {
      issues.push_back({field, "loop period must be an integer multiple of the scenario dt_control"});
    }
  };
  divides(g.rate_loop_hz, "rate_loop_hz");
  divides(g.attitude_loop_hz, "attitude_loop_hz");
  divides(g.ground_loop_hz, "ground_loop_hz");

  for (std::size_t i = 0; i < sc.ground_setpoints.size(); ++i) {
    const auto& s = sc.ground_setpoints[i].sp;
    const std::string p = "ground_setpoints[" + std::to_string(i) + "].";
    if (!(std::abs(s.v_d) <= g.max_ground_speed)) issues.push_back({p + "v", "exceeds max_ground_speed"});
    if (!(std::abs(s.omega_gamma_d) <= g.max_yaw_rate)) {
      issues.push_back({p + "yaw_rate", "exceeds max_yaw_rate"});
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

std::filesystem::path shipped_scenario_path(const std::string& name) {
  return std::filesystem::path(WHEELROTOR_DATA_DIR) / "scenarios" / (name + ".json");
}

const std::vector<std::string>& shipped_scenario_names() {
  static const std::vector<std::string> names{"hover", "attitude_step_20deg", "ground_balance_5deg",
                                              "ground_circle_1m", "mixed_mission"};
  return names;
}

}  // namespace wheelrotor
