#include "wheelrotor/metrics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "wheelrotor/errors.hpp"

namespace wheelrotor {

double power_efficiency(double p_a, double p_g) {
  if (!(p_a > 0.0) || !std::isfinite(p_a)) throw InvalidInput("aerial power must be > 0");
  if (!(p_g >= 0.0) || !std::isfinite(p_g)) throw InvalidInput("ground power must be >= 0");
  return (1.0 - p_g / p_a) * 100.0;
}

NoiseReport noise_percentages(double ambient_db, double ground_db, double aerial_db) {
  auto check = [](double v, const char* name) {
    if (!(v >= kMinMeasurableDb && v <= kMaxMeasurableDb)) {
      throw InvalidInput(fmt::format("{} level {} dB is outside the instrument range [{}, {}] dB",
                                     name, v, kMinMeasurableDb, kMaxMeasurableDb));
    }
  };
  check(ambient_db, "ambient");
  check(ground_db, "ground");
  check(aerial_db, "aerial");

  NoiseReport r;
  r.avg_ambient_db = ambient_db;
  r.avg_ground_db = ground_db;
  r.avg_aerial_db = aerial_db;
  r.ground_vs_aerial_reduction_pct = (aerial_db - ground_db) / aerial_db * 100.0;
  r.ground_vs_ambient_increase_pct = (ground_db - ambient_db) / ambient_db * 100.0;
  return r;
}

double instantaneous_power(Mode mode, const ActuatorState& act, const VehicleParams& p,
                           const PowerModel& pm) {
  if (mode == Mode::Ground) return pm.ground_power_w;
  if (!pm.effort_scaled) return pm.aerial_power_w;
  const double weight = p.mass * p.gravity;
  if (!(weight > 0.0)) return pm.aerial_power_w;
  return pm.aerial_power_w * std::pow((act.f1 + act.f2) / weight, 1.5);
}

EnergyReport integrate_energy(const SimLog& log, const PowerModel& pm) {
  if (log.rows.empty()) throw InvalidInput("integrate_energy: log has no data");
  const auto& rows = log.rows;

  EnergyReport r;
  double joules = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double dt = rows[i].t - rows[i - 1].t;
    joules += 0.5 * (rows[i].power_w + rows[i - 1].power_w) * dt;
    // Interval time is attributed to the mode at its start.
    (rows[i - 1].mode == Mode::Aerial ? r.aerial_time_s : r.ground_time_s) += dt;
  }
  r.energy_wh = joules / 3600.0;

  double sum_a = 0.0, sum_g = 0.0;
  std::size_t n_a = 0, n_g = 0;
  for (const auto& row : rows) {
    if (row.mode == Mode::Aerial) {
      sum_a += row.power_w;
      ++n_a;
    } else {
      sum_g += row.power_w;
      ++n_g;
    }
  }
  r.p_aerial = n_a ? sum_a / static_cast<double>(n_a) : pm.aerial_power_w;
  r.p_ground = n_g ? sum_g / static_cast<double>(n_g) : pm.ground_power_w;
  r.efficiency_pct = r.p_aerial > 0.0 ? power_efficiency(r.p_aerial, r.p_ground) : 0.0;
  return r;
}

double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

std::string format_percent(double pct) { return fmt::format("{:.2f}%", round_to(pct, 2)); }

nlohmann::json to_json(const EnergyReport& r) {
  return {{"p_aerial_w", r.p_aerial},         {"p_ground_w", r.p_ground},
          {"efficiency_pct", r.efficiency_pct}, {"energy_wh", r.energy_wh},
          {"aerial_time_s", r.aerial_time_s},   {"ground_time_s", r.ground_time_s}};
}

nlohmann::json to_json(const NoiseReport& r) {
  return {{"avg_ambient_db", r.avg_ambient_db},
          {"avg_ground_db", r.avg_ground_db},
          {"avg_aerial_db", r.avg_aerial_db},
          {"ground_vs_aerial_reduction_pct", r.ground_vs_aerial_reduction_pct},
          {"ground_vs_ambient_increase_pct", r.ground_vs_ambient_increase_pct}};
}

std::string to_text(const EnergyReport& r) {
  return fmt::format(
      "aerial power: {:.2f} W\nground power: {:.2f} W\nefficiency: {}\nenergy: {:.6f} Wh\n"
      "aerial time: {:.3f} s\nground time: {:.3f} s\n",
      r.p_aerial, r.p_ground, format_percent(r.efficiency_pct), r.energy_wh, r.aerial_time_s,
      r.ground_time_s);
}

std::string to_text(const NoiseReport& r) {
  return fmt::format("ground vs aerial noise reduction: {}\nground vs ambient noise increase: {}\n",
                     format_percent(r.ground_vs_aerial_reduction_pct),
                     format_percent(r.ground_vs_ambient_increase_pct));
}

}  // namespace wheelrotor
