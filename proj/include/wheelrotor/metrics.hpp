#pragma once

#include <string>

#include <json.hpp>

#include "wheelrotor/aerial_plant.hpp"
#include "wheelrotor/sim_log.hpp"
#include "wheelrotor/vehicle_config.hpp"

namespace wheelrotor {

struct EnergyReport {
  double p_aerial{0.0};        // W, mean over aerial samples (model value if none)
  double p_ground{0.0};        // W, mean over ground samples (model value if none)
  double efficiency_pct{0.0};  // (1 - p_ground / p_aerial) * 100
  double energy_wh{0.0};       // trapezoidal integral of power over the log
  double aerial_time_s{0.0};
  double ground_time_s{0.0};
};

struct NoiseReport {
  double avg_ambient_db{0.0};
  double avg_ground_db{0.0};
  double avg_aerial_db{0.0};
  double ground_vs_aerial_reduction_pct{0.0};
  double ground_vs_ambient_increase_pct{0.0};
};

inline constexpr double kMinMeasurableDb = 30.0;
inline constexpr double kMaxMeasurableDb = 130.0;

/// (1 - p_g / p_a) * 100. Throws InvalidInput unless p_a > 0 and p_g >= 0.
double power_efficiency(double p_a, double p_g);

/// Percentages on raw dB values. Throws InvalidInput outside [30, 130] dB.
NoiseReport noise_percentages(double ambient_db, double ground_db, double aerial_db);

/// Instantaneous electrical power for one sample.
double instantaneous_power(Mode mode, const ActuatorState& act, const VehicleParams& p,
                           const PowerModel& pm);

/// Throws InvalidInput on an empty log.
EnergyReport integrate_energy(const SimLog& log, const PowerModel& pm);

/// Rounds for presentation only.
double round_to(double value, int decimals);
std::string format_percent(double pct);

nlohmann::json to_json(const EnergyReport& r);
nlohmann::json to_json(const NoiseReport& r);
std::string to_text(const EnergyReport& r);
std::string to_text(const NoiseReport& r);

}  // namespace wheelrotor
