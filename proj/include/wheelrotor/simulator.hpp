#pragma once

#include "wheelrotor/aerial_plant.hpp"
#include "wheelrotor/ground_plant.hpp"
#include "wheelrotor/scenario.hpp"
#include "wheelrotor/sim_log.hpp"
#include "wheelrotor/vehicle_config.hpp"

namespace wheelrotor {

// Aerial -> ground hand-off is refused unless the vehicle is nearly level and
// not descending fast.
inline constexpr double kLandingMaxRoll = deg2rad(5.0);
inline constexpr double kLandingMaxDescentRate = 0.2;  // m/s, NED +z

namespace events {
inline constexpr const char* kTransition = "transition";
inline constexpr const char* kTransitionRefused = "transition_refused";
inline constexpr const char* kImpulse = "impulse";
inline constexpr const char* kSaturation = "saturation";
inline constexpr const char* kFall = "fall";
inline constexpr const char* kDiverged = "diverged";
}  // namespace events

/// Seeds a 6-DOF state from a planar one: heading and pitch become yaw and
/// pitch, roll is zero, and body rates follow from the Euler rates.
RigidBodyState aerial_from_ground(const GroundState& g, double altitude);

/// Projects a 6-DOF state onto the planar model (pitch delta = Euler pitch).
GroundState ground_from_aerial(const RigidBodyState& s);

bool landing_permitted(const RigidBodyState& s);

/// Runs a scenario to completion or to the first terminal event. Deterministic:
/// identical inputs give bit-identical logs.
SimLog run_scenario(const Scenario& sc, const VehicleConfig& cfg);

}  // namespace wheelrotor
