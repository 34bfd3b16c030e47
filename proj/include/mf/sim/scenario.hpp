#pragma once

#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mf/scene/object_model.hpp"
#include "mf/sim/trajectory.hpp"

namespace mf::sim {

enum class TrajectoryType { Static, ConstantTwist, Waypoints, PegInHole };

struct TrajectoryConfig {
  TrajectoryType type = TrajectoryType::Static;
  Posed start_pose;                                  // Static / ConstantTwist
  Twistd twist;                                      // ConstantTwist
  std::vector<std::pair<double, Posed>> waypoints;   // Waypoints
};

struct NoiseConfig {
  double det_trans_sigma = 0.005;  // [m], tag-frame detection noise
  double det_rot_sigma = 0.01;     // [rad]
  double flip_prob = 0.0;          // planar-ambiguity flip probability per sighting
  double vio_trans_sigma = 0.002;  // [m] white pose noise; also [m/s] on the twist
  double vio_rot_sigma = 0.002;    // [rad]; also [rad/s] on the twist
  double vio_bias_walk = 0.001;    // [m/s/sqrt(s)] translation velocity random walk
};

/// Suppresses captures with start <= capture_time < end; empty tag list means
/// every tag.
struct DropoutWindow {
  double start = 0.0;
  double end = 0.0;
  std::vector<int> tags;
};

struct FrustumConfig {
  double half_angle = 35.0 * std::numbers::pi / 180.0;  // cone half-angle about camera +z
  double max_range = 3.0;                               // [m]
};

struct ObjectPlacement {
  scene::ObjectModel model;
  Posed pose;  // T_object^w
};

struct ScenarioConfig {
  double duration = 16.0;
  double detection_rate = 25.0;     // [Hz]
  double vio_rate = 200.0;          // [Hz]
  double processing_delay = 0.0;    // [s] detector latency
  double ap2_slow_factor = 16.0;    // frame thinning + latency scaling for AP2Like
  std::uint64_t seed = 0;
  TrajectoryConfig trajectory;      // helmet camera T_hc^w over time
  std::vector<ObjectPlacement> objects;
  std::vector<DropoutWindow> dropout_windows;
  NoiseConfig noise;
  FrustumConfig frustum;
};

/// Four-tag plate at the world origin used by the peg-in-hole preset and as a
/// ready-made rig for scenarios that don't specify their own objects.
ObjectPlacement defaultPlate();

/// Throws ConfigError naming the offending field.
void validateScenario(const ScenarioConfig& config);

/// Copy with preset expansion applied (peg-in-hole fills in the default plate
/// when no objects are given); validates.
ScenarioConfig expandScenario(const ScenarioConfig& config);

Trajectory buildTrajectory(const ScenarioConfig& config);

ScenarioConfig scenarioFromJson(const nlohmann::json& j);
nlohmann::json scenarioToJson(const ScenarioConfig& config);
ScenarioConfig loadScenario(const std::string& path);
void saveScenario(const ScenarioConfig& config, const std::string& path);

}  // namespace mf::sim
