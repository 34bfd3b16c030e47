#include "mf/sim/scenario.hpp"

#include <cmath>
#include <set>

#include "mf/serialization.hpp"

namespace mf::sim {

using nlohmann::json;

ObjectPlacement defaultPlate() {
  scene::ObjectModel model;
  model.object_id = "plate";
  model.target_tag_id = 0;
  model.tag_layout[0] = Posed::Identity();
  model.tag_layout[1] = Posed(Eigen::Quaterniond::Identity(), {0.06, 0.0, 0.0});
  model.tag_layout[2] = Posed(Eigen::Quaterniond::Identity(), {-0.06, 0.0, 0.0});
  model.tag_layout[3] = Posed(Eigen::Quaterniond::Identity(), {0.0, 0.06, 0.0});
  model.object_from_target = Posed::Identity();
  model.display_mesh_ref = "meshes/plate.obj";
  return {model, Posed::Identity()};
}

namespace {

/// Hand-guided approach onto the plate: slow drift, a vigorous five-second
/// working phase (the usual loss-of-sight window in the standard scenario),
/// then a gentle descent to ~0.3 m above the plate. The camera starts 1.2 m
/// above the origin looking straight down (z_cam = -z_w).
Trajectory pegInHoleTrajectory(double duration) {
  const Posed start(Eigen::Quaterniond(0.0, 0.0, 1.0, 0.0), {0.0, 0.0, 1.2});
  std::vector<Trajectory::SegmentSpec> segs;
  auto add = [&segs](double t0, double vx, double vy, double vz, double wx, double wy,
                     double wz) {
    Twistd tw;
    tw.linear = Eigen::Vector3d(vx, vy, vz);
    tw.angular = Eigen::Vector3d(wx, wy, wz);
    segs.push_back({t0, tw});
  };
  add(0.0, 0.002, -0.002, -0.006, 0.002, -0.002, 0.003);
  add(3.0, 0.060, 0.030, -0.160, 0.025, 0.020, 0.060);
  add(4.0, -0.040, 0.050, -0.140, -0.010, 0.015, -0.030);
  add(5.0, 0.050, -0.040, -0.160, 0.020, -0.025, 0.050);
  add(6.0, -0.050, 0.040, -0.150, 0.025, 0.020, -0.040);
  add(7.0, 0.040, -0.050, -0.140, -0.015, 0.025, 0.060);
  add(8.0, 0.012, -0.010, -0.0165, 0.006, -0.005, 0.009);
  add(12.0, -0.010, 0.012, -0.0165, -0.005, 0.006, -0.007);
  return Trajectory(start, 0.0, std::move(segs), std::max(duration, 16.0));
}

void checkWaypoints(const ScenarioConfig& config) {
  const auto& pts = config.trajectory.waypoints;
  if (pts.size() < 2) {
    throw ConfigError("scenario.trajectory.waypoints: need at least two points");
  }
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i].first > pts[i - 1].first)) {
      throw ConfigError("scenario.trajectory.waypoints: times must be strictly increasing");
    }
  }
  if (pts.front().first > 0.0 || pts.back().first < config.duration) {
    throw ConfigError("scenario.trajectory.waypoints: must cover [0, duration]");
  }
}

}  // namespace

Trajectory buildTrajectory(const ScenarioConfig& config) {
  switch (config.trajectory.type) {
    case TrajectoryType::Static:
      return Trajectory::staticPose(config.trajectory.start_pose, config.duration);
    case TrajectoryType::ConstantTwist:
      return Trajectory::constantTwist(config.trajectory.start_pose, config.trajectory.twist,
                                       config.duration);
    case TrajectoryType::Waypoints:
      checkWaypoints(config);
      return Trajectory::waypoints(config.trajectory.waypoints);
    case TrajectoryType::PegInHole:
      return pegInHoleTrajectory(config.duration);
  }
  throw ConfigError("scenario.trajectory.type: unknown type");
}

void validateScenario(const ScenarioConfig& config) {
  if (!(config.duration > 0.0)) throw ConfigError("scenario.duration: must be > 0");
  if (!(config.detection_rate > 0.0)) throw ConfigError("scenario.detection_rate: must be > 0");
  if (!(config.vio_rate > 0.0)) throw ConfigError("scenario.vio_rate: must be > 0");
  if (config.vio_rate < config.detection_rate) {
    throw ConfigError("scenario.vio_rate: must be >= detection_rate");
  }
  if (config.processing_delay < 0.0) {
    throw ConfigError("scenario.processing_delay: must be >= 0");
  }
  if (config.ap2_slow_factor < 1.0) {
    throw ConfigError("scenario.ap2_slow_factor: must be >= 1");
  }

  if (config.trajectory.type == TrajectoryType::Waypoints) checkWaypoints(config);

  if (config.objects.empty()) {
    throw ConfigError("scenario.objects: at least one placement required"
                      " (the peg_in_hole preset fills in a default plate)");
  }
  std::set<std::string> object_ids;
  std::set<int> tag_ids;
  for (std::size_t i = 0; i < config.objects.size(); ++i) {
    const auto& placement = config.objects[i];
    scene::validateObjectModel(placement.model);
    if (!object_ids.insert(placement.model.object_id).second) {
      throw ConfigError("scenario.objects[" + std::to_string(i) + "]: duplicate object_id \"" +
                        placement.model.object_id + "\"");
    }
    for (const auto& [id, pose] : placement.model.tag_layout) {
      if (!tag_ids.insert(id).second) {
        throw ConfigError("scenario.objects[" + std::to_string(i) + "]: tag id " +
                          std::to_string(id) + " already used by another placement");
      }
    }
  }

  for (std::size_t i = 0; i < config.dropout_windows.size(); ++i) {
    const auto& w = config.dropout_windows[i];
    if (!(w.end > w.start)) {
      throw ConfigError("scenario.dropout_windows[" + std::to_string(i) +
                        "]: end must exceed start");
    }
  }

  const NoiseConfig& n = config.noise;
  if (n.det_trans_sigma < 0.0) throw ConfigError("scenario.noise.det_trans_sigma: must be >= 0");
  if (n.det_rot_sigma < 0.0) throw ConfigError("scenario.noise.det_rot_sigma: must be >= 0");
  if (n.flip_prob < 0.0 || n.flip_prob > 1.0) {
    throw ConfigError("scenario.noise.flip_prob: must be in [0, 1]");
  }
  if (n.vio_trans_sigma < 0.0) throw ConfigError("scenario.noise.vio_trans_sigma: must be >= 0");
  if (n.vio_rot_sigma < 0.0) throw ConfigError("scenario.noise.vio_rot_sigma: must be >= 0");
  if (n.vio_bias_walk < 0.0) throw ConfigError("scenario.noise.vio_bias_walk: must be >= 0");

  if (!(config.frustum.half_angle > 0.0) || config.frustum.half_angle > std::numbers::pi / 2.0) {
    throw ConfigError("scenario.frustum.half_angle_deg: must be in (0, 90]");
  }
  if (!(config.frustum.max_range > 0.0)) {
    throw ConfigError("scenario.frustum.max_range: must be > 0");
  }
}

ScenarioConfig expandScenario(const ScenarioConfig& config) {
  ScenarioConfig out = config;
  if (out.trajectory.type == TrajectoryType::PegInHole && out.objects.empty()) {
    out.objects.push_back(defaultPlate());
  }
  validateScenario(out);
  return out;
}

namespace {

const char* toString(TrajectoryType type) {
  switch (type) {
    case TrajectoryType::Static:
      return "static";
    case TrajectoryType::ConstantTwist:
      return "constant_twist";
    case TrajectoryType::Waypoints:
      return "waypoints";
    case TrajectoryType::PegInHole:
      return "peg_in_hole";
  }
  return "unknown";
}

TrajectoryConfig trajectoryFromJson(const json& j) {
  const std::string ctx = "scenario.trajectory";
  requireObject(j, ctx);
  TrajectoryConfig out;
  const std::string type = requireString(j, "type", ctx);
  if (type == "static") {
    checkKeys(j, {"type", "start_pose"}, ctx);
    out.type = TrajectoryType::Static;
    if (j.contains("start_pose")) {
      out.start_pose = poseFromJson(j["start_pose"], ctx + ".start_pose");
    }
  } else if (type == "constant_twist") {
    checkKeys(j, {"type", "start_pose", "linear", "angular"}, ctx);
    out.type = TrajectoryType::ConstantTwist;
    if (j.contains("start_pose")) {
      out.start_pose = poseFromJson(j["start_pose"], ctx + ".start_pose");
    }
    if (j.contains("linear")) {
      out.twist.linear = vector3FromJson(j["linear"], ctx + ".linear");
    }
    if (j.contains("angular")) {
      out.twist.angular = vector3FromJson(j["angular"], ctx + ".angular");
    }
  } else if (type == "waypoints") {
    checkKeys(j, {"type", "points"}, ctx);
    out.type = TrajectoryType::Waypoints;
    const json& points = requireKey(j, "points", ctx);
    if (!points.is_array()) throw ConfigError(ctx + ".points: expected an array");
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::string pctx = ctx + ".points[" + std::to_string(i) + "]";
      requireObject(points[i], pctx);
      checkKeys(points[i], {"time", "pose"}, pctx);
      out.waypoints.emplace_back(requireNumber(points[i], "time", pctx),
                                 poseFromJson(requireKey(points[i], "pose", pctx), pctx + ".pose"));
    }
  } else if (type == "peg_in_hole") {
    checkKeys(j, {"type"}, ctx);
    out.type = TrajectoryType::PegInHole;
  } else {
    throw ConfigError(ctx + ".type: unknown type \"" + type + "\"");
  }
  return out;
}

json trajectoryToJson(const TrajectoryConfig& t) {
  json j{{"type", toString(t.type)}};
  switch (t.type) {
    case TrajectoryType::Static:
      j["start_pose"] = poseToJson(t.start_pose);
      break;
    case TrajectoryType::ConstantTwist:
      j["start_pose"] = poseToJson(t.start_pose);
      j["linear"] = vector3ToJson(t.twist.linear);
      j["angular"] = vector3ToJson(t.twist.angular);
      break;
    case TrajectoryType::Waypoints: {
      json points = json::array();
      for (const auto& [time, pose] : t.waypoints) {
        points.push_back(json{{"time", time}, {"pose", poseToJson(pose)}});
      }
      j["points"] = std::move(points);
      break;
    }
    case TrajectoryType::PegInHole:
      break;
  }
  return j;
}

}  // namespace

ScenarioConfig scenarioFromJson(const json& j) {
  const std::string ctx = "scenario";
  requireObject(j, ctx);
  checkKeys(j,
            {"schema_version", "duration", "detection_rate", "vio_rate", "processing_delay",
             "ap2_slow_factor", "seed", "trajectory", "objects", "dropout_windows", "noise",
             "frustum"},
            ctx);
  const double version = requireNumber(j, "schema_version", ctx);
  if (version != 1.0) {
    throw ConfigError("scenario.schema_version: unsupported version");
  }

  ScenarioConfig out;
  out.duration = requireNumber(j, "duration", ctx);
  out.detection_rate = numberOr(j, "detection_rate", out.detection_rate, ctx);
  out.vio_rate = numberOr(j, "vio_rate", out.vio_rate, ctx);
  out.processing_delay = numberOr(j, "processing_delay", out.processing_delay, ctx);
  out.ap2_slow_factor = numberOr(j, "ap2_slow_factor", out.ap2_slow_factor, ctx);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() && !j["seed"].is_number_unsigned()) {
      throw ConfigError("scenario.seed: expected a non-negative integer");
    }
    if (j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() < 0) {
      throw ConfigError("scenario.seed: expected a non-negative integer");
    }
    out.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("trajectory")) out.trajectory = trajectoryFromJson(j["trajectory"]);

  if (j.contains("objects")) {
    const json& objects = j["objects"];
    if (!objects.is_array()) throw ConfigError("scenario.objects: expected an array");
    for (std::size_t i = 0; i < objects.size(); ++i) {
      const std::string octx = "scenario.objects[" + std::to_string(i) + "]";
      requireObject(objects[i], octx);
      checkKeys(objects[i], {"model", "pose"}, octx);
      ObjectPlacement placement;
      placement.model =
          scene::objectModelFromJson(requireKey(objects[i], "model", octx), octx + ".model");
      placement.pose = poseFromJson(requireKey(objects[i], "pose", octx), octx + ".pose");
      out.objects.push_back(std::move(placement));
    }
  }

  if (j.contains("dropout_windows")) {
    const json& windows = j["dropout_windows"];
    if (!windows.is_array()) throw ConfigError("scenario.dropout_windows: expected an array");
    for (std::size_t i = 0; i < windows.size(); ++i) {
      const std::string wctx = "scenario.dropout_windows[" + std::to_string(i) + "]";
      requireObject(windows[i], wctx);
      checkKeys(windows[i], {"start", "end", "tags"}, wctx);
      DropoutWindow w;
      w.start = requireNumber(windows[i], "start", wctx);
      w.end = requireNumber(windows[i], "end", wctx);
      if (windows[i].contains("tags")) {
        const json& tags = windows[i]["tags"];
        if (!tags.is_array()) throw ConfigError(wctx + ".tags: expected an array of tag ids");
        for (const auto& t : tags) {
          if (!t.is_number_integer()) {
            throw ConfigError(wctx + ".tags: expected an array of tag ids");
          }
          w.tags.push_back(t.get<int>());
        }
      }
      out.dropout_windows.push_back(std::move(w));
    }
  }

  if (j.contains("noise")) {
    const json& noise = j["noise"];
    const std::string nctx = "scenario.noise";
    requireObject(noise, nctx);
    checkKeys(noise,
              {"det_trans_sigma", "det_rot_sigma", "flip_prob", "vio_trans_sigma",
               "vio_rot_sigma", "vio_bias_walk"},
              nctx);
    out.noise.det_trans_sigma = numberOr(noise, "det_trans_sigma", out.noise.det_trans_sigma, nctx);
    out.noise.det_rot_sigma = numberOr(noise, "det_rot_sigma", out.noise.det_rot_sigma, nctx);
    out.noise.flip_prob = numberOr(noise, "flip_prob", out.noise.flip_prob, nctx);
    out.noise.vio_trans_sigma = numberOr(noise, "vio_trans_sigma", out.noise.vio_trans_sigma, nctx);
    out.noise.vio_rot_sigma = numberOr(noise, "vio_rot_sigma", out.noise.vio_rot_sigma, nctx);
    out.noise.vio_bias_walk = numberOr(noise, "vio_bias_walk", out.noise.vio_bias_walk, nctx);
  }

  if (j.contains("frustum")) {
    const json& frustum = j["frustum"];
    const std::string fctx = "scenario.frustum";
    requireObject(frustum, fctx);
    checkKeys(frustum, {"half_angle_deg", "max_range"}, fctx);
    const double deg =
        numberOr(frustum, "half_angle_deg", out.frustum.half_angle * 180.0 / std::numbers::pi,
                 fctx);
    out.frustum.half_angle = deg * std::numbers::pi / 180.0;
    out.frustum.max_range = numberOr(frustum, "max_range", out.frustum.max_range, fctx);
  }

  (void)expandScenario(out);  // preset-aware validation
  return out;
}

json scenarioToJson(const ScenarioConfig& config) {
  json objects = json::array();
  for (const ObjectPlacement& placement : config.objects) {
    objects.push_back(json{{"model", scene::objectModelToJson(placement.model)},
                           {"pose", poseToJson(placement.pose)}});
  }
  json windows = json::array();
  for (const DropoutWindow& w : config.dropout_windows) {
    windows.push_back(json{{"start", w.start}, {"end", w.end}, {"tags", w.tags}});
  }
  return json{{"schema_version", 1},
              {"duration", config.duration},
              {"detection_rate", config.detection_rate},
              {"vio_rate", config.vio_rate},
              {"processing_delay", config.processing_delay},
              {"ap2_slow_factor", config.ap2_slow_factor},
              {"seed", config.seed},
              {"trajectory", trajectoryToJson(config.trajectory)},
              {"objects", std::move(objects)},
              {"dropout_windows", std::move(windows)},
              {"noise",
               json{{"det_trans_sigma", config.noise.det_trans_sigma},
                    {"det_rot_sigma", config.noise.det_rot_sigma},
                    {"flip_prob", config.noise.flip_prob},
                    {"vio_trans_sigma", config.noise.vio_trans_sigma},
                    {"vio_rot_sigma", config.noise.vio_rot_sigma},
                    {"vio_bias_walk", config.noise.vio_bias_walk}}},
              {"frustum",
               json{{"half_angle_deg", config.frustum.half_angle * 180.0 / std::numbers::pi},
                    {"max_range", config.frustum.max_range}}}};
}

ScenarioConfig loadScenario(const std::string& path) {
  return scenarioFromJson(loadJsonFile(path));
}

void saveScenario(const ScenarioConfig& config, const std::string& path) {
  writeTextFile(path, scenarioToJson(config).dump(2) + "\n");
}

}  // namespace mf::sim
