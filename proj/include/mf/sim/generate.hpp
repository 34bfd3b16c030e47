#pragma once

#include <vector>

#include "mf/sim/scenario.hpp"
#include "mf/tracker/types.hpp"

namespace mf::sim {

/// All detections of one detector frame; empty during dropout or when nothing
/// is in the frustum. Frames keep arriving at the detection rate regardless.
struct DetectionFrame {
  double capture_time = 0.0;
  double available_time = 0.0;
  std::vector<tracker::TagDetection> detections;
};

/// Ground truth on the VIO grid: camera-in-world plus every placed object
/// expressed in the camera frame.
struct TruthSample {
  double time = 0.0;
  Posed camera_in_world;
  std::vector<Posed> objects_in_hc;
};

struct ScenarioStreams {
  std::vector<DetectionFrame> frames;
  std::vector<tracker::VioSample> vio;
  std::vector<TruthSample> truth;
};

/// Deterministic synthesis of detection/VIO/truth streams from a scenario.
/// Each noise source draws from its own engine derived from the master seed,
/// and draws happen for every candidate sighting whether or not it is emitted,
/// so disabling one source leaves all other draws bit-identical.
ScenarioStreams generate(const ScenarioConfig& config);

}  // namespace mf::sim
