#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mf/geom/pose.hpp"
#include "mf/geom/ransac.hpp"

namespace mf::tracker {

/// One fiducial observation from the helmet camera: T_tag^hc at capture time.
/// available_time models detector latency; the frame may only be consumed once
/// the wall clock has passed it.
struct TagDetection {
  int tag_id = -1;
  Posed pose;
  double capture_time = 0.0;
  double available_time = 0.0;
};

/// VIO sample: camera-in-world pose T_hc^w plus world-frame twist.
struct VioSample {
  double time = 0.0;
  Posed pose;
  Twistd twist;
};

/// Rig geometry learned at initialization: for every non-target tag y the
/// relative transform T_x^y mapping the target tag x into y's frame, plus the
/// fixed offset from the target tag to the object origin.
struct TagMap {
  int target_id = -1;
  std::map<int, Posed> relative;  // tag id y -> T_x^y
  Posed object_from_target;       // T_object^x
};

/// Which branch produced the current estimate.
enum class FusionMode { AllTags, PartialWithTarget, PartialWithoutTarget, VioOnly };

const char* toString(FusionMode mode);

inline std::ostream& operator<<(std::ostream& os, FusionMode mode) {
  return os << toString(mode);
}

struct TrackerConfig {
  RansacConfig ransac;
  bool use_vio_bridging = true;        // propagate through loss of sight
  bool use_delay_compensation = true;  // remove detector latency from outputs
};

/// Raw (uncompensated) fused target-tag pose together with its validity time.
struct FusedEstimate {
  Posed pose;
  double time = 0.0;
};

struct TrackerState {
  TagMap tag_map;
  double update_weight = 0.1;  // (0,1] blend weight for tag-map refinement
  std::optional<FusedEstimate> last_fused;
  std::optional<VioSample> last_vio;  // VIO sample at last_fused.time
};

struct TrackerOutput {
  Posed object_pose;           // T_object^hc after compensation
  Posed target_pose;           // T_x^hc after compensation
  FusionMode mode = FusionMode::VioOnly;
  double delay_applied = 0.0;  // seconds of latency removed, >= 0
  double estimate_time = 0.0;  // validity time of the emitted estimate
  bool vio_gap = false;        // hold-last fallback due to missing VIO coverage
};

}  // namespace mf::tracker
