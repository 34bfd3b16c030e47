#include "mf/tracker/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mf::tracker {

const char* toString(FusionMode mode) {
  switch (mode) {
    case FusionMode::AllTags:
      return "AllTags";
    case FusionMode::PartialWithTarget:
      return "PartialWithTarget";
    case FusionMode::PartialWithoutTarget:
      return "PartialWithoutTarget";
    case FusionMode::VioOnly:
      return "VioOnly";
  }
  return "unknown";
}

TagMap tagInit(const std::vector<TagDetection>& detections, int target_id,
               const Posed& object_from_target) {
  const TagDetection* target = nullptr;
  std::map<int, const TagDetection*> seen;
  for (const TagDetection& det : detections) {
    if (!seen.emplace(det.tag_id, &det).second) {
      throw DuplicateTagError("tag_init: duplicate tag id " + std::to_string(det.tag_id));
    }
    if (det.tag_id == target_id) target = &det;
  }
  if (target == nullptr) {
    throw TargetMissingError("tag_init: target tag " + std::to_string(target_id) +
                             " not among detections");
  }
  if (seen.size() < 2) {
    throw ConfigError("tag_init: needs the target and at least one other tag");
  }

  TagMap map;
  map.target_id = target_id;
  map.object_from_target = object_from_target;
  for (const auto& [id, det] : seen) {
    if (id == target_id) continue;
    map.relative[id] = compose(inverse(det->pose), target->pose);
  }
  return map;
}

TagMap tagInitUpdate(const TagMap& map, const std::map<int, Posed>& fresh, double weight) {
  if (!(weight > 0.0) || weight > 1.0) {
    throw ConfigError("tag_init_update: weight must be in (0, 1], got " + std::to_string(weight));
  }
  TagMap out = map;
  for (const auto& [id, pose] : fresh) {
    auto it = out.relative.find(id);
    if (it == out.relative.end()) {
      throw UnknownTagError("tag_init_update: tag id " + std::to_string(id) + " not in map");
    }
    it->second = blendPose(it->second, pose, weight);
  }
  return out;
}

Posed vioIntegrate(const Posed& prev_fused, const Posed& vio_prev, const Posed& vio_now) {
  return compose(compose(inverse(vio_now), vio_prev), prev_fused);
}

Posed vioDelayCompensate(const Posed& fused, const VioSample& vio, double delay) {
  if (delay < 0.0) {
    throw NegativeDelayError("vio_delay_compensate: negative delay " + std::to_string(delay));
  }
  if (delay == 0.0) return fused;
  // Predict the camera pose `delay` ahead under constant world-frame twist and
  // compose the resulting relative camera motion onto the estimate. Writing the
  // relative motion directly makes the VIO translation drop out:
  //   rel = pred^-1 * vio,  R_rel = R_pred^T R_vio,  t_rel = R_pred^T (-v * delay).
  const Eigen::Quaterniond q_step = rotationExp(Eigen::Vector3d(vio.twist.angular * delay));
  const Eigen::Quaterniond q_pred = (q_step * vio.pose.rotation).normalized();
  const Eigen::Quaterniond q_rel = q_pred.conjugate() * vio.pose.rotation;
  const Eigen::Vector3d t_rel = q_pred.conjugate() * Eigen::Vector3d(-vio.twist.linear * delay);
  return compose(Posed(q_rel, t_rel), fused);
}

double delayComputation(double capture_time, double now) {
  if (now < capture_time) {
    throw ClockSkewError("delay_computation: now " + std::to_string(now) +
                         " precedes capture " + std::to_string(capture_time));
  }
  return now - capture_time;
}

namespace {

struct Candidate {
  int tag_id;
  Posed pose;
  const TagDetection* detection;
};

}  // namespace

TrackerOutput step(TrackerState& state, const std::vector<TagDetection>& detections,
                   const VioStream& vio, double now, const TrackerConfig& config) {
  if (state.tag_map.target_id < 0 || state.tag_map.relative.empty()) {
    throw NotInitializedError("step: tag map not initialized");
  }
  if (!(state.update_weight > 0.0) || state.update_weight > 1.0) {
    throw ConfigError("step: update_weight must be in (0, 1]");
  }

  const TagMap& map = state.tag_map;
  const std::size_t total_tags = map.relative.size() + 1;

  // Keep only detections of this rig, indexed by id (validates uniqueness and
  // the shared capture time as a side effect).
  std::map<int, const TagDetection*> visible;
  for (const TagDetection& det : detections) {
    if (det.tag_id != map.target_id && map.relative.count(det.tag_id) == 0) continue;
    if (!visible.emplace(det.tag_id, &det).second) {
      throw DuplicateTagError("step: duplicate tag id " + std::to_string(det.tag_id));
    }
  }
  if (!visible.empty()) {
    const double tc = visible.begin()->second->capture_time;
    for (const auto& [id, det] : visible) {
      if (std::abs(det->capture_time - tc) > 1e-9) {
        throw ConfigError("step: detections of one frame must share capture_time");
      }
    }
  }

  const TagDetection* target_det = nullptr;
  if (auto it = visible.find(map.target_id); it != visible.end()) target_det = it->second;

  FusionMode mode = FusionMode::VioOnly;
  Posed raw;                       // fused target-tag estimate, uncompensated
  double ref_time = 0.0;           // validity time of `raw`
  bool state_advances = true;      // hold-last paths leave the state untouched
  bool frozen = false;             // held outputs are repeated, never extrapolated
  std::optional<VioSample> ref_vio;
  const RansacResultd* inliers_for_update = nullptr;
  RansacResultd ransac_result;
  std::vector<Candidate> candidates;

  bool vio_only = visible.empty();
  if (!vio_only) {
    mode = visible.size() == total_tags
               ? FusionMode::AllTags
               : (target_det != nullptr ? FusionMode::PartialWithTarget
                                        : FusionMode::PartialWithoutTarget);

    // Candidate estimates of the target tag: its own detection first (raw
    // pass-through), then one transformed estimate per visible non-target tag.
    if (target_det != nullptr) {
      candidates.push_back({map.target_id, target_det->pose, target_det});
    }
    for (const auto& [id, det] : visible) {
      if (id == map.target_id) continue;
      candidates.push_back({id, compose(det->pose, map.relative.at(id)), det});
    }

    std::vector<Posed> poses;
    poses.reserve(candidates.size());
    for (const Candidate& c : candidates) poses.push_back(c.pose);

    try {
      ransac_result = ransacPoses(poses, config.ransac);
      raw = ransac_result.fused;
      inliers_for_update = &ransac_result;
    } catch (const DegenerateError&) {
      if (target_det != nullptr) {
        raw = target_det->pose;  // trust the direct sighting
      } else {
        vio_only = true;  // no usable consensus and no direct sighting
      }
    }
    if (!vio_only) {
      ref_time = visible.begin()->second->capture_time;
    }
  }

  TrackerOutput out;
  if (vio_only) {
    mode = FusionMode::VioOnly;
    if (!state.last_fused.has_value()) {
      throw NotInitializedError("step: vio-only step before any detection");
    }
    if (!config.use_vio_bridging) {
      raw = state.last_fused->pose;  // hold the stale estimate verbatim
      ref_time = state.last_fused->time;
      frozen = true;
      state_advances = false;
    } else {
      try {
        const VioSample now_sample = vio.sampleAt(now);
        const Posed vio_prev = state.last_vio.has_value()
                                   ? state.last_vio->pose
                                   : vio.sampleAt(state.last_fused->time).pose;
        raw = vioIntegrate(state.last_fused->pose, vio_prev, now_sample.pose);
        ref_time = now;
        ref_vio = now_sample;
      } catch (const VioGapError&) {
        // No VIO coverage: degrade to the stale estimate and say so.
        out.target_pose = state.last_fused->pose;
        out.object_pose = compose(state.last_fused->pose, map.object_from_target);
        out.mode = mode;
        out.delay_applied = 0.0;
        out.estimate_time = state.last_fused->time;
        out.vio_gap = true;
        return out;
      }
    }
  } else {
    try {
      ref_vio = vio.sampleAt(ref_time);
    } catch (const VioGapError&) {
      ref_vio.reset();
    }

    // Refine the tag map only from frames where the whole rig agreed: AllTags
    // mode, target candidate an inlier, and only for inlier non-target tags.
    if (mode == FusionMode::AllTags && inliers_for_update != nullptr &&
        inliers_for_update->inlier_flags[0]) {
      std::map<int, Posed> fresh;
      for (std::size_t i = 1; i < candidates.size(); ++i) {
        if (!inliers_for_update->inlier_flags[i]) continue;
        fresh[candidates[i].tag_id] =
            compose(inverse(candidates[i].detection->pose), target_det->pose);
      }
      if (!fresh.empty()) {
        state.tag_map = tagInitUpdate(state.tag_map, fresh, state.update_weight);
      }
    }
  }

  const double delay = delayComputation(ref_time, now);
  Posed compensated = raw;
  double applied = 0.0;
  double estimate_time = ref_time;
  if (!frozen && config.use_delay_compensation && delay > 0.0) {
    if (ref_vio.has_value()) {
      compensated = vioDelayCompensate(raw, *ref_vio, delay);
      applied = delay;
      estimate_time = now;
    } else {
      out.vio_gap = true;  // wanted to compensate but had no sample
    }
  }

  if (state_advances) {
    state.last_fused = FusedEstimate{raw, ref_time};
    state.last_vio = ref_vio;
  }

  out.target_pose = compensated;
  out.object_pose = compose(compensated, state.tag_map.object_from_target);
  out.mode = mode;
  out.delay_applied = applied;
  out.estimate_time = estimate_time;
  return out;
}

}  // namespace mf::tracker
