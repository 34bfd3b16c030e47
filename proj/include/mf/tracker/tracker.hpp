#pragma once

#include <map>
#include <vector>

#include "mf/tracker/types.hpp"
#include "mf/tracker/vio_stream.hpp"

namespace mf::tracker {

/// Build the tag map from one frame in which the whole rig is visible:
/// relative[y] = compose(inverse(pose_y), pose_x) for every non-target tag y.
/// Throws TargetMissingError when the target is absent, DuplicateTagError on
/// repeated tag ids and ConfigError when no non-target tag is present.
TagMap tagInit(const std::vector<TagDetection>& detections, int target_id,
               const Posed& object_from_target);

/// Blend stored relative transforms toward freshly observed ones with a
/// constant weight in (0,1]; weight 1 replaces. Keys of `fresh` must already
/// exist in the map (UnknownTagError otherwise).
TagMap tagInitUpdate(const TagMap& map, const std::map<int, Posed>& fresh, double weight);

/// Dead-reckon a camera-frame estimate across camera motion measured by VIO:
/// result = compose(compose(inverse(vio_now), vio_prev), prev_fused).
/// Exact for a static object regardless of the VIO world-frame origin.
Posed vioIntegrate(const Posed& prev_fused, const Posed& vio_prev, const Posed& vio_now);

/// Shift a camera-frame estimate forward by `delay` seconds of camera motion,
/// extrapolated from the VIO twist at the estimate's validity time (constant
/// world-frame twist). The VIO translation cancels algebraically, so only the
/// sample's rotation and twist are consumed. delay == 0 returns `fused`
/// unchanged; negative delay raises NegativeDelayError.
Posed vioDelayCompensate(const Posed& fused, const VioSample& vio, double delay);

/// now - capture_time; raises ClockSkewError when now precedes the capture.
double delayComputation(double capture_time, double now);

/// One tracker iteration at query time `now` over the detections of a single
/// frame (possibly empty). Detections with tag ids outside the tag map are
/// ignored. Branches on the visible set (AllTags / PartialWithTarget /
/// PartialWithoutTarget / VioOnly), refines the tag map on AllTags frames, and
/// delay-compensates the output when enabled. Fresh and bridged estimates are
/// compensated; a held (bridging disabled or VIO gap) output is repeated
/// verbatim with delay_applied 0. Raises NotInitializedError before tagInit or
/// when the first frame ever is empty.
TrackerOutput step(TrackerState& state, const std::vector<TagDetection>& detections,
                   const VioStream& vio, double now, const TrackerConfig& config);

}  // namespace mf::tracker
