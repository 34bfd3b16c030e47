#pragma once

#include <utility>
#include <vector>

#include "mf/errors.hpp"
#include "mf/geom/pose.hpp"

namespace mf::sim {

/// Piecewise constant-twist rigid trajectory. Pose is continuous across
/// segment boundaries; within a segment the closed form
///   p(t0 + dt) = p0 + v * dt,   R(t0 + dt) = exp(w * dt) * R0
/// is evaluated from the precomputed segment start pose, so repeated queries
/// are exact and order-independent. Queries clamp to [startTime, endTime].
class Trajectory {
 public:
  struct SegmentSpec {
    double start_time = 0.0;
    Twistd twist;
  };

  Trajectory(const Posed& start_pose, double start_time, std::vector<SegmentSpec> segments,
             double end_time);

  static Trajectory staticPose(const Posed& pose, double duration);
  static Trajectory constantTwist(const Posed& start_pose, const Twistd& twist, double duration);

  /// Piecewise twists derived from consecutive waypoints via the log map; the
  /// trajectory passes through every waypoint exactly. Times must be strictly
  /// increasing and at least two waypoints are required.
  static Trajectory waypoints(const std::vector<std::pair<double, Posed>>& points);

  Posed poseAt(double t) const;
  Twistd twistAt(double t) const;

  double startTime() const { return t_begin_; }
  double endTime() const { return t_end_; }

 private:
  struct Segment {
    double t0;
    Posed pose0;
    Twistd twist;
  };
  std::vector<Segment> segments_;
  double t_begin_ = 0.0;
  double t_end_ = 0.0;

  const Segment& segmentFor(double t) const;
};

}  // namespace mf::sim
