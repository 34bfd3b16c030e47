#include "mf/sim/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mf::sim {

namespace {

Posed advance(const Posed& pose, const Twistd& twist, double dt) {
  return Posed(rotationExp(Eigen::Vector3d(twist.angular * dt)) * pose.rotation,
               pose.translation + twist.linear * dt);
}

}  // namespace

Trajectory::Trajectory(const Posed& start_pose, double start_time,
                       std::vector<SegmentSpec> segments, double end_time) {
  if (segments.empty()) segments.push_back({start_time, Twistd{}});
  std::sort(segments.begin(), segments.end(),
            [](const SegmentSpec& a, const SegmentSpec& b) { return a.start_time < b.start_time; });
  if (segments.front().start_time != start_time) {
    throw ConfigError("trajectory: first segment must start at the trajectory start time");
  }
  if (!(end_time > start_time)) {
    throw ConfigError("trajectory: end time must exceed start time");
  }
  for (std::size_t i = 1; i < segments.size(); ++i) {
    if (segments[i].start_time <= segments[i - 1].start_time) {
      throw ConfigError("trajectory: segment start times must be strictly increasing");
    }
  }

  t_begin_ = start_time;
  t_end_ = end_time;
  Posed pose = start_pose;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    segments_.push_back({segments[i].start_time, pose, segments[i].twist});
    const double next = i + 1 < segments.size() ? segments[i + 1].start_time : end_time;
    pose = advance(pose, segments[i].twist, next - segments[i].start_time);
  }
}

Trajectory Trajectory::staticPose(const Posed& pose, double duration) {
  return Trajectory(pose, 0.0, {{0.0, Twistd{}}}, duration);
}

Trajectory Trajectory::constantTwist(const Posed& start_pose, const Twistd& twist,
                                     double duration) {
  return Trajectory(start_pose, 0.0, {{0.0, twist}}, duration);
}

Trajectory Trajectory::waypoints(const std::vector<std::pair<double, Posed>>& points) {
  if (points.size() < 2) throw ConfigError("trajectory: waypoints need at least two points");
  std::vector<SegmentSpec> segments;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double dt = points[i + 1].first - points[i].first;
    if (!(dt > 0.0)) throw ConfigError("trajectory: waypoint times must be strictly increasing");
    Twistd twist;
    twist.linear = (points[i + 1].second.translation - points[i].second.translation) / dt;
    // Left (world-frame) increment: q1 = exp(w * dt) * q0.
    const Eigen::Quaterniond q_rel =
        points[i + 1].second.rotation * points[i].second.rotation.conjugate();
    twist.angular = rotationLog(q_rel) / dt;
    segments.push_back({points[i].first, twist});
  }
  return Trajectory(points.front().second, points.front().first, std::move(segments),
                    points.back().first);
}

const Trajectory::Segment& Trajectory::segmentFor(double t) const {
  // Last segment whose start time is <= t.
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double value, const Segment& s) { return value < s.t0; });
  if (it == segments_.begin()) return segments_.front();
  return *(it - 1);
}

Posed Trajectory::poseAt(double t) const {
  const double tc = std::clamp(t, t_begin_, t_end_);
  const Segment& seg = segmentFor(tc);
  return advance(seg.pose0, seg.twist, tc - seg.t0);
}

Twistd Trajectory::twistAt(double t) const {
  const double tc = std::clamp(t, t_begin_, t_end_);
  return segmentFor(tc).twist;
}

}  // namespace mf::sim
