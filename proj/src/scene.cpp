#include "mf/scene/calibration.hpp"
#include "mf/scene/kinematics.hpp"

#include <algorithm>
#include <string>

namespace mf::scene {

void KinematicsStream::push(double time, const Posed& base_from_tcp) {
  if (!times_.empty() && time <= times_.back()) {
    throw ConfigError("kinematics: sample times must be strictly increasing");
  }
  times_.push_back(time);
  poses_.push_back(base_from_tcp);
}

Posed KinematicsStream::sampleAt(double t) const {
  constexpr double kEdgeSlack = 1e-9;
  if (times_.empty()) throw KinematicsGapError("kinematics: query on empty stream");
  if (t < times_.front() - kEdgeSlack || t > times_.back() + kEdgeSlack) {
    throw KinematicsGapError("kinematics: query " + std::to_string(t) + " outside [" +
                             std::to_string(times_.front()) + ", " +
                             std::to_string(times_.back()) + "]");
  }
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
  if (it != times_.end() && *it == t) return poses_[hi];
  if (it == times_.begin()) return poses_.front();
  if (it == times_.end()) return poses_.back();
  const double u = (t - times_[hi - 1]) / (times_[hi] - times_[hi - 1]);
  return interpolatePose(poses_[hi - 1], poses_[hi], u);
}

Posed objectInTcp(const Posed& object_in_hc, const Posed& tcp_from_hc) {
  return compose(tcp_from_hc, object_in_hc);
}

Posed relativeObjects(const Posed& object1_in_mako, const Posed& mako_from_base,
                      const Posed& base_from_tcp, const Posed& tcp_from_hc,
                      const Posed& object2_in_hc) {
  return compose(
      inverse(object1_in_mako),
      compose(mako_from_base, compose(base_from_tcp, compose(tcp_from_hc, object2_in_hc))));
}

Posed relativeObjects(const Posed& object1_in_mako, const Posed& mako_from_base,
                      const KinematicsStream& kinematics, double t, const Posed& tcp_from_hc,
                      const Posed& object2_in_hc) {
  return relativeObjects(object1_in_mako, mako_from_base, kinematics.sampleAt(t), tcp_from_hc,
                         object2_in_hc);
}

}  // namespace mf::scene
