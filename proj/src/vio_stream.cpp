#include "mf/tracker/vio_stream.hpp"

#include <algorithm>
#include <string>

namespace mf::tracker {

namespace {
constexpr double kEdgeSlack = 1e-9;  // forgive fp jitter at the window edges
}

void VioStream::push(const VioSample& sample) {
  if (!samples_.empty() && sample.time <= samples_.back().time) {
    throw ConfigError("vio_stream: sample times must be strictly increasing (got " +
                      std::to_string(sample.time) + " after " +
                      std::to_string(samples_.back().time) + ")");
  }
  samples_.push_back(sample);
}

double VioStream::frontTime() const {
  if (samples_.empty()) throw VioGapError("vio_stream: empty");
  return samples_.front().time;
}

double VioStream::backTime() const {
  if (samples_.empty()) throw VioGapError("vio_stream: empty");
  return samples_.back().time;
}

VioSample VioStream::sampleAt(double t) const {
  if (samples_.empty()) {
    throw VioGapError("vio_stream: query on empty stream");
  }
  if (t < samples_.front().time - kEdgeSlack || t > samples_.back().time + kEdgeSlack) {
    throw VioGapError("vio_stream: query " + std::to_string(t) + " outside [" +
                      std::to_string(samples_.front().time) + ", " +
                      std::to_string(samples_.back().time) + "]");
  }
  const auto it = std::lower_bound(
      samples_.begin(), samples_.end(), t,
      [](const VioSample& s, double value) { return s.time < value; });
  if (it != samples_.end() && it->time == t) return *it;
  if (it == samples_.begin()) return samples_.front();
  if (it == samples_.end()) return samples_.back();

  const VioSample& s0 = *(it - 1);
  const VioSample& s1 = *it;
  const double u = (t - s0.time) / (s1.time - s0.time);
  VioSample out;
  out.time = t;
  out.pose = interpolatePose(s0.pose, s1.pose, u);
  out.twist.linear = (1.0 - u) * s0.twist.linear + u * s1.twist.linear;
  out.twist.angular = (1.0 - u) * s0.twist.angular + u * s1.twist.angular;
  return out;
}

}  // namespace mf::tracker
