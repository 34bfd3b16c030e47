#pragma once

#include <vector>

#include "mf/errors.hpp"
#include "mf/geom/pose.hpp"

namespace mf::scene {

/// Time-stamped robot kinematics stream (base_from_tcp over time) with
/// geodesic interpolation; queries outside the covered window raise
/// KinematicsGapError.
class KinematicsStream {
 public:
  void push(double time, const Posed& base_from_tcp);
  Posed sampleAt(double t) const;
  bool empty() const { return times_.empty(); }

 private:
  std::vector<double> times_;
  std::vector<Posed> poses_;
};

}  // namespace mf::scene
