#pragma once

#include <vector>

#include "mf/errors.hpp"
#include "mf/tracker/types.hpp"

namespace mf::tracker {

/// Strictly time-ordered buffer of VIO samples with geodesic interpolation
/// between neighbours. Queries outside the covered time window raise
/// VioGapError; exact sample hits return the stored sample unchanged.
class VioStream {
 public:
  void push(const VioSample& sample);

  /// Interpolated sample at time t (pose slerp/lerp, twist lerp).
  VioSample sampleAt(double t) const;

  bool empty() const { return samples_.empty(); }
  std::size_t size() const { return samples_.size(); }
  double frontTime() const;
  double backTime() const;

 private:
  std::vector<VioSample> samples_;
};

}  // namespace mf::tracker
