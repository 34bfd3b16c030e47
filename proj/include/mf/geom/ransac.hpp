#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "mf/geom/pose.hpp"

namespace mf {

/// Consensus parameters for pose-set fusion. An estimate is an inlier of a
/// hypothesis when BOTH its translation and rotation distances to the
/// hypothesis pose are within the thresholds.
struct RansacConfig {
  double trans_thresh = 0.03;  // [m]
  double rot_thresh = 0.1;     // [rad]
  int min_inliers = 0;         // 0 -> strict majority of the set
  int max_exhaustive = 12;     // sets up to this size try every hypothesis
};

template <typename Scalar>
struct RansacResult {
  Pose<Scalar> fused;              // chordal mean of the consensus set
  std::vector<char> inlier_flags;  // one per input estimate
  int hypothesis_index = -1;       // index of the winning seed estimate
};

using RansacResultd = RansacResult<double>;

/// Single-estimate-hypothesis consensus over a set of pose estimates of the
/// same frame. Every hypothesis is one input estimate; the largest consensus
/// wins, ties preferring a consensus that contains estimate 0, then the lowest
/// hypothesis index. Throws EmptySetError on empty input, ConfigError on
/// non-positive thresholds and DegenerateError when no consensus reaches the
/// required size.
template <typename Scalar>
RansacResult<Scalar> ransacPoses(const std::vector<Pose<Scalar>>& estimates,
                                 const RansacConfig& cfg, std::uint64_t seed = 0) {
  if (estimates.empty()) throw EmptySetError("ransac_poses: empty estimate set");
  if (!(cfg.trans_thresh > 0.0) || !(cfg.rot_thresh > 0.0)) {
    throw ConfigError("ransac_poses: thresholds must be positive");
  }
  if (cfg.min_inliers < 0) throw ConfigError("ransac_poses: min_inliers must be >= 0");

  const int n = static_cast<int>(estimates.size());
  const int required = cfg.min_inliers > 0 ? cfg.min_inliers : n / 2 + 1;

  std::vector<int> hypotheses(static_cast<std::size_t>(n));
  std::iota(hypotheses.begin(), hypotheses.end(), 0);
  if (n > cfg.max_exhaustive) {
    // Deterministic partial Fisher-Yates; plain modulo keeps the draw sequence
    // independent of the standard library's distribution implementation.
    std::mt19937_64 rng(seed);
    for (int i = 0; i < cfg.max_exhaustive; ++i) {
      const int j = i + static_cast<int>(rng() % static_cast<std::uint64_t>(n - i));
      std::swap(hypotheses[i], hypotheses[j]);
    }
    hypotheses.resize(static_cast<std::size_t>(cfg.max_exhaustive));
    std::sort(hypotheses.begin(), hypotheses.end());
  }

  std::vector<char> best_flags;
  int best_count = -1;
  int best_h = -1;
  bool best_has_first = false;
  std::vector<char> flags(static_cast<std::size_t>(n));
  for (const int h : hypotheses) {
    int count = 0;
    for (int i = 0; i < n; ++i) {
      const PoseError<Scalar> e = poseDistance(estimates[static_cast<std::size_t>(i)],
                                               estimates[static_cast<std::size_t>(h)]);
      const bool in = e.translation_err <= Scalar(cfg.trans_thresh) &&
                      e.rotation_err <= Scalar(cfg.rot_thresh);
      flags[static_cast<std::size_t>(i)] = in ? 1 : 0;
      count += in ? 1 : 0;
    }
    const bool has_first = flags[0] != 0;
    if (count > best_count || (count == best_count && has_first && !best_has_first)) {
      best_flags = flags;
      best_count = count;
      best_h = h;
      best_has_first = has_first;
    }
  }

  if (best_count < required) {
    throw DegenerateError("ransac_poses: largest consensus " + std::to_string(best_count) +
                          " below required " + std::to_string(required));
  }

  std::vector<Pose<Scalar>> consensus;
  consensus.reserve(static_cast<std::size_t>(best_count));
  for (int i = 0; i < n; ++i) {
    if (best_flags[static_cast<std::size_t>(i)]) {
      consensus.push_back(estimates[static_cast<std::size_t>(i)]);
    }
  }

  RansacResult<Scalar> result;
  result.fused = averagePoses(consensus);
  result.inlier_flags = std::move(best_flags);
  result.hypothesis_index = best_h;
  return result;
}

}  // namespace mf
