#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mf/sim/generate.hpp"
#include "mf/tracker/tracker.hpp"

namespace mf::sim {

/// Pipeline variants compared by the evaluation harness.
///  - Ours:     full tracker (VIO bridging + delay compensation).
///  - MultiART: multi-tag fusion only; holds the last estimate through
///              dropout and outputs at raw detection latency.
///  - AP2Like:  MultiART behaviour on every ap2_slow_factor-th frame with the
///              detector latency scaled by the same factor.
enum class Variant { Ours, MultiART, AP2Like };

const char* toString(Variant variant);
Variant variantFromString(const std::string& name);

/// One tracker step as scored by the evaluation: query time, ground truth at
/// that time, the output (absent when the tracker could not produce one) and
/// the modeled output staleness used as the runtime metric.
struct TrackRecord {
  double time = 0.0;
  Posed ground_truth;  // true T_object^hc of the tracked object at `time`
  std::optional<tracker::TrackerOutput> output;
  std::vector<int> visible_tags;  // tracked-rig tags present in the consumed frame
  double step_runtime = 0.0;      // max(now - estimate validity, one VIO period) [s]
};

/// Run one variant over a scenario: frames are consumed at the first VIO tick
/// past their availability, the tracker is initialized from the first frame
/// showing the whole rig, and one record is emitted per consumed frame.
std::vector<TrackRecord> runScenario(const ScenarioConfig& config, Variant variant);

}  // namespace mf::sim
