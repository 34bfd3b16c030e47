#include "mf/sim/run.hpp"

#include <algorithm>
#include <cmath>

namespace mf::sim {

const char* toString(Variant variant) {
  switch (variant) {
    case Variant::Ours:
      return "Ours";
    case Variant::MultiART:
      return "MultiART";
    case Variant::AP2Like:
      return "AP2Like";
  }
  return "unknown";
}

Variant variantFromString(const std::string& name) {
  if (name == "Ours") return Variant::Ours;
  if (name == "MultiART") return Variant::MultiART;
  if (name == "AP2Like") return Variant::AP2Like;
  throw ConfigError("unknown variant \"" + name + "\" (expected Ours, MultiART or AP2Like)");
}

std::vector<TrackRecord> runScenario(const ScenarioConfig& raw_config, Variant variant) {
  const ScenarioConfig config = expandScenario(raw_config);
  const ScenarioStreams streams = generate(config);
  const scene::ObjectModel& model = config.objects.front().model;

  const long thin = variant == Variant::AP2Like
                        ? std::max(1L, static_cast<long>(std::llround(config.ap2_slow_factor)))
                        : 1L;

  tracker::TrackerConfig tracker_config;
  // Hand-held objects move independently of the camera, so relative VIO motion
  // says nothing about them; bridging and compensation stay off.
  const bool full_pipeline = variant == Variant::Ours && !model.held;
  tracker_config.use_vio_bridging = full_pipeline;
  tracker_config.use_delay_compensation = full_pipeline;

  tracker::TrackerState state;
  bool initialized = false;
  tracker::VioStream vio;
  std::size_t vio_cursor = 0;
  const double vio_period = 1.0 / config.vio_rate;

  std::vector<TrackRecord> records;
  for (std::size_t f = 0; f < streams.frames.size(); ++f) {
    if (static_cast<long>(f) % thin != 0) continue;  // detector busy (AP2Like)
    const DetectionFrame& frame = streams.frames[f];
    const double available =
        frame.capture_time + (frame.available_time - frame.capture_time) * static_cast<double>(thin);

    // Consume at the first VIO tick past availability.
    const long tick = static_cast<long>(std::ceil(available * config.vio_rate - 1e-9));
    if (tick < 0 || tick >= static_cast<long>(streams.truth.size())) break;  // outlives the run
    const double now = static_cast<double>(tick) / config.vio_rate;
    while (vio_cursor < streams.vio.size() && streams.vio[vio_cursor].time <= now + 1e-12) {
      vio.push(streams.vio[vio_cursor]);
      ++vio_cursor;
    }

    std::vector<tracker::TagDetection> detections;
    detections.reserve(frame.detections.size());
    for (const tracker::TagDetection& det : frame.detections) {
      if (model.tag_layout.count(det.tag_id) != 0) detections.push_back(det);
    }

    TrackRecord record;
    record.time = now;
    record.ground_truth = streams.truth[static_cast<std::size_t>(tick)].objects_in_hc.front();
    for (const tracker::TagDetection& det : detections) record.visible_tags.push_back(det.tag_id);

    if (!initialized) {
      if (detections.size() == model.tag_layout.size()) {
        state.tag_map = tracker::tagInit(detections, model.target_tag_id, model.object_from_target);
        initialized = true;
      } else {
        record.step_runtime = std::max(now - frame.capture_time, vio_period);
        records.push_back(std::move(record));
        continue;
      }
    }

    try {
      const tracker::TrackerOutput output = tracker::step(state, detections, vio, now,
                                                          tracker_config);
      record.step_runtime = std::max(now - output.estimate_time, vio_period);
      record.output = output;
    } catch (const Error&) {
      record.step_runtime = std::max(now - frame.capture_time, vio_period);
    }
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace mf::sim
