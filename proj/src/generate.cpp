#include "mf/sim/generate.hpp"

#include <cmath>
#include <random>

namespace mf::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct NoiseEngines {
  std::mt19937_64 det_noise;
  std::mt19937_64 det_flip;
  std::mt19937_64 vio_white;
  std::mt19937_64 vio_bias;

  explicit NoiseEngines(std::uint64_t seed) {
    std::uint64_t state = seed;
    det_noise.seed(splitmix64(state));
    det_flip.seed(splitmix64(state));
    vio_white.seed(splitmix64(state));
    vio_bias.seed(splitmix64(state));
  }
};

Eigen::Vector3d drawVector3(std::mt19937_64& rng, std::normal_distribution<double>& dist,
                            double sigma) {
  // Draw unconditionally so toggling a sigma never shifts the engine state.
  const double a = dist(rng), b = dist(rng), c = dist(rng);
  return sigma * Eigen::Vector3d(a, b, c);
}

bool inFrustum(const Eigen::Vector3d& p, const FrustumConfig& frustum) {
  const double range = p.norm();
  if (range > frustum.max_range) return false;
  return std::atan2(std::hypot(p.x(), p.y()), p.z()) <= frustum.half_angle;
}

bool suppressed(double capture_time, int tag_id, const std::vector<DropoutWindow>& windows) {
  for (const DropoutWindow& w : windows) {
    if (capture_time < w.start || capture_time >= w.end) continue;
    if (w.tags.empty()) return true;
    for (const int id : w.tags) {
      if (id == tag_id) return true;
    }
  }
  return false;
}

}  // namespace

ScenarioStreams generate(const ScenarioConfig& raw_config) {
  const ScenarioConfig config = expandScenario(raw_config);
  const Trajectory trajectory = buildTrajectory(config);
  NoiseEngines rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  ScenarioStreams streams;

  // World-frame tag poses are fixed; precompute them in placement order.
  struct TagSite {
    int id;
    Posed tag_in_world;
  };
  std::vector<TagSite> sites;
  for (const ObjectPlacement& placement : config.objects) {
    for (const auto& [id, layout] : placement.model.tag_layout) {
      sites.push_back({id, compose(placement.pose, layout)});
    }
  }

  // --- VIO + ground truth on the fine grid ---
  const long vio_ticks = static_cast<long>(std::floor(config.duration * config.vio_rate)) + 1;
  const double vio_dt = 1.0 / config.vio_rate;
  Eigen::Vector3d bias_velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d bias_position = Eigen::Vector3d::Zero();
  streams.vio.reserve(static_cast<std::size_t>(vio_ticks));
  streams.truth.reserve(static_cast<std::size_t>(vio_ticks));
  for (long i = 0; i < vio_ticks; ++i) {
    const double t = static_cast<double>(i) / config.vio_rate;
    const Posed pose_true = trajectory.poseAt(t);
    const Twistd twist_true = trajectory.twistAt(t);

    TruthSample truth;
    truth.time = t;
    truth.camera_in_world = pose_true;
    const Posed world_in_cam = inverse(pose_true);
    truth.objects_in_hc.reserve(config.objects.size());
    for (const ObjectPlacement& placement : config.objects) {
      truth.objects_in_hc.push_back(compose(world_in_cam, placement.pose));
    }
    streams.truth.push_back(std::move(truth));

    if (i > 0) {
      // Velocity random walk integrated into position (translation-only bias).
      bias_velocity +=
          drawVector3(rng.vio_bias, normal, config.noise.vio_bias_walk * std::sqrt(vio_dt));
      bias_position += bias_velocity * vio_dt;
    }
    const Eigen::Vector3d trans_white =
        drawVector3(rng.vio_white, normal, config.noise.vio_trans_sigma);
    const Eigen::Vector3d rot_white =
        drawVector3(rng.vio_white, normal, config.noise.vio_rot_sigma);
    const Eigen::Vector3d twist_lin_white =
        drawVector3(rng.vio_white, normal, config.noise.vio_trans_sigma);
    const Eigen::Vector3d twist_ang_white =
        drawVector3(rng.vio_white, normal, config.noise.vio_rot_sigma);

    tracker::VioSample sample;
    sample.time = t;
    sample.pose = Posed(rotationExp(rot_white) * pose_true.rotation,
                        pose_true.translation + bias_position + trans_white);
    sample.twist.linear = twist_true.linear + twist_lin_white;
    sample.twist.angular = twist_true.angular + twist_ang_white;
    streams.vio.push_back(std::move(sample));
  }

  // --- Detection frames at the detector cadence ---
  const Posed tag_flip(Eigen::Quaterniond(0.0, 1.0, 0.0, 0.0), Eigen::Vector3d::Zero());
  const long det_ticks = static_cast<long>(std::floor(config.duration * config.detection_rate)) + 1;
  streams.frames.reserve(static_cast<std::size_t>(det_ticks));
  for (long f = 0; f < det_ticks; ++f) {
    const double capture = static_cast<double>(f) / config.detection_rate;
    DetectionFrame frame;
    frame.capture_time = capture;
    frame.available_time = capture + config.processing_delay;
    const Posed world_in_cam = inverse(trajectory.poseAt(capture));
    for (const TagSite& site : sites) {
      const Posed tag_in_cam = compose(world_in_cam, site.tag_in_world);
      // One flip draw and one noise draw per candidate sighting, emitted or not.
      const bool flipped = uniform(rng.det_flip) < config.noise.flip_prob;
      const Eigen::Vector3d noise_t =
          drawVector3(rng.det_noise, normal, config.noise.det_trans_sigma);
      const Eigen::Vector3d noise_r =
          drawVector3(rng.det_noise, normal, config.noise.det_rot_sigma);
      if (!inFrustum(tag_in_cam.translation, config.frustum)) continue;
      if (suppressed(capture, site.id, config.dropout_windows)) continue;

      Posed measured = tag_in_cam;
      if (flipped) measured = compose(measured, tag_flip);  // 180 deg about tag x
      measured = compose(measured, Posed(rotationExp(noise_r), noise_t));

      tracker::TagDetection det;
      det.tag_id = site.id;
      det.pose = measured;
      det.capture_time = capture;
      det.available_time = frame.available_time;
      frame.detections.push_back(std::move(det));
    }
    streams.frames.push_back(std::move(frame));
  }

  return streams;
}

}  // namespace mf::sim
