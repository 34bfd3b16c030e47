#include <doctest.h>

#include <filesystem>
#include <random>
#include <vector>

#include "mf/sim/run.hpp"
#include "test_support.hpp"

using mf::Posed;
using mf::Twistd;
using mf::sim::DropoutWindow;
using mf::sim::NoiseConfig;
using mf::sim::ScenarioConfig;
using mf::sim::ScenarioStreams;
using mf::sim::Trajectory;
using mf::sim::TrajectoryType;
using mf::sim::Variant;

namespace {

NoiseConfig zeroNoise() {
  NoiseConfig n;
  n.det_trans_sigma = 0.0;
  n.det_rot_sigma = 0.0;
  n.flip_prob = 0.0;
  n.vio_trans_sigma = 0.0;
  n.vio_rot_sigma = 0.0;
  n.vio_bias_walk = 0.0;
  return n;
}

Posed lookingDown(double x, double y, double z) {
  return Posed(Eigen::Quaterniond(0.0, 0.0, 1.0, 0.0), {x, y, z});
}

// Slow constant-twist sweep above the default plate; everything stays well
// inside the frustum for the durations used here.
ScenarioConfig slowSweep(double duration, double delay) {
  ScenarioConfig c;
  c.duration = duration;
  c.detection_rate = 25.0;
  c.vio_rate = 200.0;
  c.processing_delay = delay;
  c.trajectory.type = TrajectoryType::ConstantTwist;
  c.trajectory.start_pose = lookingDown(0.0, 0.0, 1.2);
  c.trajectory.twist.linear = {0.03, 0.015, -0.02};
  c.trajectory.twist.angular = {0.01, -0.008, 0.012};
  c.objects.push_back(mf::sim::defaultPlate());
  c.noise = zeroNoise();
  return c;
}

Posed tagWorld(const ScenarioConfig& config, int tag_id) {
  const auto& placement = config.objects.front();
  return mf::compose(placement.pose, placement.model.tag_layout.at(tag_id));
}

double maxTranslationErr(const std::vector<mf::sim::TrackRecord>& records, double t_begin,
                         double t_end) {
  double worst = 0.0;
  for (const auto& rec : records) {
    if (rec.time < t_begin || rec.time > t_end || !rec.output.has_value()) continue;
    worst = std::max(worst,
                     mf::poseDistance(rec.output->object_pose, rec.ground_truth).translation_err);
  }
  return worst;
}

}  // namespace

TEST_CASE("constant-twist trajectory matches the closed form") {
  std::mt19937_64 rng(61);
  const Posed start = oracle::randomPose(rng);
  Twistd twist;
  twist.linear = {0.2, -0.1, 0.05};
  twist.angular = {0.3, 0.1, -0.2};
  const Trajectory traj = Trajectory::constantTwist(start, twist, 5.0);

  for (const double t : {0.0, 0.37, 1.0, 2.5, 5.0}) {
    const Posed expected(mf::rotationExp(Eigen::Vector3d(twist.angular * t)) * start.rotation,
                         start.translation + twist.linear * t);
    CHECK(oracle::maxAbsDiff(oracle::toMatrix(traj.poseAt(t)), oracle::toMatrix(expected)) < 1e-13);
    CHECK(traj.twistAt(t).linear == twist.linear);
    CHECK(traj.twistAt(t).angular == twist.angular);
  }

  // Queries clamp to the covered interval.
  CHECK(mf::isApprox(traj.poseAt(-1.0), traj.poseAt(0.0), 1e-15));
  CHECK(mf::isApprox(traj.poseAt(7.0), traj.poseAt(5.0), 1e-15));

  const Trajectory frozen = Trajectory::staticPose(start, 3.0);
  CHECK(mf::isApprox(frozen.poseAt(1.7), start, 1e-15));
  CHECK(frozen.twistAt(1.7).linear.norm() == 0.0);
}

TEST_CASE("multi-segment trajectory is continuous and query-order independent") {
  Twistd first, second;
  first.linear = {0.1, 0.0, 0.0};
  first.angular = {0.0, 0.0, 0.5};
  second.linear = {0.0, -0.2, 0.1};
  second.angular = {0.4, 0.0, 0.0};
  const Trajectory traj(Posed(), 0.0, {{0.0, first}, {2.0, second}}, 4.0);

  // Approaching the boundary from the left converges to the boundary pose.
  const Posed at_boundary = traj.poseAt(2.0);
  CHECK(mf::poseDistance(traj.poseAt(2.0 - 1e-9), at_boundary).translation_err < 1e-8);
  CHECK(mf::poseDistance(traj.poseAt(2.0 - 1e-9), at_boundary).rotation_err < 1e-8);
  CHECK(traj.twistAt(2.0).angular == second.angular);  // boundary belongs to the new segment

  // Repeated and out-of-order queries are bit-identical.
  const Posed late = traj.poseAt(3.3);
  traj.poseAt(0.4);
  traj.poseAt(2.7);
  const Posed again = traj.poseAt(3.3);
  CHECK(late.rotation.coeffs() == again.rotation.coeffs());
  CHECK(late.translation == again.translation);

  // Segment-2 pose equals integrating segment 1 to the boundary, then on.
  const Posed expected =
      Posed(mf::rotationExp(Eigen::Vector3d(second.angular * 1.3)) * at_boundary.rotation,
            at_boundary.translation + second.linear * 1.3);
  CHECK(oracle::maxAbsDiff(oracle::toMatrix(late), oracle::toMatrix(expected)) < 1e-13);
}

TEST_CASE("waypoint trajectory passes through every waypoint exactly") {
  std::mt19937_64 rng(62);
  std::vector<std::pair<double, Posed>> points;
  Posed pose = oracle::randomPose(rng);
  for (int i = 0; i < 4; ++i) {
    points.emplace_back(static_cast<double>(i), pose);
    pose = mf::compose(pose, Posed(Eigen::Quaterniond(Eigen::AngleAxisd(
                                       0.3, oracle::randomVector(rng).normalized())),
                                   oracle::randomVector(rng, 0.2)));
  }
  const Trajectory traj = Trajectory::waypoints(points);
  CHECK(traj.startTime() == 0.0);
  CHECK(traj.endTime() == 3.0);
  for (const auto& [t, wp] : points) {
    CHECK(mf::poseDistance(traj.poseAt(t), wp).translation_err < 1e-12);
    CHECK(mf::poseDistance(traj.poseAt(t), wp).rotation_err < 1e-12);
  }

  // Between waypoints the rotation follows the geodesic: the halfway pose is
  // the slerp midpoint.
  const Posed mid = traj.poseAt(1.5);
  CHECK(mf::isApprox(mid, mf::interpolatePose(points[1].second, points[2].second, 0.5), 1e-12));

  CHECK_THROWS_AS(Trajectory::waypoints({points[0]}), mf::ConfigError);
  auto bad = points;
  bad[2].first = bad[1].first;
  CHECK_THROWS_AS(Trajectory::waypoints(bad), mf::ConfigError);
}

TEST_CASE("trajectory construction validation") {
  CHECK_THROWS_AS(Trajectory(Posed(), 0.0, {{0.0, Twistd{}}}, 0.0), mf::ConfigError);
  CHECK_THROWS_AS(Trajectory(Posed(), 0.0, {{0.5, Twistd{}}}, 2.0), mf::ConfigError);
  CHECK_THROWS_AS(Trajectory(Posed(), 0.0, {{0.0, Twistd{}}, {0.0, Twistd{}}}, 2.0),
                  mf::ConfigError);
}

TEST_CASE("zero-noise generation reproduces the geometry exactly") {
  const ScenarioConfig config = slowSweep(2.0, 0.0);
  const ScenarioStreams streams = mf::sim::generate(config);
  const Trajectory traj = mf::sim::buildTrajectory(config);

  REQUIRE(streams.vio.size() == 401);
  REQUIRE(streams.truth.size() == 401);
  REQUIRE(streams.frames.size() == 51);

  for (std::size_t i = 0; i < streams.vio.size(); ++i) {
    const auto& sample = streams.vio[i];
    const auto& truth = streams.truth[i];
    CHECK(sample.time == truth.time);
    CHECK((sample.pose.rotation.coeffs() - truth.camera_in_world.rotation.coeffs())
              .cwiseAbs()
              .maxCoeff() < 1e-15);
    CHECK(sample.pose.translation == truth.camera_in_world.translation);
    CHECK(sample.twist.linear == config.trajectory.twist.linear);
    CHECK(sample.twist.angular == config.trajectory.twist.angular);
    CHECK(mf::isApprox(truth.objects_in_hc.front(),
                       mf::compose(mf::inverse(traj.poseAt(truth.time)),
                                   config.objects.front().pose),
                       1e-13));
  }

  for (const auto& frame : streams.frames) {
    REQUIRE(frame.detections.size() == 4);  // the whole plate stays visible
    CHECK(frame.available_time == frame.capture_time);
    const Posed world_in_cam = mf::inverse(traj.poseAt(frame.capture_time));
    for (const auto& det : frame.detections) {
      const Posed exact = mf::compose(world_in_cam, tagWorld(config, det.tag_id));
      CHECK(mf::poseDistance(det.pose, exact).translation_err < 1e-13);
      CHECK(mf::poseDistance(det.pose, exact).rotation_err < 1e-13);
    }
  }
}

TEST_CASE("dropout windows are half-open and can target single tags") {
  ScenarioConfig config = slowSweep(3.0, 0.0);
  config.dropout_windows.push_back({1.0, 2.0, {}});
  const ScenarioStreams streams = mf::sim::generate(config);

  for (const auto& frame : streams.frames) {
    const double t = frame.capture_time;
    const bool inside = t >= 1.0 && t < 2.0;  // start inclusive, end exclusive
    CHECK(frame.detections.size() == (inside ? 0 : 4));
  }

  ScenarioConfig targeted = slowSweep(3.0, 0.0);
  targeted.dropout_windows.push_back({1.0, 2.0, {1}});
  const ScenarioStreams streams2 = mf::sim::generate(targeted);
  for (const auto& frame : streams2.frames) {
    const double t = frame.capture_time;
    const bool inside = t >= 1.0 && t < 2.0;
    CHECK(frame.detections.size() == (inside ? 3 : 4));
    if (inside) {
      for (const auto& det : frame.detections) CHECK(det.tag_id != 1);
    }
  }
}

TEST_CASE("planar flips rotate the measurement half a turn about the tag x axis") {
  ScenarioConfig flipped = slowSweep(1.0, 0.0);
  flipped.noise.flip_prob = 1.0;
  const ScenarioStreams a = mf::sim::generate(flipped);
  const ScenarioStreams b = mf::sim::generate(slowSweep(1.0, 0.0));

  REQUIRE(a.frames.size() == b.frames.size());
  for (std::size_t f = 0; f < a.frames.size(); ++f) {
    REQUIRE(a.frames[f].detections.size() == b.frames[f].detections.size());
    for (std::size_t d = 0; d < a.frames[f].detections.size(); ++d) {
      const Posed& with = a.frames[f].detections[d].pose;
      const Posed& without = b.frames[f].detections[d].pose;
      const auto err = mf::poseDistance(with, without);
      CHECK(err.translation_err < 1e-15);
      CHECK(err.rotation_err == doctest::Approx(std::acos(-1.0)).epsilon(1e-12));
      // And specifically about the tag's own x axis.
      const Eigen::Quaterniond rel = without.rotation.conjugate() * with.rotation;
      CHECK(std::abs(rel.x()) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("generation is bit-identical across runs") {
  ScenarioConfig config = slowSweep(1.5, 0.02);
  config.seed = 7;  // leave all noise at defaults
  config.noise = NoiseConfig{};
  const ScenarioStreams a = mf::sim::generate(config);
  const ScenarioStreams b = mf::sim::generate(config);

  REQUIRE(a.vio.size() == b.vio.size());
  for (std::size_t i = 0; i < a.vio.size(); ++i) {
    CHECK(a.vio[i].pose.rotation.coeffs() == b.vio[i].pose.rotation.coeffs());
    CHECK(a.vio[i].pose.translation == b.vio[i].pose.translation);
    CHECK(a.vio[i].twist.linear == b.vio[i].twist.linear);
    CHECK(a.vio[i].twist.angular == b.vio[i].twist.angular);
  }
  REQUIRE(a.frames.size() == b.frames.size());
  for (std::size_t f = 0; f < a.frames.size(); ++f) {
    REQUIRE(a.frames[f].detections.size() == b.frames[f].detections.size());
    for (std::size_t d = 0; d < a.frames[f].detections.size(); ++d) {
      CHECK(a.frames[f].detections[d].pose.rotation.coeffs() ==
            b.frames[f].detections[d].pose.rotation.coeffs());
      CHECK(a.frames[f].detections[d].pose.translation ==
            b.frames[f].detections[d].pose.translation);
    }
  }
}

TEST_CASE("noise sources draw from independent engines") {
  ScenarioConfig with_bias = slowSweep(1.5, 0.0);
  with_bias.noise = NoiseConfig{};  // defaults: everything on except flips
  with_bias.seed = 3;
  ScenarioConfig no_bias = with_bias;
  no_bias.noise.vio_bias_walk = 0.0;

  const ScenarioStreams a = mf::sim::generate(with_bias);
  const ScenarioStreams b = mf::sim::generate(no_bias);

  // Toggling the bias walk leaves detections, VIO rotations and twists
  // bit-identical; only the VIO position drift changes.
  REQUIRE(a.frames.size() == b.frames.size());
  for (std::size_t f = 0; f < a.frames.size(); ++f) {
    REQUIRE(a.frames[f].detections.size() == b.frames[f].detections.size());
    for (std::size_t d = 0; d < a.frames[f].detections.size(); ++d) {
      CHECK(a.frames[f].detections[d].pose.rotation.coeffs() ==
            b.frames[f].detections[d].pose.rotation.coeffs());
      CHECK(a.frames[f].detections[d].pose.translation ==
            b.frames[f].detections[d].pose.translation);
    }
  }
  double drift = 0.0;
  for (std::size_t i = 0; i < a.vio.size(); ++i) {
    CHECK(a.vio[i].pose.rotation.coeffs() == b.vio[i].pose.rotation.coeffs());
    CHECK(a.vio[i].twist.linear == b.vio[i].twist.linear);
    CHECK(a.vio[i].twist.angular == b.vio[i].twist.angular);
    drift = std::max(drift, (a.vio[i].pose.translation - b.vio[i].pose.translation).norm());
  }
  CHECK(drift > 0.0);

  // Toggling flips leaves the detection-noise draws aligned: the local noise
  // transform recovered from each measurement is identical either way.
  ScenarioConfig flip_on = slowSweep(1.0, 0.0);
  flip_on.noise = NoiseConfig{};
  flip_on.noise.flip_prob = 1.0;
  ScenarioConfig flip_off = flip_on;
  flip_off.noise.flip_prob = 0.0;
  const ScenarioStreams fa = mf::sim::generate(flip_on);
  const ScenarioStreams fb = mf::sim::generate(flip_off);
  const Trajectory traj = mf::sim::buildTrajectory(flip_on);
  const Posed tag_flip(Eigen::Quaterniond(0.0, 1.0, 0.0, 0.0), Eigen::Vector3d::Zero());
  for (std::size_t f = 0; f < fa.frames.size(); ++f) {
    const Posed world_in_cam = mf::inverse(traj.poseAt(fa.frames[f].capture_time));
    for (std::size_t d = 0; d < fa.frames[f].detections.size(); ++d) {
      const auto& da = fa.frames[f].detections[d];
      const auto& db = fb.frames[f].detections[d];
      const Posed exact = mf::compose(world_in_cam, tagWorld(flip_on, da.tag_id));
      const Posed noise_a = mf::compose(mf::inverse(mf::compose(exact, tag_flip)), da.pose);
      const Posed noise_b = mf::compose(mf::inverse(exact), db.pose);
      CHECK(mf::isApprox(noise_a, noise_b, 1e-12));
    }
  }
}

TEST_CASE("frustum culls by range and cone angle") {
  // 4 m overhead: outside the 3 m range.
  ScenarioConfig far = slowSweep(0.5, 0.0);
  far.trajectory.type = TrajectoryType::Static;
  far.trajectory.start_pose = lookingDown(0.0, 0.0, 4.0);
  for (const auto& frame : mf::sim::generate(far).frames) CHECK(frame.detections.empty());

  // 2.69 m away but 68 degrees off the optical axis: outside the cone.
  ScenarioConfig oblique = slowSweep(0.5, 0.0);
  oblique.trajectory.type = TrajectoryType::Static;
  oblique.trajectory.start_pose = lookingDown(2.5, 0.0, 1.0);
  for (const auto& frame : mf::sim::generate(oblique).frames) CHECK(frame.detections.empty());

  // Directly overhead at 1 m: everything visible.
  ScenarioConfig near = slowSweep(0.5, 0.0);
  near.trajectory.type = TrajectoryType::Static;
  near.trajectory.start_pose = lookingDown(0.0, 0.0, 1.0);
  for (const auto& frame : mf::sim::generate(near).frames) CHECK(frame.detections.size() == 4);
}

TEST_CASE("the peg-in-hole preset keeps the whole plate visible throughout") {
  ScenarioConfig config;
  config.trajectory.type = TrajectoryType::PegInHole;
  config.noise = zeroNoise();
  const ScenarioStreams streams = mf::sim::generate(config);
  REQUIRE(streams.frames.size() == 401);
  REQUIRE(streams.vio.size() == 3201);
  for (const auto& frame : streams.frames) {
    REQUIRE(frame.detections.size() == 4);
    CHECK(frame.detections.front().tag_id == 0);
  }
}

TEST_CASE("ideal conditions let every variant track exactly at its own cadence") {
  const ScenarioConfig config = slowSweep(2.0, 0.0);

  const auto ours = mf::sim::runScenario(config, Variant::Ours);
  REQUIRE(ours.size() == 51);
  for (const auto& rec : ours) {
    REQUIRE(rec.output.has_value());
    CHECK(rec.output->mode == mf::tracker::FusionMode::AllTags);
    CHECK(rec.visible_tags == std::vector<int>({0, 1, 2, 3}));
    CHECK(rec.step_runtime == 1.0 / config.vio_rate);
    const auto err = mf::poseDistance(rec.output->object_pose, rec.ground_truth);
    CHECK(err.translation_err < 1e-9);
    CHECK(err.rotation_err < 1e-9);
  }

  const auto baseline = mf::sim::runScenario(config, Variant::MultiART);
  REQUIRE(baseline.size() == 51);
  CHECK(maxTranslationErr(baseline, 0.0, 2.0) < 1e-9);  // zero latency: nothing to lose

  const auto ap2 = mf::sim::runScenario(config, Variant::AP2Like);
  REQUIRE(ap2.size() == 4);  // every 16th frame of 51
  for (std::size_t i = 0; i < ap2.size(); ++i) {
    CHECK(ap2[i].time == doctest::Approx(0.64 * static_cast<double>(i)).epsilon(1e-12));
    REQUIRE(ap2[i].output.has_value());
    CHECK(mf::poseDistance(ap2[i].output->object_pose, ap2[i].ground_truth).translation_err <
          1e-9);
  }
}

TEST_CASE("detector latency stales the baseline but not the compensated pipeline") {
  const ScenarioConfig config = slowSweep(2.0, 0.04);
  const double speed = config.trajectory.twist.linear.norm();

  const auto ours = mf::sim::runScenario(config, Variant::Ours);
  for (const auto& rec : ours) {
    REQUIRE(rec.output.has_value());
    CHECK(rec.output->delay_applied == doctest::Approx(0.04));
    CHECK(rec.step_runtime == 1.0 / config.vio_rate);
  }
  CHECK(maxTranslationErr(ours, 0.0, 2.0) < 1e-9);

  const auto baseline = mf::sim::runScenario(config, Variant::MultiART);
  double worst = 0.0;
  for (const auto& rec : baseline) {
    REQUIRE(rec.output.has_value());
    CHECK(rec.step_runtime == doctest::Approx(0.04));
    worst = std::max(worst,
                     mf::poseDistance(rec.output->object_pose, rec.ground_truth).translation_err);
  }
  // The stale output lags by latency * camera speed (plus a small rotation term).
  CHECK(worst > 0.5 * speed * 0.04);
  CHECK(worst < 3.0 * speed * 0.04);
}

TEST_CASE("vio bridging carries the estimate through a dropout window") {
  ScenarioConfig config = slowSweep(2.4, 0.04);
  config.dropout_windows.push_back({0.8, 1.6, {}});

  const auto ours = mf::sim::runScenario(config, Variant::Ours);
  CHECK(maxTranslationErr(ours, 0.0, 2.4) < 1e-9);
  bool saw_vio_only = false;
  for (const auto& rec : ours) {
    if (rec.time >= 0.9 && rec.time < 1.6) {
      CHECK(rec.visible_tags.empty());
      REQUIRE(rec.output.has_value());
      CHECK(rec.output->mode == mf::tracker::FusionMode::VioOnly);
      saw_vio_only = true;
    }
  }
  CHECK(saw_vio_only);

  const auto baseline = mf::sim::runScenario(config, Variant::MultiART);
  const double before = maxTranslationErr(baseline, 0.0, 0.8);
  const double inside = maxTranslationErr(baseline, 1.0, 1.6);
  CHECK(inside > 5.0 * before);  // the held pose drifts away from the truth
}

TEST_CASE("held objects force the baseline behaviour even for the full pipeline") {
  ScenarioConfig config = slowSweep(2.4, 0.04);
  config.objects.front().model.held = true;
  config.dropout_windows.push_back({0.8, 1.6, {}});

  const auto ours = mf::sim::runScenario(config, Variant::Ours);
  const auto baseline = mf::sim::runScenario(config, Variant::MultiART);
  REQUIRE(ours.size() == baseline.size());
  for (std::size_t i = 0; i < ours.size(); ++i) {
    CHECK(ours[i].output.has_value() == baseline[i].output.has_value());
    CHECK(ours[i].step_runtime == baseline[i].step_runtime);
    if (ours[i].output.has_value()) {
      CHECK(ours[i].output->object_pose.rotation.coeffs() ==
            baseline[i].output->object_pose.rotation.coeffs());
      CHECK(ours[i].output->object_pose.translation ==
            baseline[i].output->object_pose.translation);
    }
  }
}

TEST_CASE("foreign objects in the scene do not disturb the tracked rig") {
  ScenarioConfig config = slowSweep(1.0, 0.0);
  mf::scene::ObjectModel wrench;
  wrench.object_id = "wrench";
  wrench.target_tag_id = 10;
  wrench.tag_layout[10] = Posed();
  wrench.tag_layout[11] = Posed(Eigen::Quaterniond::Identity(), {0.05, 0.0, 0.0});
  wrench.object_from_target = Posed();
  config.objects.push_back({wrench, Posed(Eigen::Quaterniond::Identity(), {0.4, 0.0, 0.0})});

  const auto records = mf::sim::runScenario(config, Variant::Ours);
  for (const auto& rec : records) {
    for (const int id : rec.visible_tags) CHECK(id <= 3);
    REQUIRE(rec.output.has_value());
    CHECK(mf::poseDistance(rec.output->object_pose, rec.ground_truth).translation_err < 1e-9);
  }
}

TEST_CASE("scenario json round trip is lossless") {
  ScenarioConfig config = slowSweep(2.0, 0.12);
  config.seed = 42;
  config.ap2_slow_factor = 16.0;
  config.dropout_windows.push_back({3.0, 8.0, {1, 2}});
  config.noise = NoiseConfig{};
  config.noise.flip_prob = 0.01;
  config.frustum.max_range = 2.5;

  const nlohmann::json j = mf::sim::scenarioToJson(config);
  const ScenarioConfig back = mf::sim::scenarioFromJson(nlohmann::json::parse(j.dump()));
  CHECK(mf::sim::scenarioToJson(back).dump() == j.dump());

  CHECK(back.seed == 42);
  CHECK(back.duration == config.duration);
  CHECK(back.processing_delay == config.processing_delay);
  CHECK(back.trajectory.type == TrajectoryType::ConstantTwist);
  CHECK(back.trajectory.twist.linear == config.trajectory.twist.linear);
  REQUIRE(back.dropout_windows.size() == 1);
  CHECK(back.dropout_windows[0].tags == std::vector<int>({1, 2}));
  CHECK(back.noise.flip_prob == 0.01);
  CHECK(back.frustum.max_range == 2.5);
  REQUIRE(back.objects.size() == 1);
  CHECK(back.objects[0].model.object_id == "plate");

  // File-based round trip.
  const auto path = std::filesystem::temp_directory_path() / "mf_test_scenario.json";
  mf::sim::saveScenario(config, path.string());
  const ScenarioConfig loaded = mf::sim::loadScenario(path.string());
  CHECK(mf::sim::scenarioToJson(loaded).dump() == j.dump());
  std::filesystem::remove(path);
}

TEST_CASE("scenario parsing rejects malformed input") {
  ScenarioConfig config = slowSweep(2.0, 0.0);
  nlohmann::json good = mf::sim::scenarioToJson(config);

  nlohmann::json bad = good;
  bad["unexpected"] = 1;
  CHECK_THROWS_WITH_AS(mf::sim::scenarioFromJson(bad), doctest::Contains("unexpected"),
                       mf::ConfigError);

  bad = good;
  bad.erase("schema_version");
  CHECK_THROWS_AS(mf::sim::scenarioFromJson(bad), mf::ConfigError);

  bad = good;
  bad["seed"] = -3;
  CHECK_THROWS_WITH_AS(mf::sim::scenarioFromJson(bad), doctest::Contains("seed"), mf::ConfigError);

  bad = good;
  bad["seed"] = 1.5;
  CHECK_THROWS_AS(mf::sim::scenarioFromJson(bad), mf::ConfigError);

  bad = good;
  bad["trajectory"]["type"] = "spline";
  CHECK_THROWS_WITH_AS(mf::sim::scenarioFromJson(bad), doctest::Contains("type"), mf::ConfigError);

  bad = good;
  bad["vio_rate"] = 10.0;  // below the 25 Hz detection rate
  CHECK_THROWS_WITH_AS(mf::sim::scenarioFromJson(bad), doctest::Contains("vio_rate"),
                       mf::ConfigError);

  bad = good;
  bad["noise"]["flip_prob"] = 1.5;
  CHECK_THROWS_WITH_AS(mf::sim::scenarioFromJson(bad), doctest::Contains("flip_prob"),
                       mf::ConfigError);

  // Waypoints must cover the scenario duration.
  ScenarioConfig wp = slowSweep(2.0, 0.0);
  wp.trajectory.type = TrajectoryType::Waypoints;
  wp.trajectory.waypoints = {{0.0, lookingDown(0.0, 0.0, 1.2)}, {1.0, lookingDown(0.1, 0.0, 1.2)}};
  CHECK_THROWS_WITH_AS(mf::sim::validateScenario(wp), doctest::Contains("waypoints"),
                       mf::ConfigError);
}

TEST_CASE("the peg-in-hole preset provides its own plate") {
  ScenarioConfig config;
  config.trajectory.type = TrajectoryType::PegInHole;
  CHECK(config.objects.empty());
  const ScenarioConfig expanded = mf::sim::expandScenario(config);
  REQUIRE(expanded.objects.size() == 1);
  CHECK(expanded.objects[0].model.object_id == "plate");
  CHECK(expanded.objects[0].model.tag_layout.size() == 4);

  // A non-preset scenario with no objects is an error.
  ScenarioConfig empty;
  empty.trajectory.type = TrajectoryType::Static;
  empty.trajectory.start_pose = lookingDown(0.0, 0.0, 1.0);
  CHECK_THROWS_WITH_AS(mf::sim::validateScenario(empty), doctest::Contains("objects"),
                       mf::ConfigError);
}

TEST_CASE("variant names parse and print") {
  CHECK(mf::sim::variantFromString("Ours") == Variant::Ours);
  CHECK(mf::sim::variantFromString("MultiART") == Variant::MultiART);
  CHECK(mf::sim::variantFromString("AP2Like") == Variant::AP2Like);
  CHECK_THROWS_AS(mf::sim::variantFromString("Fastest"), mf::ConfigError);
  CHECK(std::string(mf::sim::toString(Variant::Ours)) == "Ours");
}
