#include "mf/eval/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace mf::eval {

Eigen::Vector3d eulerZYX(const Eigen::Matrix3d& R) {
  // R = Rz(yaw) Ry(pitch) Rx(roll); pitch = asin(-R20) with the usual clamp.
  const double pitch = std::asin(std::clamp(-R(2, 0), -1.0, 1.0));
  double roll, yaw;
  if (std::abs(R(2, 0)) < 1.0 - 1e-12) {
    roll = std::atan2(R(2, 1), R(2, 2));
    yaw = std::atan2(R(1, 0), R(0, 0));
  } else {
    // Gimbal lock: fold everything into roll.
    roll = std::atan2(-R(1, 2), R(1, 1));
    yaw = 0.0;
  }
  return {roll, pitch, yaw};
}

MetricsReport computeMetrics(const std::vector<sim::TrackRecord>& records) {
  std::vector<const sim::TrackRecord*> ordered;
  ordered.reserve(records.size());
  for (const sim::TrackRecord& r : records) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const sim::TrackRecord* a, const sim::TrackRecord* b) {
                     return a->time < b->time;
                   });

  MetricsReport report;
  Eigen::Vector3d sq_trans = Eigen::Vector3d::Zero();
  Eigen::Vector3d sq_rot = Eigen::Vector3d::Zero();
  double run_sum = 0.0, run_sq_sum = 0.0;
  long dropout_count = 0;

  const Posed* held = nullptr;
  long scored = 0;
  for (const sim::TrackRecord* record : ordered) {
    if (record->visible_tags.empty()) ++dropout_count;
    run_sum += record->step_runtime;
    run_sq_sum += record->step_runtime * record->step_runtime;

    if (record->output.has_value()) held = &record->output->object_pose;
    if (held == nullptr) continue;  // nothing emitted yet

    const Posed& est = *held;
    const Posed& gt = record->ground_truth;
    const Eigen::Vector3d dt = est.translation - gt.translation;
    sq_trans += dt.cwiseProduct(dt);
    const Eigen::Matrix3d rel =
        (gt.rotation.conjugate() * est.rotation).toRotationMatrix();
    const Eigen::Vector3d angles = eulerZYX(rel);
    sq_rot += angles.cwiseProduct(angles);
    ++scored;
  }

  if (scored == 0) throw NoEstimatesError("compute_metrics: no record carries an estimate");

  report.n_steps = scored;
  report.e_x = std::sqrt(sq_trans.x() / static_cast<double>(scored));
  report.e_y = std::sqrt(sq_trans.y() / static_cast<double>(scored));
  report.e_z = std::sqrt(sq_trans.z() / static_cast<double>(scored));
  report.e_roll = std::sqrt(sq_rot.x() / static_cast<double>(scored));
  report.e_pitch = std::sqrt(sq_rot.y() / static_cast<double>(scored));
  report.e_yaw = std::sqrt(sq_rot.z() / static_cast<double>(scored));

  const double n = static_cast<double>(records.size());
  if (!records.empty()) {
    report.t_run_mean = run_sum / n;
    const double var = std::max(0.0, run_sq_sum / n - report.t_run_mean * report.t_run_mean);
    report.t_run_std = std::sqrt(var);
    report.dropout_fraction = static_cast<double>(dropout_count) / n;
  }
  return report;
}

}  // namespace mf::eval
