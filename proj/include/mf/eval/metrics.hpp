#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mf/sim/run.hpp"

namespace mf::eval {

/// Table-style error summary of one run. Translation residuals are taken per
/// camera axis; rotation residuals are the ZYX Euler angles (roll, pitch, yaw)
/// of gt^-1 * est. Records without an output score against the last emitted
/// estimate (held); records before the first estimate are skipped.
struct MetricsReport {
  double e_x = 0.0, e_y = 0.0, e_z = 0.0;                 // RMSE [m]
  double e_roll = 0.0, e_pitch = 0.0, e_yaw = 0.0;        // RMSE [rad]
  double t_run_mean = 0.0, t_run_std = 0.0;               // modeled staleness [s]
  long n_steps = 0;                                       // scored records
  double dropout_fraction = 0.0;                          // frames with no tags
};

/// (roll, pitch, yaw) with R = Rz(yaw) * Ry(pitch) * Rx(roll).
Eigen::Vector3d eulerZYX(const Eigen::Matrix3d& R);

/// Throws NoEstimatesError when no record carries an output. Record order does
/// not matter; records are scored in time order.
MetricsReport computeMetrics(const std::vector<sim::TrackRecord>& records);

}  // namespace mf::eval
