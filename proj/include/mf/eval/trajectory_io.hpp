#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mf/eval/metrics.hpp"
#include "mf/sim/run.hpp"

namespace mf::eval {

/// CSV schema (one row per record, "%.17g" floats, exact round-trip):
///   time, gt_x, gt_y, gt_z, gt_qw, gt_qx, gt_qy, gt_qz,
///   est_x, est_y, est_z, est_qw, est_qx, est_qy, est_qz, mode, visible_count
/// Rows without an output repeat the held estimate with mode "none" ("nan"
/// before the first estimate). Raises IoError on unwritable paths.
void exportTrajectories(const std::vector<sim::TrackRecord>& records, const std::string& path);

/// Inverse of exportTrajectories up to what the CSV stores: step runtimes are
/// not serialized and visible tag ids collapse to their count.
std::vector<sim::TrackRecord> importTrajectories(const std::string& path);

nlohmann::json reportToJson(const MetricsReport& report);
MetricsReport reportFromJson(const nlohmann::json& j);

/// Aligned-column text table, one variant per column, rows in the usual
/// benchmark order (per-axis translation, per-angle rotation, runtime).
std::string renderTable(const std::vector<std::pair<std::string, MetricsReport>>& columns);

}  // namespace mf::eval
