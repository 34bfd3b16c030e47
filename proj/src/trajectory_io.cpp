#include "mf/eval/trajectory_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mf/serialization.hpp"

namespace mf::eval {

namespace {

constexpr const char* kHeader =
    "time,gt_x,gt_y,gt_z,gt_qw,gt_qx,gt_qy,gt_qz,"
    "est_x,est_y,est_z,est_qw,est_qx,est_qy,est_qz,mode,visible_count";

void appendPose(std::string& line, const Posed& pose) {
  line += ',' + formatDouble(pose.translation.x());
  line += ',' + formatDouble(pose.translation.y());
  line += ',' + formatDouble(pose.translation.z());
  line += ',' + formatDouble(pose.rotation.w());
  line += ',' + formatDouble(pose.rotation.x());
  line += ',' + formatDouble(pose.rotation.y());
  line += ',' + formatDouble(pose.rotation.z());
}

tracker::FusionMode modeFromString(const std::string& s) {
  if (s == "AllTags") return tracker::FusionMode::AllTags;
  if (s == "PartialWithTarget") return tracker::FusionMode::PartialWithTarget;
  if (s == "PartialWithoutTarget") return tracker::FusionMode::PartialWithoutTarget;
  if (s == "VioOnly") return tracker::FusionMode::VioOnly;
  throw ConfigError("trajectory csv: unknown mode \"" + s + "\"");
}

}  // namespace

void exportTrajectories(const std::vector<sim::TrackRecord>& records, const std::string& path) {
  std::string out(kHeader);
  out += '\n';
  const Posed* held = nullptr;
  for (const sim::TrackRecord& record : records) {
    if (record.output.has_value()) held = &record.output->object_pose;
    std::string line = formatDouble(record.time);
    appendPose(line, record.ground_truth);
    if (held != nullptr) {
      appendPose(line, *held);
    } else {
      for (int i = 0; i < 7; ++i) line += ",nan";
    }
    line += ',';
    line += record.output.has_value() ? tracker::toString(record.output->mode) : "none";
    line += ',' + std::to_string(record.visible_tags.size());
    out += line;
    out += '\n';
  }
  writeTextFile(path, out);
}

std::vector<sim::TrackRecord> importTrajectories(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + ": empty file");
  if (line != kHeader) throw ConfigError(path + ": unexpected header");

  std::vector<sim::TrackRecord> records;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 17) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 17 fields, got " +
                        std::to_string(fields.size()));
    }
    auto num = [&](std::size_t i) { return std::strtod(fields[i].c_str(), nullptr); };

    sim::TrackRecord record;
    record.time = num(0);
    record.ground_truth =
        Posed(Eigen::Quaterniond(num(4), num(5), num(6), num(7)), {num(1), num(2), num(3)});
    const std::string& mode = fields[15];
    if (mode != "none") {
      tracker::TrackerOutput output;
      output.object_pose =
          Posed(Eigen::Quaterniond(num(11), num(12), num(13), num(14)), {num(8), num(9), num(10)});
      output.target_pose = output.object_pose;
      output.mode = modeFromString(mode);
      output.estimate_time = record.time;
      record.output = output;
    }
    const int visible = std::atoi(fields[16].c_str());
    record.visible_tags.assign(static_cast<std::size_t>(std::max(0, visible)), -1);
    records.push_back(std::move(record));
  }
  return records;
}

nlohmann::json reportToJson(const MetricsReport& report) {
  return nlohmann::json{{"euler_convention", "ZYX"},
                        {"e_x_rmse", report.e_x},
                        {"e_y_rmse", report.e_y},
                        {"e_z_rmse", report.e_z},
                        {"e_roll_rmse", report.e_roll},
                        {"e_pitch_rmse", report.e_pitch},
                        {"e_yaw_rmse", report.e_yaw},
                        {"t_run_mean", report.t_run_mean},
                        {"t_run_std", report.t_run_std},
                        {"n_steps", report.n_steps},
                        {"dropout_fraction", report.dropout_fraction}};
}

MetricsReport reportFromJson(const nlohmann::json& j) {
  const std::string ctx = "metrics";
  requireObject(j, ctx);
  checkKeys(j,
            {"euler_convention", "e_x_rmse", "e_y_rmse", "e_z_rmse", "e_roll_rmse",
             "e_pitch_rmse", "e_yaw_rmse", "t_run_mean", "t_run_std", "n_steps",
             "dropout_fraction"},
            ctx);
  MetricsReport report;
  report.e_x = requireNumber(j, "e_x_rmse", ctx);
  report.e_y = requireNumber(j, "e_y_rmse", ctx);
  report.e_z = requireNumber(j, "e_z_rmse", ctx);
  report.e_roll = requireNumber(j, "e_roll_rmse", ctx);
  report.e_pitch = requireNumber(j, "e_pitch_rmse", ctx);
  report.e_yaw = requireNumber(j, "e_yaw_rmse", ctx);
  report.t_run_mean = requireNumber(j, "t_run_mean", ctx);
  report.t_run_std = requireNumber(j, "t_run_std", ctx);
  report.n_steps = static_cast<long>(requireNumber(j, "n_steps", ctx));
  report.dropout_fraction = requireNumber(j, "dropout_fraction", ctx);
  return report;
}

std::string renderTable(const std::vector<std::pair<std::string, MetricsReport>>& columns) {
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return std::string(buf);
  };

  struct Row {
    std::string label;
    std::vector<std::string> cells;
  };
  std::vector<Row> rows = {{"e_x_rmse [m]", {}},      {"e_y_rmse [m]", {}},
                           {"e_z_rmse [m]", {}},      {"e_roll_rmse [rad]", {}},
                           {"e_pitch_rmse [rad]", {}}, {"e_yaw_rmse [rad]", {}},
                           {"t_run [s]", {}}};
  for (const auto& [name, r] : columns) {
    rows[0].cells.push_back(fmt(r.e_x));
    rows[1].cells.push_back(fmt(r.e_y));
    rows[2].cells.push_back(fmt(r.e_z));
    rows[3].cells.push_back(fmt(r.e_roll));
    rows[4].cells.push_back(fmt(r.e_pitch));
    rows[5].cells.push_back(fmt(r.e_yaw));
    rows[6].cells.push_back(fmt(r.t_run_mean) + " +- " + fmt(r.t_run_std));
  }

  std::vector<std::size_t> width(columns.size() + 1, 0);
  width[0] = std::string("metric").size();
  for (const Row& row : rows) width[0] = std::max(width[0], row.label.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    width[c + 1] = columns[c].first.size();
    for (const Row& row : rows) width[c + 1] = std::max(width[c + 1], row.cells[c].size());
  }

  auto pad = [](const std::string& s, std::size_t w) {
    std::string out = s;
    out.resize(std::max(w, s.size()), ' ');
    return out;
  };

  std::string out = pad("metric", width[0]);
  for (std::size_t c = 0; c < columns.size(); ++c) out += "  " + pad(columns[c].first, width[c + 1]);
  out += '\n';
  for (const Row& row : rows) {
    out += pad(row.label, width[0]);
    for (std::size_t c = 0; c < row.cells.size(); ++c) out += "  " + pad(row.cells[c], width[c + 1]);
    out += '\n';
  }
  return out;
}

}  // namespace mf::eval
