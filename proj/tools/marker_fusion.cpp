// Command-line front end: scenario simulation, variant evaluation runs and
// object-database inspection. Exit codes: 0 success, 2 config/validation
// error, 3 missing input / unwritable output, 4 internal error.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mf/errors.hpp"
#include "mf/eval/metrics.hpp"
#include "mf/eval/trajectory_io.hpp"
#include "mf/scene/object_model.hpp"
#include "mf/scene/scene_graph.hpp"
#include "mf/serialization.hpp"
#include "mf/sim/generate.hpp"
#include "mf/sim/run.hpp"
#include "mf/sim/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void logLine(const std::string& msg) { std::cerr << "[marker_fusion] " << msg << "\n"; }

std::string poseFields(const mf::Posed& pose) {
  std::string out;
  out += mf::formatDouble(pose.translation.x()) + ',' + mf::formatDouble(pose.translation.y()) +
         ',' + mf::formatDouble(pose.translation.z());
  out += ',' + mf::formatDouble(pose.rotation.w()) + ',' + mf::formatDouble(pose.rotation.x()) +
         ',' + mf::formatDouble(pose.rotation.y()) + ',' + mf::formatDouble(pose.rotation.z());
  return out;
}

void ensureDirectory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw mf::IoError("cannot create output directory " + dir.string());
  }
}

// ---------------------------------------------------------------- simulate --

int cmdSimulate(const std::string& scenario_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed_override) {
  mf::sim::ScenarioConfig config = mf::sim::loadScenario(scenario_path);
  if (seed_override.has_value()) config.seed = *seed_override;
  const mf::sim::ScenarioConfig expanded = mf::sim::expandScenario(config);
  const mf::sim::ScenarioStreams streams = mf::sim::generate(expanded);

  ensureDirectory(out_dir);

  {
    std::string csv = "capture_time,available_time,tag_id,x,y,z,qw,qx,qy,qz\n";
    for (const auto& frame : streams.frames) {
      if (frame.detections.empty()) {
        // Keep empty frames visible in the stream: one marker row per frame.
        csv += mf::formatDouble(frame.capture_time) + ',' +
               mf::formatDouble(frame.available_time) + ",-1,nan,nan,nan,nan,nan,nan,nan\n";
        continue;
      }
      for (const auto& det : frame.detections) {
        csv += mf::formatDouble(det.capture_time) + ',' + mf::formatDouble(det.available_time) +
               ',' + std::to_string(det.tag_id) + ',' + poseFields(det.pose) + '\n';
      }
    }
    mf::writeTextFile((fs::path(out_dir) / "detections.csv").string(), csv);
  }

  {
    std::string csv = "time,x,y,z,qw,qx,qy,qz,vx,vy,vz,wx,wy,wz\n";
    for (const auto& sample : streams.vio) {
      csv += mf::formatDouble(sample.time) + ',' + poseFields(sample.pose);
      csv += ',' + mf::formatDouble(sample.twist.linear.x()) + ',' +
             mf::formatDouble(sample.twist.linear.y()) + ',' +
             mf::formatDouble(sample.twist.linear.z());
      csv += ',' + mf::formatDouble(sample.twist.angular.x()) + ',' +
             mf::formatDouble(sample.twist.angular.y()) + ',' +
             mf::formatDouble(sample.twist.angular.z()) + '\n';
    }
    mf::writeTextFile((fs::path(out_dir) / "vio.csv").string(), csv);
  }

  {
    std::string csv = "time,cam_x,cam_y,cam_z,cam_qw,cam_qx,cam_qy,cam_qz";
    for (std::size_t i = 0; i < expanded.objects.size(); ++i) {
      const std::string p = "obj" + std::to_string(i) + "_";
      csv += ',' + p + "x," + p + "y," + p + "z," + p + "qw," + p + "qx," + p + "qy," + p + "qz";
    }
    csv += '\n';
    for (const auto& sample : streams.truth) {
      csv += mf::formatDouble(sample.time) + ',' + poseFields(sample.camera_in_world);
      for (const auto& pose : sample.objects_in_hc) csv += ',' + poseFields(pose);
      csv += '\n';
    }
    mf::writeTextFile((fs::path(out_dir) / "ground_truth.csv").string(), csv);
  }

  std::cout << "simulated " << streams.frames.size() << " frames, " << streams.vio.size()
            << " vio samples (seed " << expanded.seed << ") -> " << out_dir << "\n";
  return 0;
}

// --------------------------------------------------------------------- run --

struct RunManifest {
  mf::sim::ScenarioConfig scenario;
  std::vector<mf::sim::Variant> variants;
  std::vector<std::uint64_t> seeds;
  std::string output_dir;
  bool emit_scene_graph = false;
  mf::scene::SceneGraphHierarchy hierarchy = mf::scene::SceneGraphHierarchy::Flat;
};

RunManifest loadManifest(const std::string& path) {
  const json j = mf::loadJsonFile(path);
  const std::string ctx = "manifest";
  mf::requireObject(j, ctx);
  mf::checkKeys(j,
                {"schema_version", "scenario", "variants", "seeds", "output_dir",
                 "emit_scene_graph", "scene_graph_hierarchy"},
                ctx);
  if (mf::requireNumber(j, "schema_version", ctx) != 1.0) {
    throw mf::ConfigError("manifest.schema_version: unsupported version");
  }

  RunManifest manifest;
  const fs::path base = fs::path(path).parent_path();

  const json& variants = mf::requireKey(j, "variants", ctx);
  if (!variants.is_array() || variants.empty()) {
    throw mf::ConfigError("manifest.variants: expected a non-empty array");
  }
  for (const auto& v : variants) {
    if (!v.is_string()) throw mf::ConfigError("manifest.variants: expected variant names");
    manifest.variants.push_back(mf::sim::variantFromString(v.get<std::string>()));
  }

  const json& seeds = mf::requireKey(j, "seeds", ctx);
  if (!seeds.is_array() || seeds.empty()) {
    throw mf::ConfigError("manifest.seeds: expected a non-empty array");
  }
  for (const auto& s : seeds) {
    if (!s.is_number_integer() && !s.is_number_unsigned()) {
      throw mf::ConfigError("manifest.seeds: expected non-negative integers");
    }
    if (s.is_number_integer() && s.get<std::int64_t>() < 0) {
      throw mf::ConfigError("manifest.seeds: expected non-negative integers");
    }
    manifest.seeds.push_back(s.get<std::uint64_t>());
  }

  const fs::path out = mf::requireString(j, "output_dir", ctx);
  manifest.output_dir = out.is_absolute() ? out.string() : (base / out).string();
  manifest.emit_scene_graph = mf::boolOr(j, "emit_scene_graph", false, ctx);
  if (j.contains("scene_graph_hierarchy")) {
    const std::string h = mf::requireString(j, "scene_graph_hierarchy", ctx);
    if (h == "flat") {
      manifest.hierarchy = mf::scene::SceneGraphHierarchy::Flat;
    } else if (h == "nested") {
      manifest.hierarchy = mf::scene::SceneGraphHierarchy::Nested;
    } else {
      throw mf::ConfigError("manifest.scene_graph_hierarchy: expected \"flat\" or \"nested\"");
    }
  }

  // Resolve the scenario last so manifest shape errors surface even when the
  // referenced file is missing.
  const json& scenario = mf::requireKey(j, "scenario", ctx);
  if (scenario.is_string()) {
    const fs::path sp = scenario.get<std::string>();
    manifest.scenario =
        mf::sim::loadScenario(sp.is_absolute() ? sp.string() : (base / sp).string());
  } else {
    manifest.scenario = mf::sim::scenarioFromJson(scenario);
  }
  return manifest;
}

unsigned workerCount(std::size_t jobs) {
  unsigned n = 0;
  if (const char* env = std::getenv("MARKER_FUSION_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed < 1) {
      throw mf::ConfigError("MARKER_FUSION_THREADS: expected a positive integer");
    }
    n = static_cast<unsigned>(parsed);
  } else {
    n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, jobs));
}

void emitSceneGraph(const RunManifest& manifest, const mf::sim::ScenarioConfig& config,
                    const std::vector<mf::sim::TrackRecord>& records, const std::string& path) {
  // Placements beyond the tracked one carry no tracker; display them at
  // simulated ground truth.
  const mf::sim::ScenarioStreams streams = mf::sim::generate(config);
  std::string out;
  for (const auto& record : records) {
    if (!record.output.has_value()) continue;
    std::vector<mf::scene::SceneObject> objects;
    objects.push_back({config.objects.front().model.object_id, record.output->object_pose});
    const auto tick = static_cast<std::size_t>(std::llround(record.time * config.vio_rate));
    if (tick < streams.truth.size()) {
      for (std::size_t i = 1; i < config.objects.size(); ++i) {
        objects.push_back(
            {config.objects[i].model.object_id, streams.truth[tick].objects_in_hc[i]});
      }
    }
    const auto nodes = mf::scene::exportSceneGraph(objects, manifest.hierarchy);
    out += json{{"time", record.time}, {"nodes", mf::scene::sceneGraphToJson(nodes)}}.dump();
    out += '\n';
  }
  mf::writeTextFile(path, out);
}

struct JobResult {
  mf::sim::Variant variant;
  std::uint64_t seed = 0;
  std::optional<mf::eval::MetricsReport> report;
  std::string error;
};

int cmdRun(const std::string& manifest_path) {
  const RunManifest manifest = loadManifest(manifest_path);
  const mf::sim::ScenarioConfig base_config = mf::sim::expandScenario(manifest.scenario);
  ensureDirectory(manifest.output_dir);

  struct Job {
    mf::sim::Variant variant;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto variant : manifest.variants) {
    for (const auto seed : manifest.seeds) jobs.push_back({variant, seed});
  }

  std::vector<JobResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  const unsigned workers = workerCount(jobs.size());

  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      JobResult& result = results[i];
      result.variant = jobs[i].variant;
      result.seed = jobs[i].seed;
      try {
        mf::sim::ScenarioConfig config = base_config;
        config.seed = jobs[i].seed;
        const auto records = mf::sim::runScenario(config, jobs[i].variant);
        const auto report = mf::eval::computeMetrics(records);

        const std::string stem = std::string(mf::sim::toString(jobs[i].variant)) + "_seed" +
                                 std::to_string(jobs[i].seed);
        const fs::path dir(manifest.output_dir);
        mf::eval::exportTrajectories(records, (dir / ("trajectory_" + stem + ".csv")).string());
        mf::writeTextFile((dir / ("metrics_" + stem + ".json")).string(),
                          mf::eval::reportToJson(report).dump(2) + "\n");
        if (manifest.emit_scene_graph) {
          emitSceneGraph(manifest, config, records,
                         (dir / ("scene_graph_" + stem + ".jsonl")).string());
        }
        result.report = report;
      } catch (const std::exception& e) {
        result.error = e.what();
      }
    }
  };

  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  bool any_failed = false;
  for (const JobResult& result : results) {
    if (!result.error.empty()) {
      any_failed = true;
      logLine(std::string("variant ") + mf::sim::toString(result.variant) + " seed " +
              std::to_string(result.seed) + " failed: " + result.error);
    }
  }

  // Seed-averaged summary per variant, columns in the usual benchmark order.
  const mf::sim::Variant column_order[] = {mf::sim::Variant::AP2Like, mf::sim::Variant::MultiART,
                                           mf::sim::Variant::Ours};
  std::vector<std::pair<std::string, mf::eval::MetricsReport>> columns;
  json summary = json::object();
  for (const auto variant : column_order) {
    mf::eval::MetricsReport mean;
    long count = 0;
    for (const JobResult& result : results) {
      if (result.variant != variant || !result.report.has_value()) continue;
      const auto& r = *result.report;
      mean.e_x += r.e_x;
      mean.e_y += r.e_y;
      mean.e_z += r.e_z;
      mean.e_roll += r.e_roll;
      mean.e_pitch += r.e_pitch;
      mean.e_yaw += r.e_yaw;
      mean.t_run_mean += r.t_run_mean;
      mean.t_run_std += r.t_run_std;
      mean.dropout_fraction += r.dropout_fraction;
      mean.n_steps += r.n_steps;
      ++count;
    }
    if (count == 0) continue;
    const double inv = 1.0 / static_cast<double>(count);
    mean.e_x *= inv;
    mean.e_y *= inv;
    mean.e_z *= inv;
    mean.e_roll *= inv;
    mean.e_pitch *= inv;
    mean.e_yaw *= inv;
    mean.t_run_mean *= inv;
    mean.t_run_std *= inv;
    mean.dropout_fraction *= inv;
    columns.emplace_back(mf::sim::toString(variant), mean);
    summary[mf::sim::toString(variant)] = mf::eval::reportToJson(mean);
  }

  if (!columns.empty()) {
    const std::string table = mf::eval::renderTable(columns);
    mf::writeTextFile((fs::path(manifest.output_dir) / "table.txt").string(), table);
    mf::writeTextFile((fs::path(manifest.output_dir) / "summary.json").string(),
                      summary.dump(2) + "\n");
    std::cout << table;
  }

  return any_failed ? 4 : 0;
}

// ----------------------------------------------------------------- objects --

int cmdObjects(const std::string& action, const std::string& db_path) {
  const auto models = mf::scene::loadObjectDatabase(db_path);
  if (action == "validate") {
    std::cout << "ok: " << models.size() << " object(s) valid\n";
    return 0;
  }
  for (const auto& model : models) {
    std::cout << "object " << model.object_id << ": target tag " << model.target_tag_id << ", "
              << model.tag_layout.size() << " tags, mesh \"" << model.display_mesh_ref
              << "\", held " << (model.held ? "true" : "false") << "\n";
    for (const auto& [id, pose] : model.tag_layout) {
      std::cout << "  tag " << id << ": " << poseFields(pose) << "\n";
    }
    for (const auto& [id, pose] : model.tag_layout) {
      if (id == model.target_tag_id) continue;
      std::cout << "  relative " << id << "->target: "
                << poseFields(mf::scene::layoutRelative(model, id)) << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-fiducial object localization toolkit"};
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "generate detection/VIO/truth streams");
  std::string scenario_path, out_dir;
  std::uint64_t seed_value = 0;
  simulate->add_option("--scenario", scenario_path, "scenario JSON")->required();
  simulate->add_option("--out", out_dir, "output directory")->required();
  auto* seed_opt = simulate->add_option("--seed", seed_value, "override the scenario seed");

  auto* run = app.add_subcommand("run", "evaluate variants over a scenario");
  std::string manifest_path;
  run->add_option("--manifest", manifest_path, "run manifest JSON")->required();

  auto* objects = app.add_subcommand("objects", "inspect an object database");
  std::string action, db_path;
  objects->add_option("action", action, "validate | show")
      ->required()
      ->check(CLI::IsMember({"validate", "show"}));
  objects->add_option("--db", db_path, "object database JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) {
      std::optional<std::uint64_t> seed;
      if (seed_opt->count() > 0) seed = seed_value;
      return cmdSimulate(scenario_path, out_dir, seed);
    }
    if (run->parsed()) return cmdRun(manifest_path);
    if (objects->parsed()) return cmdObjects(action, db_path);
  } catch (const mf::ConfigError& e) {
    logLine(std::string("config error: ") + e.what());
    return 2;
  } catch (const mf::IoError& e) {
    logLine(std::string("io error: ") + e.what());
    return 3;
  } catch (const std::exception& e) {
    logLine(std::string("internal error: ") + e.what());
    return 4;
  }
  return 2;
}
