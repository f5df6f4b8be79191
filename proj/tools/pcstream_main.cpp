// pcstream: command-line front end for the tiled point-cloud streaming
// planner.  Subcommands generate synthetic scenarios, partition captured
// frames, plan a session, replay a plan, and sweep the device/bandwidth
// comparison grid.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcv/allocator.hpp"
#include "pcv/dynamics.hpp"
#include "pcv/errors.hpp"
#include "pcv/io.hpp"
#include "pcv/manifest.hpp"
#include "pcv/partition.hpp"
#include "pcv/plan.hpp"
#include "pcv/ply.hpp"
#include "pcv/scenegen.hpp"
#include "pcv/traces.hpp"
#include "pcv/visibility.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

struct CommonOptions {
  std::string manifest_path;
  std::string bw_trace_path;
  std::string pose_trace_path;
  int nc = 4;
  double cu1 = -1;  // < 0: calibrate from the scenario
  double tau = 1.0;
  double buffer_s = 2.0;
  std::string mode = "horizon";
  std::uint64_t seed = 3;
  std::string out_dir = ".";
};

struct SceneOptions {
  int gofs = 6;
  int frames_per_gof = 10;
  double fps = 30;
  int grid_n = 2;
  int grid_m = 2;
  int grid_h = 6;
  int levels = 5;
  int points = 50000;
  double bandwidth_mbps = 72.2;
};

pcv::SceneParams scene_params(const CommonOptions& common, const SceneOptions& scene) {
  pcv::SceneParams params;
  params.seed = common.seed;
  params.gof_count = scene.gofs;
  params.frames_per_gof = scene.frames_per_gof;
  params.fps = scene.fps;
  params.grid = {scene.grid_n, scene.grid_m, scene.grid_h};
  params.quality_levels = scene.levels;
  params.points_per_frame = scene.points;
  params.bandwidth_mbps = scene.bandwidth_mbps;
  return params;
}

// A scenario ready to plan against: manifest plus per-GOF traces.
struct Scenario {
  pcv::VideoManifest manifest;
  pcv::ScenarioTraces traces;
};

Scenario load_or_generate(const CommonOptions& common, const SceneOptions& scene) {
  Scenario scenario;
  if (!common.manifest_path.empty()) {
    scenario.manifest = pcv::load_manifest(common.manifest_path);
    if (common.bw_trace_path.empty() || common.pose_trace_path.empty())
      throw pcv::ValidationError("--manifest requires --bw-trace and --pose-trace");
    scenario.traces = pcv::load_traces(common.bw_trace_path, common.pose_trace_path,
                                       scenario.manifest.gof_count());
  } else {
    const pcv::SceneParams params = scene_params(common, scene);
    const auto frames = pcv::generate_frames(params);
    scenario.manifest =
        pcv::synthesize_manifest(frames, params.frames_per_gof, params.fps, params.grid,
                                 params.height_axis, pcv::default_model(params.quality_levels));
    scenario.traces = pcv::default_traces(params);
  }
  return scenario;
}

pcv::DeviceProfile make_device(const Scenario& scenario, const pcv::BinaryMatrix& visibility,
                               const CommonOptions& common) {
  pcv::DeviceProfile device;
  device.core_count = common.nc;
  device.per_core_capacity = common.cu1 >= 0
                                 ? common.cu1
                                 : pcv::default_per_core_capacity(scenario.manifest, visibility);
  device.efficiency = common.tau;
  pcv::validate(device);
  return device;
}

// Fallback when no visible tile carries quality weight: every visible slot
// gets the raw top level, which scores full quality by convention.
pcv::Plan degenerate_plan(const pcv::VideoManifest& manifest, const pcv::BinaryMatrix& visibility) {
  pcv::Plan plan;
  for (int g = 1; g <= manifest.gof_count(); ++g)
    for (int k = 1; k <= manifest.tile_count(); ++k)
      if (visibility(g - 1, k - 1))
        plan.set(g, k, {pcv::Form::Raw, manifest.quality_levels});
  return plan;
}

struct SchemeRun {
  pcv::SolveStatus status = pcv::SolveStatus::Infeasible;
  pcv::Plan plan;
};

SchemeRun solve_horizon(const Scenario& scenario, const pcv::DeviceProfile& device,
                        double buffer_s, bool compressed_only) {
  const pcv::BinaryMatrix visibility = pcv::compute_visibility(scenario.manifest, scenario.traces);
  const pcv::WeightSet weights =
      pcv::compute_weights(scenario.manifest, scenario.traces, visibility);
  SchemeRun run;
  try {
    const pcv::ProblemInstance problem = pcv::build_problem(
        scenario.manifest, scenario.traces, device, visibility, weights, buffer_s);
    const pcv::Solution solution =
        compressed_only ? pcv::solve_compressed_only(problem) : pcv::branch_and_bound(problem);
    run.status = solution.status;
    run.plan = solution.plan;
  } catch (const pcv::NoVisibleTiles&) {
    run.status = pcv::SolveStatus::Optimal;
    run.plan = degenerate_plan(scenario.manifest, visibility);
  }
  return run;
}

// Re-plans at every GOF boundary: only the current buffer level and the
// current bandwidth sample are trusted, future bandwidth is extrapolated as
// constant, and only the first GOF of each tail solution is committed.
SchemeRun solve_online(const Scenario& scenario, const pcv::DeviceProfile& device,
                       double buffer_s, bool compressed_only) {
  const int gofs = scenario.manifest.gof_count();
  const double ti = scenario.manifest.gof_duration_s();
  const double capacity = device.total_capacity();

  SchemeRun run;
  run.status = pcv::SolveStatus::Optimal;
  double prefix_s = 0;  // running sum of committed per-slot times
  for (int g = 1; g <= gofs; ++g) {
    pcv::VideoManifest tail;
    tail.fps = scenario.manifest.fps;
    tail.grid = scenario.manifest.grid;
    tail.quality_levels = scenario.manifest.quality_levels;
    for (int j = g; j <= gofs; ++j) {
      pcv::GofManifest gof = scenario.manifest.gofs[static_cast<std::size_t>(j - 1)];
      gof.gof_index = j - g + 1;
      tail.gofs.push_back(std::move(gof));
    }
    const double bw = scenario.traces.bandwidth_mbps[g - 1];
    pcv::ScenarioTraces forecast;
    forecast.bandwidth_mbps = pcv::VecX::Constant(gofs - g + 1, bw);
    forecast.poses.assign(scenario.traces.poses.begin() + (g - 1), scenario.traces.poses.end());

    const double buffer_now = (buffer_s + (g - 1) * ti) - prefix_s;
    const pcv::BinaryMatrix visibility = pcv::compute_visibility(tail, forecast);
    const pcv::WeightSet weights = pcv::compute_weights(tail, forecast, visibility);

    pcv::Plan head;  // the committed slice: tail GOF 1 only
    try {
      const pcv::ProblemInstance problem =
          pcv::build_problem(tail, forecast, device, visibility, weights, buffer_now);
      const pcv::Solution solution =
          compressed_only ? pcv::solve_compressed_only(problem) : pcv::branch_and_bound(problem);
      if (solution.status != pcv::SolveStatus::Optimal) {
        run.status = solution.status;
        return run;
      }
      for (const auto& [key, choice] : solution.plan.choices)
        if (key.first == 1) head.set(1, key.second, choice);
    } catch (const pcv::NoVisibleTiles&) {
      for (int k = 1; k <= tail.tile_count(); ++k)
        if (visibility(0, k - 1)) head.set(1, k, {pcv::Form::Raw, tail.quality_levels});
    }

    const pcv::GofManifest& current = scenario.manifest.gofs[static_cast<std::size_t>(g - 1)];
    for (const auto& [key, choice] : head.choices) {
      const pcv::QualityVariant& variant =
          current.tiles[static_cast<std::size_t>(key.second - 1)].variant(choice.level);
      prefix_s += choice.form == pcv::Form::Compressed
                      ? variant.compressed_size_mbits / bw +
                            ti * variant.decode_compute_units / capacity
                      : variant.raw_size_mbits / bw;
      run.plan.set(g, key.second, choice);
    }
  }
  return run;
}

SchemeRun solve_scheme(const Scenario& scenario, const pcv::DeviceProfile& device,
                       double buffer_s, const std::string& mode, bool compressed_only) {
  if (mode == "online") return solve_online(scenario, device, buffer_s, compressed_only);
  return solve_horizon(scenario, device, buffer_s, compressed_only);
}

int do_gen(const CommonOptions& common, const SceneOptions& scene) {
  const pcv::SceneParams params = scene_params(common, scene);
  const auto frames = pcv::generate_frames(params);
  const pcv::VideoManifest manifest =
      pcv::synthesize_manifest(frames, params.frames_per_gof, params.fps, params.grid,
                               params.height_axis, pcv::default_model(params.quality_levels));
  const pcv::ScenarioTraces traces = pcv::default_traces(params);
  const pcv::BinaryMatrix visibility = pcv::compute_visibility(manifest, traces);

  const fs::path out(common.out_dir);
  fs::create_directories(out);
  pcv::save_manifest(manifest, out / "manifest.json");
  pcv::save_bandwidth_csv(traces.bandwidth_mbps, out / "bandwidth.csv");
  pcv::save_pose_csv(traces.poses, out / "poses.csv");

  nlohmann::ordered_json config;
  config["seed"] = params.seed;
  config["gof_count"] = params.gof_count;
  config["frames_per_gof"] = params.frames_per_gof;
  config["fps"] = params.fps;
  config["grid"] = {{"n", params.grid.n}, {"m", params.grid.m}, {"h", params.grid.h}};
  config["quality_levels"] = params.quality_levels;
  config["points_per_frame"] = params.points_per_frame;
  config["bandwidth_mbps"] = params.bandwidth_mbps;
  config["buffer_s"] = common.buffer_s;
  config["tau"] = common.tau;
  config["cu1_default"] = pcv::default_per_core_capacity(manifest, visibility);
  std::ofstream stream(out / "config.json", std::ios::binary);
  stream << config.dump(2) << "\n";
  if (!stream) throw pcv::ValidationError("cannot write " + (out / "config.json").string());

  std::cout << "wrote scenario to " << out.string() << "\n";
  return kExitOk;
}

int do_partition(const CommonOptions& common, const SceneOptions& scene,
                 const std::vector<std::string>& ply_paths) {
  std::vector<pcv::PointCloudFrame> frames;
  frames.reserve(ply_paths.size());
  for (const auto& path : ply_paths) frames.push_back(pcv::load_ply(path));
  const pcv::GridDims grid{scene.grid_n, scene.grid_m, scene.grid_h};
  const pcv::VideoManifest manifest =
      pcv::synthesize_manifest(frames, scene.frames_per_gof, scene.fps, grid, pcv::Axis::Z,
                               pcv::default_model(scene.levels));
  const fs::path out(common.out_dir);
  fs::create_directories(out);
  pcv::save_manifest(manifest, out / "manifest.json");
  std::cout << "wrote " << (out / "manifest.json").string() << " (" << manifest.gof_count()
            << " gofs, " << manifest.tile_count() << " tiles)\n";
  return kExitOk;
}

int do_plan(const CommonOptions& common, const SceneOptions& scene) {
  const Scenario scenario = load_or_generate(common, scene);
  const pcv::BinaryMatrix visibility = pcv::compute_visibility(scenario.manifest, scenario.traces);
  const pcv::DeviceProfile device = make_device(scenario, visibility, common);

  const SchemeRun run = solve_scheme(scenario, device, common.buffer_s, common.mode, false);
  if (run.status != pcv::SolveStatus::Optimal) {
    std::cout << "infeasible: no assignment keeps the playback buffer above the margin\n";
    return kExitInfeasible;
  }
  const pcv::SimulationReport report = pcv::simulate_buffer(scenario.manifest, scenario.traces,
                                                            device, run.plan, common.buffer_s);
  const fs::path out(common.out_dir);
  fs::create_directories(out);
  pcv::save_plan(run.plan, out / "plan.json");
  pcv::save_report(report, out / "report.csv");
  std::cout << "status optimal\n"
            << "qoe " << pcv::format_double(report.qoe) << "\n"
            << "utilization " << pcv::format_double(report.utilization) << "\n"
            << "feasible " << (report.feasible ? 1 : 0) << "\n";
  return kExitOk;
}

int do_simulate(const CommonOptions& common, const SceneOptions& scene,
                const std::string& plan_path) {
  const Scenario scenario = load_or_generate(common, scene);
  const pcv::BinaryMatrix visibility = pcv::compute_visibility(scenario.manifest, scenario.traces);
  const pcv::DeviceProfile device = make_device(scenario, visibility, common);
  const pcv::Plan plan = pcv::load_plan(plan_path);
  const pcv::SimulationReport report =
      pcv::simulate_buffer(scenario.manifest, scenario.traces, device, plan, common.buffer_s);
  const fs::path out(common.out_dir);
  fs::create_directories(out);
  pcv::save_report(report, out / "report.csv");
  std::cout << "qoe " << pcv::format_double(report.qoe) << "\n"
            << "utilization " << pcv::format_double(report.utilization) << "\n"
            << "feasible " << (report.feasible ? 1 : 0) << "\n";
  return report.feasible ? kExitOk : kExitInfeasible;
}

int do_compare(const CommonOptions& common, const SceneOptions& scene) {
  const Scenario base = load_or_generate(common, scene);
  const pcv::BinaryMatrix visibility = pcv::compute_visibility(base.manifest, base.traces);
  const int levels = base.manifest.quality_levels;

  const std::vector<int> core_grid{2, 4, 6};
  const std::vector<double> bandwidth_grid{54.0, 72.2, 104.0};

  std::string csv = "group_id,nc,bw_mbps,qoe_joint,qoe_baseline,util_joint,util_baseline,"
                    "n_raw,n_compressed";
  for (int r = 1; r <= levels; ++r) csv += ",n_level_" + std::to_string(r);
  csv += "\n";

  int group_id = 0;
  for (int nc : core_grid) {
    for (double bw : bandwidth_grid) {
      ++group_id;
      Scenario scenario = base;
      scenario.traces.bandwidth_mbps = pcv::VecX::Constant(base.manifest.gof_count(), bw);
      CommonOptions group_options = common;
      group_options.nc = nc;
      const pcv::DeviceProfile device = make_device(scenario, visibility, group_options);

      const SchemeRun joint = solve_scheme(scenario, device, common.buffer_s, common.mode, false);
      const SchemeRun baseline =
          solve_scheme(scenario, device, common.buffer_s, common.mode, true);
      if (joint.status != pcv::SolveStatus::Optimal ||
          baseline.status != pcv::SolveStatus::Optimal) {
        std::cout << "group " << group_id << " (nc=" << nc << ", bw=" << bw
                  << ") is infeasible\n";
        return kExitInfeasible;
      }

      const pcv::WeightSet weights = pcv::compute_weights(scenario.manifest, scenario.traces,
                                                          visibility);
      const double qoe_joint =
          pcv::aggregate_qoe(scenario.manifest, weights, visibility, joint.plan);
      const double qoe_baseline =
          pcv::aggregate_qoe(scenario.manifest, weights, visibility, baseline.plan);
      const double util_joint =
          pcv::utilization(scenario.manifest, scenario.traces, device, joint.plan);
      const double util_baseline =
          pcv::utilization(scenario.manifest, scenario.traces, device, baseline.plan);

      int n_raw = 0;
      std::vector<int> histogram(static_cast<std::size_t>(levels), 0);
      for (const auto& [key, choice] : joint.plan.choices) {
        if (choice.form == pcv::Form::Raw) ++n_raw;
        ++histogram[static_cast<std::size_t>(choice.level - 1)];
      }
      const int n_compressed = static_cast<int>(joint.plan.size()) - n_raw;

      csv += std::to_string(group_id) + "," + std::to_string(nc) + "," +
             pcv::format_double(bw) + "," + pcv::format_double(qoe_joint) + "," +
             pcv::format_double(qoe_baseline) + "," + pcv::format_double(util_joint) + "," +
             pcv::format_double(util_baseline) + "," + std::to_string(n_raw) + "," +
             std::to_string(n_compressed);
      for (int count : histogram) csv += "," + std::to_string(count);
      csv += "\n";
    }
  }

  const fs::path out(common.out_dir);
  fs::create_directories(out);
  const fs::path path = out / "comparison.csv";
  std::ofstream stream(path, std::ios::binary);
  stream << csv;
  if (!stream) throw pcv::ValidationError("cannot write " + path.string());
  std::cout << "wrote " << path.string() << "\n";
  return kExitOk;
}

void add_common_options(CLI::App* cmd, CommonOptions& common, bool with_scenario_inputs) {
  if (with_scenario_inputs) {
    cmd->add_option("--manifest", common.manifest_path, "manifest JSON path");
    cmd->add_option("--bw-trace", common.bw_trace_path, "bandwidth CSV path");
    cmd->add_option("--pose-trace", common.pose_trace_path, "viewer pose CSV path");
    cmd->add_option("--nc", common.nc, "device core count");
    cmd->add_option("--cu1", common.cu1, "per-core capacity (default: calibrated)");
    cmd->add_option("--tau", common.tau, "multi-core efficiency factor");
    cmd->add_option("--buffer", common.buffer_s, "startup buffer, seconds");
  }
  cmd->add_option("--seed", common.seed, "scene seed");
  cmd->add_option("--out", common.out_dir, "output directory");
}

void add_scene_options(CLI::App* cmd, SceneOptions& scene) {
  cmd->add_option("--gofs", scene.gofs, "GOF count");
  cmd->add_option("--frames-per-gof", scene.frames_per_gof, "frames per GOF");
  cmd->add_option("--fps", scene.fps, "capture frame rate");
  cmd->add_option("--grid-n", scene.grid_n, "grid cells, first planar axis");
  cmd->add_option("--grid-m", scene.grid_m, "grid cells, second planar axis");
  cmd->add_option("--grid-h", scene.grid_h, "grid layers along height");
  cmd->add_option("--levels", scene.levels, "quality levels");
  cmd->add_option("--points", scene.points, "points per generated frame");
  cmd->add_option("--bw", scene.bandwidth_mbps, "default constant bandwidth, Mbps");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tiled point-cloud video streaming planner"};
  app.require_subcommand(1);

  CommonOptions common;
  SceneOptions scene;
  std::vector<std::string> ply_paths;
  std::string plan_path;
  std::string mode = "horizon";

  CLI::App* gen = app.add_subcommand("gen", "write a seeded synthetic scenario");
  add_common_options(gen, common, false);
  add_scene_options(gen, scene);
  gen->add_option("--buffer", common.buffer_s, "startup buffer recorded in the config");
  gen->add_option("--tau", common.tau, "efficiency factor recorded in the config");

  CLI::App* part = app.add_subcommand("partition", "build a manifest from PLY frames");
  add_common_options(part, common, false);
  add_scene_options(part, scene);
  part->add_option("plys", ply_paths, "ASCII PLY frames in capture order")->required();

  CLI::App* plan = app.add_subcommand("plan", "allocate levels and forms for one session");
  add_common_options(plan, common, true);
  add_scene_options(plan, scene);
  plan->add_option("--mode", mode, "horizon or online")
      ->check(CLI::IsMember({"horizon", "online"}));

  CLI::App* simulate = app.add_subcommand("simulate", "replay a saved plan through the buffer");
  add_common_options(simulate, common, true);
  add_scene_options(simulate, scene);
  simulate->add_option("--plan", plan_path, "plan JSON path")->required();

  CLI::App* compare = app.add_subcommand("compare", "sweep the core-count x bandwidth grid");
  add_common_options(compare, common, true);
  add_scene_options(compare, scene);
  compare->add_option("--mode", mode, "horizon or online")
      ->check(CLI::IsMember({"horizon", "online"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  common.mode = mode;
  try {
    if (gen->parsed()) return do_gen(common, scene);
    if (part->parsed()) return do_partition(common, scene, ply_paths);
    if (plan->parsed()) return do_plan(common, scene);
    if (simulate->parsed()) return do_simulate(common, scene, plan_path);
    if (compare->parsed()) return do_compare(common, scene);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
