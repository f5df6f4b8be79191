#pragma once

#include <filesystem>
#include <string>

#include "pcv/manifest.hpp"
#include "pcv/plan.hpp"
#include "pcv/report.hpp"
#include "pcv/traces.hpp"

namespace pcv {

// Manifest JSON:
// {fps, grid:{n,m,h}, R, gofs:[{g, f, tiles:[{k, aabb:{min,max}, centroid,
//   variants:[{r, bin_mbits, ply_mbits, compute_units, points}]}]}]}
// load_manifest validates before returning; save_manifest round-trips every
// real to 1e-12 relative.
VideoManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const VideoManifest& manifest, const std::filesystem::path& path);

std::string manifest_to_json(const VideoManifest& manifest);
VideoManifest manifest_from_json(const std::string& text, const std::string& origin = "manifest");

// Bandwidth CSV: header "gof,bandwidth_mbps".  Pose CSV: header
// "gof,px,py,pz,qw,qx,qy,qz,hfov_deg,vfov_deg,near_m,far_m".  Rows must cover
// GOFs 1..G in order.
ScenarioTraces load_traces(const std::filesystem::path& bandwidth_csv,
                           const std::filesystem::path& pose_csv, int expected_gofs);
void save_bandwidth_csv(const VecX& bandwidth_mbps, const std::filesystem::path& path);
void save_pose_csv(const std::vector<ViewerPose>& poses, const std::filesystem::path& path);

// Report CSV: header "gof,ts_s,td_s,tu_s,tb_s", one row per GOF, then trailer
// rows "qoe,<v>", "utilization,<v>", "feasible,<0|1>".
void save_report(const SimulationReport& report, const std::filesystem::path& path);
SimulationReport load_report(const std::filesystem::path& path);

// Plan JSON: {"choices":[{"g","k","form","level"}]} sorted by (g, k).
void save_plan(const Plan& plan, const std::filesystem::path& path);
Plan load_plan(const std::filesystem::path& path);

// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

}  // namespace pcv
