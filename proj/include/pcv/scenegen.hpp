#pragma once

#include <cstdint>
#include <vector>

#include "pcv/manifest.hpp"
#include "pcv/partition.hpp"
#include "pcv/traces.hpp"
#include "pcv/types.hpp"

namespace pcv {

// Parameters of the built-in synthetic capture: a swaying humanoid blob
// viewed from the front, shaped to the default session geometry (6 GOFs of
// 1/3 s, 2x2x6 grid, 5-level ladder, 2 s startup buffer).
struct SceneParams {
  std::uint64_t seed = 3;
  int gof_count = 6;
  int frames_per_gof = 10;
  double fps = 30;
  GridDims grid{2, 2, 6};
  Axis height_axis = Axis::Z;
  int quality_levels = 5;
  int points_per_frame = 50000;
  double bandwidth_mbps = 72.2;  // constant default trace
};

// Deterministic per (seed, frame_index); colors omitted.
PointCloudFrame generate_frame(const SceneParams& params, int frame_index);

std::vector<PointCloudFrame> generate_frames(const SceneParams& params);

// Ladder defaults: 6:1 compression at every level, 150 raw bits/point,
// quadratic subsample fractions rising to 1, decode cost per point rising
// gently with level so compute pressure is real on small devices.
CompressionModel default_model(int quality_levels);

// Slightly elevated viewer looking down at the body center, drifting a
// little per GOF; one pose per GOF.
std::vector<ViewerPose> default_poses(const SceneParams& params);

ScenarioTraces default_traces(const SceneParams& params);

// Capacity calibration: per-core capacity such that fetching every visible
// tile compressed at the ladder midpoint fills about half of a 4-core
// device's session capacity.
double default_per_core_capacity(const VideoManifest& manifest, const BinaryMatrix& visibility);

}  // namespace pcv
