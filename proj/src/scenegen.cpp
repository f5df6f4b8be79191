#include "pcv/scenegen.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "pcv/errors.hpp"

namespace pcv {
namespace {

// Hand-rolled uniform helpers: the standard distribution classes differ
// across library implementations, and golden outputs must not.
double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit_double(rng);
}

// Uniform point in the closed unit ball, by rejection.
Vec3 ball_point(std::mt19937_64& rng) {
  for (;;) {
    Vec3 p(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
    if (p.squaredNorm() <= 1.0) return p;
  }
}

// Mid-ladder compressed load should land near this share of the reference
// device's whole-session decode throughput.
constexpr double kMidSessionFill = 0.5;
constexpr double kReferenceCores = 4;

}  // namespace

PointCloudFrame generate_frame(const SceneParams& params, int frame_index) {
  if (params.points_per_frame <= 0) throw ValidationError("points_per_frame must be positive");
  if (!(params.fps > 0)) throw ValidationError("fps must be positive");
  std::mt19937_64 rng(params.seed ^
                      (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(frame_index + 1)));

  const double t = frame_index / params.fps;
  const double sway = 0.12 * std::sin(2 * std::numbers::pi * 0.45 * t);
  const double bob = 0.03 * std::sin(2 * std::numbers::pi * 0.9 * t + 1.0);

  PointCloudFrame frame;
  frame.positions.resize(params.points_per_frame, 3);
  for (Eigen::Index i = 0; i < params.points_per_frame; ++i) {
    const double part = unit_double(rng);
    const Vec3 unit = ball_point(rng);
    Vec3 p;
    if (part < 0.50) {  // torso
      p = Vec3(sway + 0.38 * unit.x(), 0.26 * unit.y(), 1.05 + 0.48 * unit.z());
    } else if (part < 0.68) {  // head
      p = Vec3(1.3 * sway + 0.21 * unit.x(), 0.21 * unit.y(), 1.78 + bob + 0.21 * unit.z());
    } else if (part < 0.86) {  // legs
      const double side = part < 0.77 ? -0.16 : 0.16;
      p = Vec3(0.4 * sway + side + 0.11 * unit.x(), 0.11 * unit.y(), 0.45 + 0.45 * unit.z());
    } else {  // arms, swinging in counterphase
      const double side = part < 0.93 ? -0.46 : 0.46;
      const double phase = side < 0 ? 0.0 : std::numbers::pi;
      const double swing = 0.1 * std::sin(2 * std::numbers::pi * 0.45 * t + phase);
      p = Vec3(sway + side + 0.09 * unit.x(), swing + 0.09 * unit.y(), 1.15 + 0.4 * unit.z());
    }
    frame.positions.row(i) = p;
  }
  return frame;
}

std::vector<PointCloudFrame> generate_frames(const SceneParams& params) {
  if (params.gof_count < 1 || params.frames_per_gof < 1)
    throw ValidationError("scene needs at least one gof of at least one frame");
  std::vector<PointCloudFrame> frames;
  frames.reserve(static_cast<std::size_t>(params.gof_count) *
                 static_cast<std::size_t>(params.frames_per_gof));
  const int total = params.gof_count * params.frames_per_gof;
  for (int f = 0; f < total; ++f) frames.push_back(generate_frame(params, f));
  return frames;
}

CompressionModel default_model(int quality_levels) {
  if (quality_levels < 1) throw ValidationError("quality ladder needs at least one level");
  CompressionModel model;
  model.ratio_per_level = VecX::Constant(quality_levels, 6.0);
  model.subsample_fraction_per_level = VecX(quality_levels);
  model.compute_units_per_point_per_level = VecX(quality_levels);
  model.bits_per_point_raw = 150;
  for (int r = 1; r <= quality_levels; ++r) {
    // Quadratic point pyramid with a shallow per-point decode ramp keeps the
    // per-level cost ladder convex at every bandwidth tier, so optimal plans
    // climb adjacent levels instead of skipping the middle of the ladder.
    model.subsample_fraction_per_level[r - 1] =
        std::pow(static_cast<double>(r) / quality_levels, 2.0);
    model.compute_units_per_point_per_level[r - 1] = 1e-3 * std::pow(1.1285, r - 1);
  }
  return model;
}

std::vector<ViewerPose> default_poses(const SceneParams& params) {
  // Elevated viewpoint looking down at the figure: the head ends up roughly
  // twice as close as the feet, which spreads the distance weights across
  // the height axis instead of leaving them nearly uniform.
  const Vec3 target(0, 0, 0.95);

  std::vector<ViewerPose> poses;
  poses.reserve(static_cast<std::size_t>(params.gof_count));
  for (int g = 0; g < params.gof_count; ++g) {
    ViewerPose pose;
    pose.position = Vec3(0.10 * std::sin(0.6 * g), -1.05 + 0.05 * std::cos(0.5 * g),
                         2.90 + 0.04 * std::sin(0.9 * g));
    // The camera looks along its local -Z; aim that axis at the target with
    // world +Z as the up hint (no roll).
    const Vec3 forward = (target - pose.position).normalized();
    Eigen::Matrix3d basis;
    basis.col(0) = forward.cross(Vec3::UnitZ()).normalized();
    basis.col(2) = -forward;
    basis.col(1) = basis.col(2).cross(basis.col(0));
    pose.orientation = Quat(basis);
    pose.hfov_deg = 75;
    pose.vfov_deg = 85;
    pose.near_m = 0.1;
    pose.far_m = 100;
    poses.push_back(pose);
  }
  return poses;
}

ScenarioTraces default_traces(const SceneParams& params) {
  ScenarioTraces traces;
  traces.bandwidth_mbps = VecX::Constant(params.gof_count, params.bandwidth_mbps);
  traces.poses = default_poses(params);
  return traces;
}

double default_per_core_capacity(const VideoManifest& manifest, const BinaryMatrix& visibility) {
  const int gofs = manifest.gof_count();
  const int tiles = manifest.tile_count();
  if (visibility.rows() != gofs || visibility.cols() != tiles)
    throw ValidationError("visibility matrix does not match the manifest");
  const int mid = (manifest.quality_levels + 1) / 2;
  double mid_units = 0;
  for (int g = 0; g < gofs; ++g)
    for (int k = 0; k < tiles; ++k)
      if (visibility(g, k))
        mid_units += manifest.gofs[static_cast<std::size_t>(g)]
                         .tiles[static_cast<std::size_t>(k)]
                         .variant(mid)
                         .decode_compute_units;
  if (!(mid_units > 0)) return 1.0;
  return mid_units / (kMidSessionFill * gofs * kReferenceCores);
}

}  // namespace pcv
