#include "pcv/visibility.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pcv/errors.hpp"

namespace pcv {
namespace {

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

Plane world_plane(const Quat& rotation, const Vec3& eye, const Vec3& local_normal,
                  double local_offset) {
  // Camera-space half-space n.p + d >= 0 mapped to world; normalizing scales
  // the offset by the same factor so the half-space is unchanged.
  const double scale = 1.0 / local_normal.norm();
  Plane p;
  p.normal = rotation * (local_normal * scale);
  p.offset = local_offset * scale - p.normal.dot(eye);
  return p;
}

}  // namespace

Frustum frustum_from_pose(const ViewerPose& pose) {
  // Camera space: right +X, up +Y, forward -Z.  A point at depth w = -z is
  // visible when near <= w <= far, |x| <= w*tan(hfov/2), |y| <= w*tan(vfov/2).
  const double th = std::tan(deg2rad(pose.hfov_deg) / 2);
  const double tv = std::tan(deg2rad(pose.vfov_deg) / 2);
  const Quat q = pose.orientation.normalized();
  const Vec3& eye = pose.position;

  Frustum f;
  f.planes[0] = world_plane(q, eye, Vec3(0, 0, -1), -pose.near_m);  // near
  f.planes[1] = world_plane(q, eye, Vec3(0, 0, 1), pose.far_m);     // far
  f.planes[2] = world_plane(q, eye, Vec3(1, 0, -th), 0);            // left
  f.planes[3] = world_plane(q, eye, Vec3(-1, 0, -th), 0);           // right
  f.planes[4] = world_plane(q, eye, Vec3(0, 1, -tv), 0);            // bottom
  f.planes[5] = world_plane(q, eye, Vec3(0, -1, -tv), 0);           // top
  return f;
}

bool frustum_contains(const Frustum& frustum, const Vec3& point) {
  for (const Plane& p : frustum.planes)
    if (p.normal.dot(point) + p.offset < 0) return false;
  return true;
}

bool frustum_intersects(const Frustum& frustum, const Aabb& box) {
  // Positive-vertex test: the box lies fully outside a plane iff its corner
  // furthest along the plane normal does.
  for (const Plane& p : frustum.planes) {
    Vec3 corner;
    for (int axis = 0; axis < 3; ++axis)
      corner[axis] = p.normal[axis] >= 0 ? box.max()[axis] : box.min()[axis];
    if (p.normal.dot(corner) + p.offset < 0) return false;
  }
  return true;
}

BinaryMatrix compute_visibility(const VideoManifest& manifest, const ScenarioTraces& traces) {
  const int gofs = manifest.gof_count();
  const int tiles = manifest.tile_count();
  validate(traces, gofs);

  BinaryMatrix visibility(gofs, tiles);
  for (int g = 0; g < gofs; ++g) {
    const Frustum frustum = frustum_from_pose(traces.poses[static_cast<std::size_t>(g)]);
    for (int k = 0; k < tiles; ++k) {
      const TileEntry& tile = manifest.gofs[static_cast<std::size_t>(g)]
                                  .tiles[static_cast<std::size_t>(k)];
      visibility(g, k) = frustum_intersects(frustum, tile.aabb) ? 1 : 0;
    }
  }
  return visibility;
}

double distance_weight(const ViewerPose& pose, const Vec3& centroid) {
  const double dist = (pose.position - centroid).norm();
  return 1.0 / std::max(kDistanceEpsilonM, dist);
}

VecX quality_weights(const GofManifest& gof, int quality_levels,
                     const Eigen::Ref<const Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>>& visible) {
  const int tiles = static_cast<int>(gof.tiles.size());
  VecX weights = VecX::Zero(tiles);
  double total = 0;
  for (int k = 0; k < tiles; ++k) {
    if (!visible[k]) continue;
    total += static_cast<double>(
        gof.tiles[static_cast<std::size_t>(k)].variant(quality_levels).point_count);
  }
  if (total <= 0) return weights;  // all-zero when nothing visible has points
  for (int k = 0; k < tiles; ++k) {
    if (!visible[k]) continue;
    weights[k] = static_cast<double>(
                     gof.tiles[static_cast<std::size_t>(k)].variant(quality_levels).point_count) /
                 total;
  }
  return weights;
}

WeightSet compute_weights(const VideoManifest& manifest, const ScenarioTraces& traces,
                          const BinaryMatrix& visibility) {
  const int gofs = manifest.gof_count();
  const int tiles = manifest.tile_count();

  WeightSet w;
  w.distance.resize(gofs, tiles);
  w.quality.resize(gofs, tiles);
  for (int g = 0; g < gofs; ++g) {
    const GofManifest& gof = manifest.gofs[static_cast<std::size_t>(g)];
    const ViewerPose& pose = traces.poses[static_cast<std::size_t>(g)];
    for (int k = 0; k < tiles; ++k)
      w.distance(g, k) = distance_weight(pose, gof.tiles[static_cast<std::size_t>(k)].centroid);
    w.quality.row(g) =
        quality_weights(gof, manifest.quality_levels, visibility.row(g).transpose()).transpose();
  }
  return w;
}

QoeTerms qoe_terms(const VideoManifest& manifest, const WeightSet& weights,
                   const BinaryMatrix& visibility, const Plan& plan) {
  const int gofs = manifest.gof_count();
  const int tiles = manifest.tile_count();
  const int top = manifest.quality_levels;

  QoeTerms terms;
  std::size_t covered = 0;
  for (int g = 0; g < gofs; ++g) {
    for (int k = 0; k < tiles; ++k) {
      if (!visibility(g, k)) {
        if (plan.contains(g + 1, k + 1))
          throw ValidationError("plan assigns invisible gof " + std::to_string(g + 1) +
                                " tile " + std::to_string(k + 1));
        continue;
      }
      if (!plan.contains(g + 1, k + 1))
        throw ValidationError("plan misses visible gof " + std::to_string(g + 1) + " tile " +
                              std::to_string(k + 1));
      const PlanChoice& choice = plan.at(g + 1, k + 1);
      if (choice.level < 1 || choice.level > top)
        throw ValidationError("plan level " + std::to_string(choice.level) +
                              " out of range at gof " + std::to_string(g + 1) + " tile " +
                              std::to_string(k + 1));
      ++covered;
      // Identical fold structure for both sums keeps the full-quality plan's
      // ratio at exactly 1.
      terms.achieved += weights.distance(g, k) * choice.level * weights.quality(g, k);
      terms.ideal += weights.distance(g, k) * top * weights.quality(g, k);
    }
  }
  if (covered != plan.size())
    throw ValidationError("plan has " + std::to_string(plan.size() - covered) +
                          " choices outside the manifest's gof/tile range");
  return terms;
}

double aggregate_qoe(const VideoManifest& manifest, const WeightSet& weights,
                     const BinaryMatrix& visibility, const Plan& plan) {
  const QoeTerms terms = qoe_terms(manifest, weights, visibility, plan);
  if (terms.ideal <= 0)
    throw DegenerateQoE("qoe: no visible tile carries quality weight");
  return std::log(terms.achieved / terms.ideal);
}

}  // namespace pcv
