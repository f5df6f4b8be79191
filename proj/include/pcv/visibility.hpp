#pragma once

#include <array>

#include "pcv/manifest.hpp"
#include "pcv/plan.hpp"
#include "pcv/traces.hpp"
#include "pcv/types.hpp"

namespace pcv {

// Half-space n . p + d >= 0 means "inside".
struct Plane {
  Vec3 normal = Vec3::UnitZ();
  double offset = 0;
};

// View frustum as six inward-facing planes (near, far, left, right, bottom, top).
struct Frustum {
  std::array<Plane, 6> planes;
};

Frustum frustum_from_pose(const ViewerPose& pose);

bool frustum_contains(const Frustum& frustum, const Vec3& point);

// Conservative box test: false only when the box lies fully outside some
// plane, so genuine overlaps are never missed (corner cases may report true
// for a box that only straddles plane corners).
bool frustum_intersects(const Frustum& frustum, const Aabb& box);

// visibility(g-1, k-1) == 1 iff tile k's box intersects GOF g's frustum.
BinaryMatrix compute_visibility(const VideoManifest& manifest, const ScenarioTraces& traces);

// 1 / max(kDistanceEpsilonM, |viewer - centroid|).
double distance_weight(const ViewerPose& pose, const Vec3& centroid);

// Top-level point-count share of each visible tile; zero for invisible tiles
// and all-zero when no visible tile has points.  Sums to 1 otherwise.
VecX quality_weights(const GofManifest& gof, int quality_levels,
                     const Eigen::Ref<const Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>>& visible);

// Per-(gof, tile) distance and quality weights for a whole scenario.
struct WeightSet {
  MatX distance;  // G x M, strictly positive
  MatX quality;   // G x M, rows sum to 1 over visible tiles (or all-zero)
};

WeightSet compute_weights(const VideoManifest& manifest, const ScenarioTraces& traces,
                          const BinaryMatrix& visibility);

// Session score ln(achieved / ideal) where both sums run over visible tiles
// in (gof, tile) order; 0 exactly when every visible tile is at the top
// level.  Throws DegenerateQoE when the ideal sum is zero and ValidationError
// when the plan does not cover exactly the visible tiles.
double aggregate_qoe(const VideoManifest& manifest, const WeightSet& weights,
                     const BinaryMatrix& visibility, const Plan& plan);

// Pre-log numerator and denominator behind aggregate_qoe.
struct QoeTerms {
  double achieved = 0;
  double ideal = 0;
};

QoeTerms qoe_terms(const VideoManifest& manifest, const WeightSet& weights,
                   const BinaryMatrix& visibility, const Plan& plan);

}  // namespace pcv
