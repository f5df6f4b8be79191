#pragma once

#include <vector>

#include "pcv/manifest.hpp"
#include "pcv/ply.hpp"
#include "pcv/types.hpp"

namespace pcv {

enum class Axis : int { X = 0, Y = 1, Z = 2 };

// Smallest axis-aligned box enclosing every point.  A single-point frame
// yields a zero-extent box (query with is_degenerate).  Throws EmptyFrame.
Aabb bounding_cuboid(const PointCloudFrame& frame);

bool is_degenerate(const Aabb& box);

// One grid cell produced by partition(): its 1-based tile index, the cell
// box, the rows of the frame that landed in it, and the centroid (point mean,
// or cell center when empty).
struct PartitionCell {
  int tile_index = 0;
  Aabb box;
  std::vector<Eigen::Index> point_rows;
  Vec3 centroid = Vec3::Zero();
};

// Splits the frame's bounding cuboid into an n x m grid on the plane
// orthogonal to height_axis and h layers along it.  Cells are half-open
// [lo, hi) per axis with the last cell closed, so every point lands in
// exactly one cell; a point exactly on an interior boundary belongs to the
// higher-index cell.  Tile order: first planar axis major, then second
// planar axis, then layer; tile_index = (i*m + j)*h + l + 1.
std::vector<PartitionCell> partition(const PointCloudFrame& frame, const GridDims& grid,
                                     Axis height_axis);

// Same split against a caller-provided cuboid (degenerate axes are padded so
// cell boxes stay valid).  Points outside the box are clamped into the edge
// cells; partition(frame, ...) never produces any.
std::vector<PartitionCell> partition(const PointCloudFrame& frame, const Aabb& cuboid,
                                     const GridDims& grid, Axis height_axis);

// How synthetic rate/compute ladders are derived from point counts.
struct CompressionModel {
  VecX ratio_per_level;                  // compressed:raw ratio, > 1 per level
  VecX subsample_fraction_per_level;     // strictly increasing, last == 1
  double bits_per_point_raw = 120;       // raw wire bits per point
  VecX compute_units_per_point_per_level;  // decode cost per point, > 0

  int level_count() const { return static_cast<int>(ratio_per_level.size()); }
};

// Throws InvalidModel when the lists disagree in length or violate ranges.
void validate(const CompressionModel& model, int quality_levels);

// Builds a full manifest from consecutive frames: groups them into GOFs of
// frames_per_gof, computes one bounding cuboid per GOF, partitions every
// frame against it, and derives per-level sizes and decode costs from the
// model.  Decode costs are rescaled so the cheapest level-1 tile sits at
// exactly kBaseComputeUnits.  The result always passes validate().
VideoManifest synthesize_manifest(const std::vector<PointCloudFrame>& frames,
                                  int frames_per_gof, double fps, const GridDims& grid,
                                  Axis height_axis, const CompressionModel& model);

}  // namespace pcv
