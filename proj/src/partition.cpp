#include "pcv/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pcv/errors.hpp"

namespace pcv {
namespace {

// Axis order used for tile indexing: the two planar axes ascending, then the
// height axis.  E.g. height Z -> (X, Y, Z); height Y -> (X, Z, Y).
struct AxisOrder {
  int planar0, planar1, height;
};

AxisOrder axis_order(Axis height_axis) {
  switch (height_axis) {
    case Axis::X: return {1, 2, 0};
    case Axis::Y: return {0, 2, 1};
    default: return {0, 1, 2};
  }
}

// Cell boundaries along one axis: boundary(0) = lo, boundary(cells) = hi
// exactly, interior points on the uniform lattice.
struct AxisGrid {
  double lo = 0, hi = 0, width = 0;
  int cells = 1;

  double boundary(int c) const {
    if (c <= 0) return lo;
    if (c >= cells) return hi;
    return lo + c * width;
  }

  // Half-open cell membership against the boundary lattice itself, so a value
  // exactly on an interior boundary always lands in the higher cell no matter
  // how the division rounds.
  int cell_of(double x) const {
    int c = static_cast<int>(std::floor((x - lo) / width));
    c = std::clamp(c, 0, cells - 1);
    while (c > 0 && x < boundary(c)) --c;
    while (c + 1 < cells && x >= boundary(c + 1)) ++c;
    return c;
  }
};

AxisGrid make_axis_grid(double lo, double hi, int cells) {
  AxisGrid g;
  g.lo = lo;
  g.hi = hi;
  if (!(hi > lo)) {
    // Degenerate extent: pad so cell boxes keep positive volume.
    g.hi = lo + 1e-9 * std::max(1.0, std::abs(lo));
  }
  g.cells = cells;
  g.width = (g.hi - g.lo) / cells;
  return g;
}

}  // namespace

Aabb bounding_cuboid(const PointCloudFrame& frame) {
  if (frame.point_count() == 0) throw EmptyFrame("bounding_cuboid: frame has no points");
  Aabb box;
  box.min() = frame.positions.colwise().minCoeff().transpose();
  box.max() = frame.positions.colwise().maxCoeff().transpose();
  return box;
}

bool is_degenerate(const Aabb& box) {
  return (box.sizes().array() <= 0).any();
}

std::vector<PartitionCell> partition(const PointCloudFrame& frame, const GridDims& grid,
                                     Axis height_axis) {
  return partition(frame, bounding_cuboid(frame), grid, height_axis);
}

std::vector<PartitionCell> partition(const PointCloudFrame& frame, const Aabb& cuboid,
                                     const GridDims& grid, Axis height_axis) {
  const AxisOrder order = axis_order(height_axis);
  const AxisGrid ga = make_axis_grid(cuboid.min()[order.planar0], cuboid.max()[order.planar0], grid.n);
  const AxisGrid gb = make_axis_grid(cuboid.min()[order.planar1], cuboid.max()[order.planar1], grid.m);
  const AxisGrid gh = make_axis_grid(cuboid.min()[order.height], cuboid.max()[order.height], grid.h);

  std::vector<PartitionCell> cells(static_cast<std::size_t>(grid.tile_count()));
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.m; ++j) {
      for (int l = 0; l < grid.h; ++l) {
        const int index = (i * grid.m + j) * grid.h + l;
        PartitionCell& cell = cells[static_cast<std::size_t>(index)];
        cell.tile_index = index + 1;
        Vec3 lo, hi;
        lo[order.planar0] = ga.boundary(i);
        hi[order.planar0] = ga.boundary(i + 1);
        lo[order.planar1] = gb.boundary(j);
        hi[order.planar1] = gb.boundary(j + 1);
        lo[order.height] = gh.boundary(l);
        hi[order.height] = gh.boundary(l + 1);
        cell.box = Aabb(lo, hi);
      }
    }
  }

  for (Eigen::Index row = 0; row < frame.point_count(); ++row) {
    const int i = ga.cell_of(frame.positions(row, order.planar0));
    const int j = gb.cell_of(frame.positions(row, order.planar1));
    const int l = gh.cell_of(frame.positions(row, order.height));
    cells[static_cast<std::size_t>((i * grid.m + j) * grid.h + l)].point_rows.push_back(row);
  }

  for (PartitionCell& cell : cells) {
    if (cell.point_rows.empty()) {
      cell.centroid = cell.box.center();
      continue;
    }
    Vec3 sum = Vec3::Zero();
    for (const Eigen::Index row : cell.point_rows)
      sum += frame.positions.row(row).transpose();
    cell.centroid = sum / static_cast<double>(cell.point_rows.size());
    // Rounding in the mean must not push the centroid outside the cell.
    cell.centroid = cell.centroid.cwiseMax(cell.box.min()).cwiseMin(cell.box.max());
  }
  return cells;
}

void validate(const CompressionModel& model, int quality_levels) {
  const auto fail = [](const std::string& message) { throw InvalidModel(message); };

  if (quality_levels < 1) fail("compression model: quality level count must be >= 1");
  const int r = quality_levels;
  if (model.ratio_per_level.size() != r)
    fail("compression model: ratio_per_level must have " + std::to_string(r) + " entries");
  if (model.subsample_fraction_per_level.size() != r)
    fail("compression model: subsample_fraction_per_level must have " + std::to_string(r) +
         " entries");
  if (model.compute_units_per_point_per_level.size() != r)
    fail("compression model: compute_units_per_point_per_level must have " + std::to_string(r) +
         " entries");
  if (!(std::isfinite(model.bits_per_point_raw) && model.bits_per_point_raw > 0))
    fail("compression model: bits_per_point_raw must be > 0");

  for (int i = 0; i < r; ++i) {
    const std::string lvl = "level " + std::to_string(i + 1);
    if (!(std::isfinite(model.ratio_per_level[i]) && model.ratio_per_level[i] > 1))
      fail("compression model: " + lvl + " ratio must be > 1");
    const double frac = model.subsample_fraction_per_level[i];
    if (!(std::isfinite(frac) && frac > 0 && frac <= 1))
      fail("compression model: " + lvl + " subsample fraction must be in (0, 1]");
    if (i > 0 && !(frac > model.subsample_fraction_per_level[i - 1]))
      fail("compression model: subsample fractions must be strictly increasing at " + lvl);
    if (!(std::isfinite(model.compute_units_per_point_per_level[i]) &&
          model.compute_units_per_point_per_level[i] > 0))
      fail("compression model: " + lvl + " compute units per point must be > 0");
  }
  if (model.subsample_fraction_per_level[r - 1] != 1.0)
    fail("compression model: top level must keep every point (fraction 1)");
}

VideoManifest synthesize_manifest(const std::vector<PointCloudFrame>& frames,
                                  int frames_per_gof, double fps, const GridDims& grid,
                                  Axis height_axis, const CompressionModel& model) {
  const int levels = model.level_count();
  validate(model, levels);
  if (frames_per_gof < 1) throw ValidationError("synthesize: frames_per_gof must be >= 1");
  if (!(std::isfinite(fps) && fps > 0)) throw ValidationError("synthesize: fps must be > 0");
  if (frames.empty() || frames.size() % static_cast<std::size_t>(frames_per_gof) != 0)
    throw ValidationError("synthesize: frame count " + std::to_string(frames.size()) +
                          " is not a positive multiple of frames_per_gof " +
                          std::to_string(frames_per_gof));

  const int gof_count = static_cast<int>(frames.size()) / frames_per_gof;
  const int tiles = grid.tile_count();

  VideoManifest manifest;
  manifest.fps = fps;
  manifest.grid = grid;
  manifest.quality_levels = levels;
  manifest.gofs.resize(static_cast<std::size_t>(gof_count));

  for (int g = 0; g < gof_count; ++g) {
    GofManifest& gof = manifest.gofs[static_cast<std::size_t>(g)];
    gof.gof_index = g + 1;
    gof.frame_count = frames_per_gof;

    // One cuboid per GOF so tiles track the moving subject.
    Aabb cuboid;
    cuboid.setEmpty();
    for (int f = 0; f < frames_per_gof; ++f) {
      const PointCloudFrame& frame = frames[static_cast<std::size_t>(g * frames_per_gof + f)];
      if (frame.point_count() == 0)
        throw EmptyFrame("synthesize: gof " + std::to_string(g + 1) + " frame " +
                         std::to_string(f + 1) + " has no points");
      cuboid.extend(bounding_cuboid(frame));
    }

    gof.tiles.resize(static_cast<std::size_t>(tiles));
    std::vector<std::vector<std::int64_t>> frame_counts(
        static_cast<std::size_t>(tiles));                       // per tile, per frame
    std::vector<Vec3> point_sum(static_cast<std::size_t>(tiles), Vec3::Zero());
    std::vector<std::int64_t> point_total(static_cast<std::size_t>(tiles), 0);

    for (int f = 0; f < frames_per_gof; ++f) {
      const PointCloudFrame& frame = frames[static_cast<std::size_t>(g * frames_per_gof + f)];
      const std::vector<PartitionCell> cells = partition(frame, cuboid, grid, height_axis);
      for (int k = 0; k < tiles; ++k) {
        const PartitionCell& cell = cells[static_cast<std::size_t>(k)];
        frame_counts[static_cast<std::size_t>(k)].push_back(
            static_cast<std::int64_t>(cell.point_rows.size()));
        for (const Eigen::Index row : cell.point_rows)
          point_sum[static_cast<std::size_t>(k)] += frame.positions.row(row).transpose();
        point_total[static_cast<std::size_t>(k)] +=
            static_cast<std::int64_t>(cell.point_rows.size());
        if (f == 0) gof.tiles[static_cast<std::size_t>(k)].aabb = cell.box;
      }
    }

    for (int k = 0; k < tiles; ++k) {
      TileEntry& tile = gof.tiles[static_cast<std::size_t>(k)];
      tile.tile_index = k + 1;
      if (point_total[static_cast<std::size_t>(k)] > 0) {
        tile.centroid = point_sum[static_cast<std::size_t>(k)] /
                        static_cast<double>(point_total[static_cast<std::size_t>(k)]);
        tile.centroid = tile.centroid.cwiseMax(tile.aabb.min()).cwiseMin(tile.aabb.max());
      } else {
        tile.centroid = tile.aabb.center();
      }

      tile.variants.resize(static_cast<std::size_t>(levels));
      for (int r = 0; r < levels; ++r) {
        QualityVariant& v = tile.variants[static_cast<std::size_t>(r)];
        v.level = r + 1;
        // Subsampling happens per frame; GOF totals sum the per-frame picks.
        std::int64_t points = 0;
        for (const std::int64_t full : frame_counts[static_cast<std::size_t>(k)])
          points += std::llround(model.subsample_fraction_per_level[r] *
                                 static_cast<double>(full));
        v.point_count = points;
        v.raw_size_mbits = model.bits_per_point_raw * static_cast<double>(points) / 1e6;
        v.compressed_size_mbits = v.raw_size_mbits / model.ratio_per_level[r];
        v.decode_compute_units =
            std::max(kBaseComputeUnits, model.compute_units_per_point_per_level[r] *
                                            static_cast<double>(points));
      }
      for (int r = 1; r < levels; ++r) {
        if (tile.variants[static_cast<std::size_t>(r)].compressed_size_mbits <
            tile.variants[static_cast<std::size_t>(r - 1)].compressed_size_mbits)
          throw InvalidModel(
              "compression model: ratios make compressed size shrink from level " +
              std::to_string(r) + " to " + std::to_string(r + 1) + " (gof " +
              std::to_string(g + 1) + " tile " + std::to_string(k + 1) +
              "); ratios must not grow faster than subsampled point counts");
      }
    }
  }

  // Normalize decode cost so the cheapest level-1 tile sits exactly at the
  // base unit; the clamp keeps empty tiles on the floor afterwards.
  double min_level1 = std::numeric_limits<double>::infinity();
  for (const GofManifest& gof : manifest.gofs)
    for (const TileEntry& tile : gof.tiles)
      min_level1 = std::min(min_level1, tile.variants.front().decode_compute_units);
  for (GofManifest& gof : manifest.gofs)
    for (TileEntry& tile : gof.tiles)
      for (QualityVariant& v : tile.variants)
        v.decode_compute_units =
            std::max(kBaseComputeUnits, v.decode_compute_units / min_level1);

  validate(manifest);
  return manifest;
}

}  // namespace pcv
