#include "pcv/manifest.hpp"

#include <cmath>
#include <string>

#include "pcv/errors.hpp"

namespace pcv {
namespace {

std::string tile_prefix(int gof, int tile) {
  return "gof " + std::to_string(gof) + " tile " + std::to_string(tile);
}

std::string variant_prefix(int gof, int tile, int level) {
  return tile_prefix(gof, tile) + " level " + std::to_string(level);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

bool finite3(const Vec3& v) { return v.allFinite(); }

}  // namespace

double VideoManifest::gof_duration_s() const {
  if (gofs.empty() || fps <= 0) return 0;
  return gofs.front().frame_count / fps;
}

void validate(const DeviceProfile& device) {
  require(device.core_count >= 1, "device: core_count must be >= 1");
  require(std::isfinite(device.per_core_capacity) && device.per_core_capacity > 0,
          "device: per_core_capacity must be > 0");
  require(std::isfinite(device.efficiency) && device.efficiency > 0 && device.efficiency <= 1,
          "device: efficiency must be in (0, 1]");
}

void validate(const VideoManifest& manifest) {
  require(std::isfinite(manifest.fps) && manifest.fps > 0, "manifest: fps must be > 0");
  require(manifest.grid.n >= 1 && manifest.grid.m >= 1 && manifest.grid.h >= 1,
          "manifest: grid dims must be >= 1");
  require(manifest.quality_levels >= 1, "manifest: R must be >= 1");
  require(!manifest.gofs.empty(), "manifest: at least one gof required");

  const int tiles_expected = manifest.tile_count();
  const int frames_expected = manifest.gofs.front().frame_count;

  for (std::size_t gi = 0; gi < manifest.gofs.size(); ++gi) {
    const GofManifest& gof = manifest.gofs[gi];
    const std::string gp = "gof " + std::to_string(gof.gof_index);
    require(gof.gof_index == static_cast<int>(gi) + 1,
            gp + ": expected index " + std::to_string(gi + 1));
    require(gof.frame_count >= 1, gp + ": frame count must be >= 1");
    // Constant GOF duration across the session.
    require(gof.frame_count == frames_expected,
            gp + ": frame count " + std::to_string(gof.frame_count) +
                " differs from gof 1's " + std::to_string(frames_expected));
    require(static_cast<int>(gof.tiles.size()) == tiles_expected,
            gp + ": expected " + std::to_string(tiles_expected) + " tiles, got " +
                std::to_string(gof.tiles.size()));

    for (std::size_t ti = 0; ti < gof.tiles.size(); ++ti) {
      const TileEntry& tile = gof.tiles[ti];
      const std::string tp = tile_prefix(gof.gof_index, tile.tile_index);
      require(tile.tile_index == static_cast<int>(ti) + 1,
              gp + ": expected tile index " + std::to_string(ti + 1) + ", got " +
                  std::to_string(tile.tile_index));
      require(finite3(tile.aabb.min()) && finite3(tile.aabb.max()),
              tp + ": aabb must be finite");
      require((tile.aabb.min().array() < tile.aabb.max().array()).all(),
              tp + ": aabb min must be strictly below max on every axis");
      require(finite3(tile.centroid), tp + ": centroid must be finite");
      require((tile.centroid.array() >= tile.aabb.min().array()).all() &&
                  (tile.centroid.array() <= tile.aabb.max().array()).all(),
              tp + ": centroid must lie inside the aabb");
      require(static_cast<int>(tile.variants.size()) == manifest.quality_levels,
              tp + ": expected " + std::to_string(manifest.quality_levels) + " variants, got " +
                  std::to_string(tile.variants.size()));

      const QualityVariant* prev = nullptr;
      for (std::size_t vi = 0; vi < tile.variants.size(); ++vi) {
        const QualityVariant& v = tile.variants[vi];
        const std::string vp = variant_prefix(gof.gof_index, tile.tile_index, v.level);
        require(v.level == static_cast<int>(vi) + 1,
                tp + ": expected level " + std::to_string(vi + 1) + ", got " +
                    std::to_string(v.level));
        require(std::isfinite(v.compressed_size_mbits) && v.compressed_size_mbits >= 0,
                vp + ": compressed size must be >= 0");
        require(std::isfinite(v.raw_size_mbits) && v.raw_size_mbits >= v.compressed_size_mbits,
                vp + ": raw size must be >= compressed size");
        require(std::isfinite(v.decode_compute_units) &&
                    v.decode_compute_units >= kBaseComputeUnits - 1e-12,
                vp + ": decode compute units must be >= " + std::to_string(kBaseComputeUnits));
        require(v.point_count >= 0, vp + ": point count must be >= 0");
        if (prev != nullptr) {
          require(v.point_count >= prev->point_count,
                  vp + ": point count decreases from level " + std::to_string(prev->level));
          require(v.compressed_size_mbits >= prev->compressed_size_mbits,
                  vp + ": compressed size decreases from level " + std::to_string(prev->level));
          require(v.raw_size_mbits >= prev->raw_size_mbits,
                  vp + ": raw size decreases from level " + std::to_string(prev->level));
        }
        prev = &v;
      }
    }
  }
}

}  // namespace pcv
