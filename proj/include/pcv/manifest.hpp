#pragma once

#include <cstdint>
#include <vector>

#include "pcv/types.hpp"

namespace pcv {

// Decode cost of the smallest lowest-level tile after normalization; every
// variant's decode_compute_units sits at or above this floor.
inline constexpr double kBaseComputeUnits = 1.0;

// Playback never lets the buffer fall below this margin (seconds).
inline constexpr double kBufferEpsilonS = 1e-9;

// Viewer-to-centroid distances are clamped below by this (meters).
inline constexpr double kDistanceEpsilonM = 1e-3;

// One encoded representation of a tile at a given quality level.
struct QualityVariant {
  int level = 0;                      // 1..R
  double compressed_size_mbits = 0;   // on-the-wire size, compressed form
  double raw_size_mbits = 0;          // on-the-wire size, raw form
  double decode_compute_units = 0;    // decode cost when fetched compressed
  std::int64_t point_count = 0;       // points retained at this level
};

// One spatial tile of a GOF: its grid cell box, content centroid, and the
// ladder of quality variants.
struct TileEntry {
  int tile_index = 0;                 // 1-based, (i*m + j)*h + l + 1
  Aabb aabb;
  Vec3 centroid = Vec3::Zero();
  std::vector<QualityVariant> variants;  // exactly R entries, levels 1..R

  const QualityVariant& variant(int level) const { return variants.at(level - 1); }
};

// One group of frames: fixed frame count, one entry per grid tile.
struct GofManifest {
  int gof_index = 0;                  // 1-based
  int frame_count = 0;
  std::vector<TileEntry> tiles;
};

struct GridDims {
  int n = 1;  // cells along the first planar axis
  int m = 1;  // cells along the second planar axis
  int h = 1;  // layers along the height axis
  int tile_count() const { return n * m * h; }
};

// The full segmented video: global frame rate, tiling grid, quality ladder
// depth, and per-GOF tile tables.
struct VideoManifest {
  double fps = 0;
  GridDims grid;
  int quality_levels = 0;             // R
  std::vector<GofManifest> gofs;

  int gof_count() const { return static_cast<int>(gofs.size()); }
  int tile_count() const { return grid.tile_count(); }
  // Seconds of playback per GOF (frame_count / fps, identical across GOFs).
  double gof_duration_s() const;
};

// Throws ValidationError naming the offending (gof, tile, level) coordinate.
void validate(const VideoManifest& manifest);

// Decode capability of the consuming device.
struct DeviceProfile {
  int core_count = 1;          // parallel decode units
  double per_core_capacity = 1;  // compute units one core retires per GOF duration
  double efficiency = 1;       // multi-core scaling factor in (0, 1]

  // Compute units the whole device retires per GOF duration.
  double total_capacity() const { return core_count * efficiency * per_core_capacity; }
};

void validate(const DeviceProfile& device);

}  // namespace pcv
