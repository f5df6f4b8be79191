#pragma once

#include <filesystem>

#include "pcv/types.hpp"

namespace pcv {

// One captured frame of the volumetric video.
struct PointCloudFrame {
  PointMatrix positions;  // N x 3, finite
  ColorMatrix colors;     // N x 3 RGB, or 0 x 3 when the source has no color

  Eigen::Index point_count() const { return positions.rows(); }
  bool has_colors() const { return colors.rows() > 0; }
};

// Reads an ASCII PLY with an "element vertex" carrying float x/y/z properties
// and optional uchar red/green/blue.  Other properties and elements are
// skipped.  Throws ParseError on malformed input, EmptyFrame on zero
// vertices, ValidationError on non-finite coordinates.
PointCloudFrame load_ply(const std::filesystem::path& path);

// ASCII writer for the same subset (used by the generator and tests).
void save_ply(const PointCloudFrame& frame, const std::filesystem::path& path);

}  // namespace pcv
