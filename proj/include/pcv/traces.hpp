#pragma once

#include <vector>

#include "pcv/types.hpp"

namespace pcv {

// Viewer camera for one GOF.  Camera-local axes: right = +X, up = +Y,
// forward = -Z; `orientation` rotates camera-local vectors into world space.
struct ViewerPose {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();
  double hfov_deg = 90;
  double vfov_deg = 90;
  double near_m = 0.1;
  double far_m = 100;
};

// Per-GOF network and viewpoint measurements driving one playback session.
struct ScenarioTraces {
  VecX bandwidth_mbps;            // one entry per GOF, > 0
  std::vector<ViewerPose> poses;  // one entry per GOF

  int gof_count() const { return static_cast<int>(poses.size()); }
};

// Throws LengthMismatch if either trace disagrees with expected_gofs, and
// ValidationError for out-of-range values (bandwidth <= 0, far <= near, ...).
void validate(const ScenarioTraces& traces, int expected_gofs);

}  // namespace pcv
