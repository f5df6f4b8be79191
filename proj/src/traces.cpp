#include "pcv/traces.hpp"

#include <cmath>
#include <string>

#include "pcv/errors.hpp"

namespace pcv {

void validate(const ScenarioTraces& traces, int expected_gofs) {
  if (traces.bandwidth_mbps.size() != expected_gofs)
    throw LengthMismatch("bandwidth trace", expected_gofs, traces.bandwidth_mbps.size());
  if (static_cast<int>(traces.poses.size()) != expected_gofs)
    throw LengthMismatch("pose trace", expected_gofs, static_cast<long long>(traces.poses.size()));

  for (int g = 0; g < expected_gofs; ++g) {
    const std::string gp = "gof " + std::to_string(g + 1);
    const double bw = traces.bandwidth_mbps[g];
    if (!std::isfinite(bw) || bw <= 0)
      throw ValidationError(gp + ": bandwidth must be > 0");

    const ViewerPose& pose = traces.poses[g];
    if (!pose.position.allFinite())
      throw ValidationError(gp + ": pose position must be finite");
    const double norm = pose.orientation.norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-6)
      throw ValidationError(gp + ": pose quaternion must be unit length");
    if (!(pose.hfov_deg > 0 && pose.hfov_deg < 180))
      throw ValidationError(gp + ": hfov must be in (0, 180) degrees");
    if (!(pose.vfov_deg > 0 && pose.vfov_deg < 180))
      throw ValidationError(gp + ": vfov must be in (0, 180) degrees");
    if (!(std::isfinite(pose.near_m) && pose.near_m > 0))
      throw ValidationError(gp + ": near plane must be > 0");
    if (!(std::isfinite(pose.far_m) && pose.far_m > pose.near_m))
      throw ValidationError(gp + ": far plane must exceed near plane");
  }
}

}  // namespace pcv
