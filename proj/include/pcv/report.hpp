#pragma once

#include "pcv/types.hpp"

namespace pcv {

// Outcome of simulating one plan against one scenario: per-GOF stall/decode
// timings, the playback-buffer trajectory, and session-level scores.
struct SimulationReport {
  VecX ts_s;  // per-GOF transmit time
  VecX td_s;  // per-GOF decode time
  VecX tu_s;  // per-GOF update time, ts + td
  VecX tb_s;  // buffer level after each GOF
  double qoe = 0;          // <= 0; 0 means full quality everywhere visible
  double utilization = 0;  // mean of compute and bandwidth usage fractions
  bool feasible = false;   // buffer stayed above the safety margin throughout

  int gof_count() const { return static_cast<int>(tb_s.size()); }
};

}  // namespace pcv
