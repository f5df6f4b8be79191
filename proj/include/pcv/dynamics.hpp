#pragma once

#include "pcv/manifest.hpp"
#include "pcv/plan.hpp"
#include "pcv/report.hpp"
#include "pcv/traces.hpp"

namespace pcv {

// Seconds the device spends decoding GOF g's compressed picks:
// Ti * (sum of chosen decode units) / total_capacity.
double decode_time(const VideoManifest& manifest, int gof_index, const Plan& plan,
                   const DeviceProfile& device);

// Seconds on the wire for GOF g's picks: chosen bits / bandwidth.
double transmit_time(const VideoManifest& manifest, int gof_index, const Plan& plan,
                     double bandwidth_mbps);

// Plays the plan through the buffer recursion
//   Tb_g = Tb_{g-1} - (Ts_g + Td_g) + Ti,  Tb_0 = initial_buffer_s,
// computing per-GOF times, the buffer trajectory, the session QoE, and the
// resource-utilization score.  Infeasibility (buffer under kBufferEpsilonS)
// is a reported verdict, not an error.
SimulationReport simulate_buffer(const VideoManifest& manifest, const ScenarioTraces& traces,
                                 const DeviceProfile& device, const Plan& plan,
                                 double initial_buffer_s);

// Session resource totals: what the plan consumed vs. what the session offered.
struct ResourceLedger {
  double tiles_compute = 0;   // decode units of compressed picks
  double system_compute = 0;  // G * total_capacity
  double tiles_bits = 0;      // Mbits fetched (compressed or raw as chosen)
  double system_bits = 0;     // sum over GOFs of bandwidth * Ti
};

ResourceLedger resource_ledger(const VideoManifest& manifest, const ScenarioTraces& traces,
                               const DeviceProfile& device, const Plan& plan);

// Mean of the two usage fractions from the ledger.
double utilization(const VideoManifest& manifest, const ScenarioTraces& traces,
                   const DeviceProfile& device, const Plan& plan);

}  // namespace pcv
