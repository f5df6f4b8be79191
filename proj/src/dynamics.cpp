#include "pcv/dynamics.hpp"

#include <limits>
#include <string>

#include "pcv/errors.hpp"
#include "pcv/visibility.hpp"

namespace pcv {
namespace {

// Iterates GOF g's plan entries in tile order, folding f(tile_entry, choice).
template <typename Fold>
void for_gof_choices(const VideoManifest& manifest, int gof_index, const Plan& plan,
                     Fold&& fold) {
  const GofManifest& gof = manifest.gofs.at(static_cast<std::size_t>(gof_index - 1));
  const int tiles = manifest.tile_count();
  auto it = plan.choices.lower_bound({gof_index, std::numeric_limits<int>::min()});
  for (; it != plan.choices.end() && it->first.first == gof_index; ++it) {
    const int k = it->first.second;
    if (k < 1 || k > tiles)
      throw ValidationError("plan tile " + std::to_string(k) + " out of range at gof " +
                            std::to_string(gof_index));
    const PlanChoice& choice = it->second;
    if (choice.level < 1 || choice.level > manifest.quality_levels)
      throw ValidationError("plan level " + std::to_string(choice.level) +
                            " out of range at gof " + std::to_string(gof_index) + " tile " +
                            std::to_string(k));
    fold(gof.tiles[static_cast<std::size_t>(k - 1)], choice);
  }
}

}  // namespace

double decode_time(const VideoManifest& manifest, int gof_index, const Plan& plan,
                   const DeviceProfile& device) {
  validate(device);
  double units = 0;
  for_gof_choices(manifest, gof_index, plan, [&](const TileEntry& tile, const PlanChoice& c) {
    if (c.form == Form::Compressed) units += tile.variant(c.level).decode_compute_units;
  });
  return manifest.gof_duration_s() * units / device.total_capacity();
}

double transmit_time(const VideoManifest& manifest, int gof_index, const Plan& plan,
                     double bandwidth_mbps) {
  if (!(bandwidth_mbps > 0))
    throw ValidationError("transmit: bandwidth must be > 0 at gof " + std::to_string(gof_index));
  double mbits = 0;
  for_gof_choices(manifest, gof_index, plan, [&](const TileEntry& tile, const PlanChoice& c) {
    mbits += c.form == Form::Compressed ? tile.variant(c.level).compressed_size_mbits
                                        : tile.variant(c.level).raw_size_mbits;
  });
  return mbits / bandwidth_mbps;
}

ResourceLedger resource_ledger(const VideoManifest& manifest, const ScenarioTraces& traces,
                               const DeviceProfile& device, const Plan& plan) {
  validate(device);
  const int gofs = manifest.gof_count();
  const double ti = manifest.gof_duration_s();

  ResourceLedger ledger;
  ledger.system_compute = gofs * device.total_capacity();
  for (int g = 1; g <= gofs; ++g) {
    ledger.system_bits += traces.bandwidth_mbps[g - 1] * ti;
    for_gof_choices(manifest, g, plan, [&](const TileEntry& tile, const PlanChoice& c) {
      if (c.form == Form::Compressed) {
        ledger.tiles_compute += tile.variant(c.level).decode_compute_units;
        ledger.tiles_bits += tile.variant(c.level).compressed_size_mbits;
      } else {
        ledger.tiles_bits += tile.variant(c.level).raw_size_mbits;
      }
    });
  }
  return ledger;
}

double utilization(const VideoManifest& manifest, const ScenarioTraces& traces,
                   const DeviceProfile& device, const Plan& plan) {
  const ResourceLedger ledger = resource_ledger(manifest, traces, device, plan);
  return 0.5 * (ledger.tiles_compute / ledger.system_compute +
                ledger.tiles_bits / ledger.system_bits);
}

SimulationReport simulate_buffer(const VideoManifest& manifest, const ScenarioTraces& traces,
                                 const DeviceProfile& device, const Plan& plan,
                                 double initial_buffer_s) {
  if (!(initial_buffer_s > 0))
    throw ValidationError("simulate: initial buffer must be > 0");
  const int gofs = manifest.gof_count();
  validate(traces, gofs);
  const double ti = manifest.gof_duration_s();

  SimulationReport report;
  report.ts_s.resize(gofs);
  report.td_s.resize(gofs);
  report.tu_s.resize(gofs);
  report.tb_s.resize(gofs);
  report.feasible = true;

  double buffer = initial_buffer_s;
  for (int g = 1; g <= gofs; ++g) {
    const double ts = transmit_time(manifest, g, plan, traces.bandwidth_mbps[g - 1]);
    const double td = decode_time(manifest, g, plan, device);
    const double tu = ts + td;
    buffer = buffer - tu + ti;
    report.ts_s[g - 1] = ts;
    report.td_s[g - 1] = td;
    report.tu_s[g - 1] = tu;
    report.tb_s[g - 1] = buffer;
    if (buffer < kBufferEpsilonS) report.feasible = false;
  }

  const BinaryMatrix visibility = compute_visibility(manifest, traces);
  const WeightSet weights = compute_weights(manifest, traces, visibility);
  try {
    report.qoe = aggregate_qoe(manifest, weights, visibility, plan);
  } catch (const DegenerateQoE&) {
    report.qoe = 0;  // nothing visible carries weight: vacuously perfect
  }
  report.utilization = utilization(manifest, traces, device, plan);
  return report;
}

}  // namespace pcv
