// Decode/transmit timing, the playback-buffer recursion, and utilization.
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pcv/dynamics.hpp"
#include "pcv/errors.hpp"
#include "pcv/manifest.hpp"
#include "pcv/plan.hpp"
#include "pcv/visibility.hpp"

#include "test_support.hpp"

using namespace pcv;

namespace {

// One stacked tile column with a camera that sees every tile.
ScenarioTraces overhead_traces(int gofs, int tiles, double bw) {
  return pcvtest::constant_traces(
      gofs, bw, pcvtest::down_pose(Vec3(0.5, 0.5, tiles + 2.0), 90, 0.1, tiles + 10.0));
}

}  // namespace

TEST_CASE("decode time charges compressed picks against total capacity") {
  const VideoManifest manifest =
      pcvtest::stacked_manifest(1, {{{5, 26, 6, 100}}});  // one tile, one level, 6 units
  const DeviceProfile device = pcvtest::device_profile(2, 9);  // capacity 18
  REQUIRE(device.total_capacity() == 18.0);

  Plan comp;
  comp.set(1, 1, {Form::Compressed, 1});
  CHECK(decode_time(manifest, 1, comp, device) ==
        doctest::Approx(1.0 / 9.0).epsilon(1e-12));  // (1/3) * 6 / 18

  SUBCASE("raw picks decode for free") {
    Plan raw;
    raw.set(1, 1, {Form::Raw, 1});
    CHECK(decode_time(manifest, 1, raw, device) == 0.0);
  }
  SUBCASE("doubling the cores halves the time") {
    CHECK(decode_time(manifest, 1, comp, pcvtest::device_profile(4, 9)) ==
          decode_time(manifest, 1, comp, device) / 2);
  }
}

TEST_CASE("transmit time charges the chosen form's bits") {
  const VideoManifest manifest =
      pcvtest::stacked_manifest(1, {{{5, 26, 6, 100}}, {{10, 20, 2, 100}}});

  Plan both_comp;
  both_comp.set(1, 1, {Form::Compressed, 1});
  both_comp.set(1, 2, {Form::Compressed, 1});
  CHECK(transmit_time(manifest, 1, both_comp, 30) == 0.5);  // (5 + 10) / 30

  Plan raw_one;
  raw_one.set(1, 1, {Form::Raw, 1});
  CHECK(transmit_time(manifest, 1, raw_one, 52) == 0.5);  // 26 / 52

  Plan mixed;
  mixed.set(1, 1, {Form::Compressed, 1});
  mixed.set(1, 2, {Form::Raw, 1});
  CHECK(transmit_time(manifest, 1, mixed, 50) == 0.5);  // (5 + 20) / 50

  CHECK_THROWS_AS(transmit_time(manifest, 1, mixed, 0), ValidationError);
}

TEST_CASE("per-gof costs are sums of per-tile costs") {
  std::mt19937_64 rng(404);
  const VideoManifest manifest = pcvtest::stacked_manifest(
      1, {{{pcvtest::uniform(rng, 1, 5), pcvtest::uniform(rng, 6, 20), 3, 100}},
          {{pcvtest::uniform(rng, 1, 5), pcvtest::uniform(rng, 6, 20), 5, 100}},
          {{pcvtest::uniform(rng, 1, 5), pcvtest::uniform(rng, 6, 20), 7, 100}}});
  const DeviceProfile device = pcvtest::device_profile(2, 10);

  Plan full;
  double ts_sum = 0;
  double td_sum = 0;
  for (int k = 1; k <= 3; ++k) {
    const PlanChoice choice{k == 2 ? Form::Raw : Form::Compressed, 1};
    full.set(1, k, choice);
    Plan solo;
    solo.set(1, k, choice);
    ts_sum += transmit_time(manifest, 1, solo, 37.5);
    td_sum += decode_time(manifest, 1, solo, device);
  }
  CHECK(transmit_time(manifest, 1, full, 37.5) == doctest::Approx(ts_sum).epsilon(1e-12));
  CHECK(decode_time(manifest, 1, full, device) == doctest::Approx(td_sum).epsilon(1e-12));
}

TEST_CASE("switching one tile from compressed to raw moves known deltas") {
  const VideoManifest manifest = pcvtest::stacked_manifest(1, {{{4, 22, 6, 100}}});
  const DeviceProfile device = pcvtest::device_profile(2, 9);  // capacity 18
  const double bw = 45;

  Plan comp;
  comp.set(1, 1, {Form::Compressed, 1});
  Plan raw;
  raw.set(1, 1, {Form::Raw, 1});

  CHECK(transmit_time(manifest, 1, raw, bw) - transmit_time(manifest, 1, comp, bw) ==
        doctest::Approx((22.0 - 4.0) / bw).epsilon(1e-12));
  CHECK(decode_time(manifest, 1, raw, device) - decode_time(manifest, 1, comp, device) ==
        doctest::Approx(-(10 / 30.0) * 6.0 / 18.0).epsilon(1e-12));
}

TEST_CASE("buffer recursion worked examples") {
  SUBCASE("one gof drains transmit time and refills one tick") {
    const VideoManifest manifest = pcvtest::stacked_manifest(1, {{{5, 26, 6, 100}}});
    const ScenarioTraces traces = overhead_traces(1, 1, 52);
    Plan plan;
    plan.set(1, 1, {Form::Raw, 1});
    const SimulationReport report =
        simulate_buffer(manifest, traces, pcvtest::device_profile(2, 9), plan, 2.0);
    REQUIRE(report.gof_count() == 1);
    CHECK(report.ts_s[0] == 0.5);
    CHECK(report.td_s[0] == 0.0);
    CHECK(report.tu_s[0] == 0.5);
    CHECK(report.tb_s[0] == doctest::Approx(1.8333333333333333).epsilon(1e-12));
    CHECK(report.feasible);
    CHECK(report.qoe == 0.0);  // single level, so the plan is full quality
  }
  SUBCASE("a free plan gains one tick per gof") {
    const VideoManifest manifest = pcvtest::stacked_manifest(
        4, {{{0, 0, 1, 100}}});  // zero bits at the only level
    const ScenarioTraces traces = overhead_traces(4, 1, 52);
    Plan plan;
    for (int g = 1; g <= 4; ++g) plan.set(g, 1, {Form::Raw, 1});
    const SimulationReport report =
        simulate_buffer(manifest, traces, pcvtest::device_profile(2, 9), plan, 0.4);
    for (int g = 1; g <= 4; ++g)
      CHECK(report.tb_s[g - 1] == doctest::Approx(0.4 + g * (10 / 30.0)).epsilon(1e-12));
    CHECK(report.feasible);
  }
  SUBCASE("draining past the safety margin flips the verdict, not an error") {
    const VideoManifest manifest = pcvtest::stacked_manifest(1, {{{5, 30, 6, 100}}});
    const ScenarioTraces traces = overhead_traces(1, 1, 50);
    Plan plan;
    plan.set(1, 1, {Form::Raw, 1});  // ts = 0.6
    const SimulationReport report =
        simulate_buffer(manifest, traces, pcvtest::device_profile(2, 9), plan, 0.2);
    CHECK_FALSE(report.feasible);
    CHECK(report.tb_s[0] == doctest::Approx(0.2 - 0.6 + 10 / 30.0).epsilon(1e-12));
  }
}

TEST_CASE("buffer trajectory matches its closed form on random plans") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const pcvtest::OracleInstance inst = pcvtest::make_oracle_instance(seed, 3, 3, 3, false);
    const BinaryMatrix visibility = compute_visibility(inst.manifest, inst.traces);
    std::mt19937_64 rng(seed ^ 0xD1CEull);

    Plan plan;
    for (int g = 1; g <= inst.manifest.gof_count(); ++g)
      for (int k = 1; k <= inst.manifest.tile_count(); ++k)
        if (visibility(g - 1, k - 1))
          plan.set(g, k, {rng() % 2 == 0 ? Form::Compressed : Form::Raw,
                          pcvtest::uniform_int(rng, 1, 3)});

    const SimulationReport report =
        simulate_buffer(inst.manifest, inst.traces, inst.device, plan, inst.buffer_s);
    const double ti = inst.manifest.gof_duration_s();
    double spent = 0;
    bool expect_feasible = true;
    for (int g = 1; g <= report.gof_count(); ++g) {
      CHECK(report.tu_s[g - 1] == report.ts_s[g - 1] + report.td_s[g - 1]);
      spent += report.tu_s[g - 1];
      const double closed = inst.buffer_s + g * ti - spent;
      CHECK(std::abs(report.tb_s[g - 1] - closed) <= 1e-12);
      if (report.tb_s[g - 1] < kBufferEpsilonS) expect_feasible = false;
    }
    CHECK(report.feasible == expect_feasible);
  }
}

TEST_CASE("utilization averages the compute and bandwidth shares") {
  const VideoManifest manifest = pcvtest::stacked_manifest(1, {{{30, 60, 6, 100}}});
  const ScenarioTraces traces = overhead_traces(1, 1, 180);  // offers 60 Mbit per gof
  const DeviceProfile device = pcvtest::device_profile(2, 6);  // capacity 12

  Plan comp;
  comp.set(1, 1, {Form::Compressed, 1});
  const ResourceLedger ledger = resource_ledger(manifest, traces, device, comp);
  CHECK(ledger.tiles_compute == 6.0);
  CHECK(ledger.system_compute == 12.0);
  CHECK(ledger.tiles_bits == 30.0);
  CHECK(ledger.system_bits == doctest::Approx(60.0).epsilon(1e-12));
  CHECK(utilization(manifest, traces, device, comp) == doctest::Approx(0.5).epsilon(1e-12));

  SUBCASE("an empty plan uses nothing") {
    CHECK(utilization(manifest, traces, device, Plan{}) == 0.0);
  }
  SUBCASE("an all-raw plan uses bandwidth only") {
    Plan raw;
    raw.set(1, 1, {Form::Raw, 1});
    const ResourceLedger r = resource_ledger(manifest, traces, device, raw);
    CHECK(r.tiles_compute == 0.0);
    CHECK(utilization(manifest, traces, device, raw) ==
          doctest::Approx(0.5 * (60.0 / 60.0)).epsilon(1e-12));
  }
}

TEST_CASE("report scores agree with the standalone scorers") {
  const pcvtest::OracleInstance inst = pcvtest::make_oracle_instance(7, 2, 2, 3, false);
  const BinaryMatrix visibility = compute_visibility(inst.manifest, inst.traces);
  const WeightSet weights = compute_weights(inst.manifest, inst.traces, visibility);

  Plan plan;
  for (int g = 1; g <= inst.manifest.gof_count(); ++g)
    for (int k = 1; k <= inst.manifest.tile_count(); ++k)
      if (visibility(g - 1, k - 1)) plan.set(g, k, {Form::Compressed, (g + k) % 3 + 1});

  const SimulationReport report =
      simulate_buffer(inst.manifest, inst.traces, inst.device, plan, inst.buffer_s);
  CHECK(report.qoe == aggregate_qoe(inst.manifest, weights, visibility, plan));
  CHECK(report.utilization == utilization(inst.manifest, inst.traces, inst.device, plan));
}

TEST_CASE("simulation rejects bad inputs") {
  const VideoManifest manifest = pcvtest::stacked_manifest(2, {{{5, 26, 6, 100}}});
  const ScenarioTraces traces = overhead_traces(2, 1, 52);
  Plan plan;
  plan.set(1, 1, {Form::Raw, 1});
  plan.set(2, 1, {Form::Raw, 1});
  const DeviceProfile device = pcvtest::device_profile(2, 9);

  CHECK_THROWS_AS(simulate_buffer(manifest, traces, device, plan, 0.0), ValidationError);
  CHECK_THROWS_AS(simulate_buffer(manifest, overhead_traces(1, 1, 52), device, plan, 2.0),
                  LengthMismatch);

  Plan out_of_range;
  out_of_range.set(1, 5, {Form::Raw, 1});
  CHECK_THROWS_WITH_AS(transmit_time(manifest, 1, out_of_range, 52),
                       doctest::Contains("tile 5 out of range"), ValidationError);
  Plan bad_level;
  bad_level.set(1, 1, {Form::Raw, 9});
  CHECK_THROWS_WITH_AS(decode_time(manifest, 1, bad_level, device),
                       doctest::Contains("level 9 out of range"), ValidationError);
}
