// Model containers, validation messages, and file-format round-trips.
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "pcv/errors.hpp"
#include "pcv/io.hpp"
#include "pcv/manifest.hpp"
#include "pcv/plan.hpp"
#include "pcv/report.hpp"
#include "pcv/traces.hpp"

#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace pcv;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "pcv_test_core";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  REQUIRE(out.good());
}

// Two GOFs, two stacked tiles, two levels, with deliberately awkward reals.
VideoManifest sample_manifest() {
  std::vector<pcvtest::LadderRung> a = {{0.1234567890123456, 0.7414213562373095, 1.0, 500},
                                        {0.25, 1.5, 2.718281828459045, 1000}};
  std::vector<pcvtest::LadderRung> b = {{0.3, 0.9, 1.1, 300}, {0.55, 3.3333333333333335, 4.4, 900}};
  return pcvtest::stacked_manifest(2, {a, b});
}

bool message_contains(const std::exception& e, const std::string& needle) {
  return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("gof duration is frame count over fps") {
  const VideoManifest manifest = sample_manifest();
  CHECK(manifest.gof_duration_s() == 10 / 30.0);
  CHECK(manifest.gof_count() == 2);
  CHECK(manifest.tile_count() == 2);
  CHECK(manifest.gofs[0].tiles[0].variant(2).point_count == 1000);
}

TEST_CASE("manifest validation accepts the sample") {
  CHECK_NOTHROW(validate(sample_manifest()));
}

TEST_CASE("manifest validation names the offending coordinates") {
  SUBCASE("wrong tile count") {
    VideoManifest m = sample_manifest();
    m.gofs[1].tiles.pop_back();
    CHECK_THROWS_WITH_AS(validate(m), doctest::Contains("gof 2: expected 2 tiles"),
                         ValidationError);
  }
  SUBCASE("compressed exceeds raw") {
    VideoManifest m = sample_manifest();
    m.gofs[0].tiles[1].variants[1].compressed_size_mbits =
        m.gofs[0].tiles[1].variants[1].raw_size_mbits + 1;
    try {
      validate(m);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(message_contains(e, "gof 1 tile 2 level 2"));
      CHECK(message_contains(e, "raw size"));
    }
  }
  SUBCASE("point count decreasing across levels") {
    VideoManifest m = sample_manifest();
    m.gofs[0].tiles[0].variants[1].point_count = 10;
    CHECK_THROWS_AS(validate(m), ValidationError);
  }
  SUBCASE("frame count differs between gofs") {
    VideoManifest m = sample_manifest();
    m.gofs[1].frame_count = 9;
    CHECK_THROWS_WITH_AS(validate(m), doctest::Contains("gof 2"), ValidationError);
  }
  SUBCASE("centroid outside the box") {
    VideoManifest m = sample_manifest();
    m.gofs[0].tiles[0].centroid = Vec3(5, 5, 5);
    CHECK_THROWS_WITH_AS(validate(m), doctest::Contains("gof 1 tile 1"), ValidationError);
  }
  SUBCASE("decode units below the floor") {
    VideoManifest m = sample_manifest();
    m.gofs[0].tiles[0].variants[0].decode_compute_units = 0.5;
    CHECK_THROWS_AS(validate(m), ValidationError);
  }
  SUBCASE("non-positive fps") {
    VideoManifest m = sample_manifest();
    m.fps = 0;
    CHECK_THROWS_AS(validate(m), ValidationError);
  }
}

TEST_CASE("device validation") {
  CHECK_NOTHROW(validate(pcvtest::device_profile(4, 10, 0.8)));
  CHECK(pcvtest::device_profile(4, 10, 0.5).total_capacity() == 20.0);
  CHECK_THROWS_AS(validate(pcvtest::device_profile(0, 10)), ValidationError);
  CHECK_THROWS_AS(validate(pcvtest::device_profile(2, -1)), ValidationError);
  CHECK_THROWS_AS(validate(pcvtest::device_profile(2, 1, 1.5)), ValidationError);
}

TEST_CASE("manifest json round-trip preserves every field") {
  const VideoManifest original = sample_manifest();
  const fs::path path = temp_file("manifest.json");
  save_manifest(original, path);
  const VideoManifest loaded = load_manifest(path);

  CHECK(loaded.fps == original.fps);
  CHECK(loaded.grid.n == original.grid.n);
  CHECK(loaded.grid.m == original.grid.m);
  CHECK(loaded.grid.h == original.grid.h);
  CHECK(loaded.quality_levels == original.quality_levels);
  REQUIRE(loaded.gof_count() == original.gof_count());
  for (int g = 0; g < original.gof_count(); ++g) {
    const GofManifest& lg = loaded.gofs[static_cast<std::size_t>(g)];
    const GofManifest& og = original.gofs[static_cast<std::size_t>(g)];
    CHECK(lg.gof_index == og.gof_index);
    CHECK(lg.frame_count == og.frame_count);
    REQUIRE(lg.tiles.size() == og.tiles.size());
    for (std::size_t k = 0; k < og.tiles.size(); ++k) {
      CHECK(lg.tiles[k].tile_index == og.tiles[k].tile_index);
      // Shortest round-trip formatting makes reals come back bit-identical.
      CHECK(pcvtest::exactly_equal(lg.tiles[k].aabb.min(), og.tiles[k].aabb.min()));
      CHECK(pcvtest::exactly_equal(lg.tiles[k].aabb.max(), og.tiles[k].aabb.max()));
      CHECK(pcvtest::exactly_equal(lg.tiles[k].centroid, og.tiles[k].centroid));
      REQUIRE(lg.tiles[k].variants.size() == og.tiles[k].variants.size());
      for (std::size_t r = 0; r < og.tiles[k].variants.size(); ++r) {
        const QualityVariant& lv = lg.tiles[k].variants[r];
        const QualityVariant& ov = og.tiles[k].variants[r];
        CHECK(lv.level == ov.level);
        CHECK(lv.compressed_size_mbits == ov.compressed_size_mbits);
        CHECK(lv.raw_size_mbits == ov.raw_size_mbits);
        CHECK(lv.decode_compute_units == ov.decode_compute_units);
        CHECK(lv.point_count == ov.point_count);
      }
    }
  }
  // Serializing the reload reproduces the file byte for byte.
  CHECK(manifest_to_json(loaded) == slurp(path));
}

TEST_CASE("manifest json rejects structural garbage") {
  CHECK_THROWS_AS(manifest_from_json("not json"), ParseError);
  CHECK_THROWS_AS(manifest_from_json("{}"), ParseError);
  CHECK_THROWS_AS(load_manifest(temp_file("missing_manifest.json")), ParseError);
}

TEST_CASE("trace csv round-trip and the shared bandwidth ladder") {
  VecX bw(6);
  bw << 54, 54, 72.2, 72.2, 104, 104;
  const ViewerPose pose = pcvtest::down_pose(Vec3(0.25, -0.5, 3.75), 75, 0.1, 42.5);
  std::vector<ViewerPose> poses(6, pose);
  for (int g = 0; g < 6; ++g) poses[static_cast<std::size_t>(g)].position.x() += 0.01 * g;

  const fs::path bw_path = temp_file("bandwidth.csv");
  const fs::path pose_path = temp_file("poses.csv");
  save_bandwidth_csv(bw, bw_path);
  save_pose_csv(poses, pose_path);

  CHECK(slurp(bw_path) ==
        "gof,bandwidth_mbps\n1,54\n2,54\n3,72.2\n4,72.2\n5,104\n6,104\n");

  const ScenarioTraces traces = load_traces(bw_path, pose_path, 6);
  CHECK(pcvtest::exactly_equal(traces.bandwidth_mbps, bw));
  REQUIRE(traces.gof_count() == 6);
  for (int g = 0; g < 6; ++g) {
    const ViewerPose& p = traces.poses[static_cast<std::size_t>(g)];
    const ViewerPose& q = poses[static_cast<std::size_t>(g)];
    CHECK(pcvtest::exactly_equal(p.position, q.position));
    CHECK(pcvtest::exactly_equal(p.orientation.coeffs(), q.orientation.coeffs()));
    CHECK(p.hfov_deg == q.hfov_deg);
    CHECK(p.vfov_deg == q.vfov_deg);
    CHECK(p.near_m == q.near_m);
    CHECK(p.far_m == q.far_m);
  }
}

TEST_CASE("trace loading rejects malformed input") {
  VecX bw(6);
  bw << 54, 54, 72.2, 72.2, 104, 104;
  std::vector<ViewerPose> poses(6, pcvtest::down_pose(Vec3(0, 0, 3)));
  const fs::path bw_path = temp_file("bw_bad.csv");
  const fs::path pose_path = temp_file("pose_bad.csv");
  save_bandwidth_csv(bw, bw_path);
  save_pose_csv(poses, pose_path);

  SUBCASE("row count mismatch reports expected and actual") {
    VecX five(5);
    five << 10, 10, 10, 10, 10;
    save_bandwidth_csv(five, bw_path);
    try {
      load_traces(bw_path, pose_path, 6);
      FAIL("expected LengthMismatch");
    } catch (const LengthMismatch& e) {
      CHECK(e.expected() == 6);
      CHECK(e.actual() == 5);
    }
  }
  SUBCASE("tampered header") {
    spit(bw_path, "gof,mbps\n1,54\n");
    CHECK_THROWS_AS(load_traces(bw_path, pose_path, 6), ParseError);
  }
  SUBCASE("gof indices out of order") {
    spit(bw_path, "gof,bandwidth_mbps\n1,54\n3,54\n2,54\n4,54\n5,54\n6,54\n");
    CHECK_THROWS_AS(load_traces(bw_path, pose_path, 6), ValidationError);
  }
  SUBCASE("non-positive bandwidth") {
    VecX bad = bw;
    bad[2] = 0;
    save_bandwidth_csv(bad, bw_path);
    CHECK_THROWS_WITH_AS(load_traces(bw_path, pose_path, 6), doctest::Contains("gof 3"),
                         ValidationError);
  }
  SUBCASE("far plane at or below near") {
    std::vector<ViewerPose> bad = poses;
    bad[4].far_m = bad[4].near_m;
    save_pose_csv(bad, pose_path);
    CHECK_THROWS_WITH_AS(load_traces(bw_path, pose_path, 6),
                         doctest::Contains("far plane must exceed near plane"), ValidationError);
  }
  SUBCASE("fov out of range") {
    std::vector<ViewerPose> bad = poses;
    bad[0].hfov_deg = 180;
    save_pose_csv(bad, pose_path);
    CHECK_THROWS_AS(load_traces(bw_path, pose_path, 6), ValidationError);
  }
}

TEST_CASE("report csv round-trip") {
  SimulationReport report;
  report.ts_s = VecX(2);
  report.td_s = VecX(2);
  report.tu_s = VecX(2);
  report.tb_s = VecX(2);
  report.ts_s << 0.5, 0.125;
  report.td_s << 0.1111111111111111, 0;
  report.tu_s << 0.6111111111111112, 0.125;
  report.tb_s << 1.7222222222222223, 1.930555555555556;
  report.qoe = -0.5978370007556204;
  report.utilization = 0.4375;
  report.feasible = true;

  const fs::path path = temp_file("report.csv");
  save_report(report, path);
  const SimulationReport loaded = load_report(path);
  CHECK(loaded.gof_count() == 2);
  CHECK(pcvtest::exactly_equal(loaded.ts_s, report.ts_s));
  CHECK(pcvtest::exactly_equal(loaded.td_s, report.td_s));
  CHECK(pcvtest::exactly_equal(loaded.tu_s, report.tu_s));
  CHECK(pcvtest::exactly_equal(loaded.tb_s, report.tb_s));
  CHECK(loaded.qoe == report.qoe);
  CHECK(loaded.utilization == report.utilization);
  CHECK(loaded.feasible == report.feasible);

  SUBCASE("missing trailer rows") {
    spit(path, "gof,ts_s,td_s,tu_s,tb_s\n1,0.5,0,0.5,1.8\nqoe,0\nutilization,0.5\n");
    CHECK_THROWS_AS(load_report(path), ParseError);
  }
  SUBCASE("feasible flag outside 0/1") {
    spit(path,
         "gof,ts_s,td_s,tu_s,tb_s\n1,0.5,0,0.5,1.8\nqoe,0\nutilization,0.5\nfeasible,2\n");
    CHECK_THROWS_AS(load_report(path), ParseError);
  }
}

TEST_CASE("plan json round-trip") {
  Plan plan;
  plan.set(1, 1, {Form::Compressed, 3});
  plan.set(1, 2, {Form::Raw, 5});
  plan.set(2, 1, {Form::Raw, 1});

  const fs::path path = temp_file("plan.json");
  save_plan(plan, path);
  const Plan loaded = load_plan(path);
  CHECK(loaded == plan);

  SUBCASE("duplicate slot rejected") {
    spit(path, R"({"choices":[{"g":1,"k":1,"form":"raw","level":1},)"
               R"({"g":1,"k":1,"form":"raw","level":2}]})");
    CHECK_THROWS_AS(load_plan(path), ValidationError);
  }
  SUBCASE("unknown form rejected") {
    spit(path, R"({"choices":[{"g":1,"k":1,"form":"shiny","level":1}]})");
    CHECK_THROWS_AS(load_plan(path), ParseError);
  }
}

TEST_CASE("format_double emits shortest exact decimals") {
  CHECK(format_double(104) == "104");
  CHECK(format_double(72.2) == "72.2");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
  for (double v : {0.1, -2.5e-9, 1e300, 3.141592653589793, -0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}
