#include "pcv/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "pcv/errors.hpp"

namespace pcv {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError(path.string() + ": cannot open for writing");
  out << text;
  if (!out) throw ParseError(path.string() + ": write failed");
}

ordered_json vec3_to_json(const Vec3& v) { return ordered_json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from_json(const ordered_json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3)
    throw ParseError(where + ": expected an array of 3 numbers");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

// Split a CSV line; no quoting in any of our tables.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& field, const std::string& where) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw ParseError(where + ": expected a number, got \"" + field + "\"");
  return v;
}

long long parse_int(const std::string& field, const std::string& where) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0')
    throw ParseError(where + ": expected an integer, got \"" + field + "\"");
  return v;
}

// Reads non-empty lines, trimming a trailing '\r' so CRLF files load too.
std::vector<std::string> read_csv_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::string format_double(double v) {
  // Shortest decimal digit count that survives a parse round-trip.
  char buf[40];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

std::string manifest_to_json(const VideoManifest& manifest) {
  ordered_json root;
  root["fps"] = manifest.fps;
  root["grid"] = {{"n", manifest.grid.n}, {"m", manifest.grid.m}, {"h", manifest.grid.h}};
  root["R"] = manifest.quality_levels;
  ordered_json gofs = ordered_json::array();
  for (const GofManifest& gof : manifest.gofs) {
    ordered_json jg;
    jg["g"] = gof.gof_index;
    jg["f"] = gof.frame_count;
    ordered_json tiles = ordered_json::array();
    for (const TileEntry& tile : gof.tiles) {
      ordered_json jt;
      jt["k"] = tile.tile_index;
      jt["aabb"] = {{"min", vec3_to_json(tile.aabb.min())},
                    {"max", vec3_to_json(tile.aabb.max())}};
      jt["centroid"] = vec3_to_json(tile.centroid);
      ordered_json variants = ordered_json::array();
      for (const QualityVariant& v : tile.variants) {
        variants.push_back({{"r", v.level},
                            {"bin_mbits", v.compressed_size_mbits},
                            {"ply_mbits", v.raw_size_mbits},
                            {"compute_units", v.decode_compute_units},
                            {"points", v.point_count}});
      }
      jt["variants"] = std::move(variants);
      tiles.push_back(std::move(jt));
    }
    jg["tiles"] = std::move(tiles);
    gofs.push_back(std::move(jg));
  }
  root["gofs"] = std::move(gofs);
  return root.dump(2) + "\n";
}

VideoManifest manifest_from_json(const std::string& text, const std::string& origin) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(origin + ": " + e.what());
  }

  VideoManifest manifest;
  try {
    manifest.fps = root.at("fps").get<double>();
    manifest.grid.n = root.at("grid").at("n").get<int>();
    manifest.grid.m = root.at("grid").at("m").get<int>();
    manifest.grid.h = root.at("grid").at("h").get<int>();
    manifest.quality_levels = root.at("R").get<int>();
    for (const ordered_json& jg : root.at("gofs")) {
      GofManifest gof;
      gof.gof_index = jg.at("g").get<int>();
      gof.frame_count = jg.at("f").get<int>();
      for (const ordered_json& jt : jg.at("tiles")) {
        TileEntry tile;
        tile.tile_index = jt.at("k").get<int>();
        const std::string where =
            origin + " gof " + std::to_string(gof.gof_index) + " tile " +
            std::to_string(tile.tile_index);
        const Vec3 lo = vec3_from_json(jt.at("aabb").at("min"), where + " aabb.min");
        const Vec3 hi = vec3_from_json(jt.at("aabb").at("max"), where + " aabb.max");
        tile.aabb = Aabb(lo, hi);
        tile.centroid = vec3_from_json(jt.at("centroid"), where + " centroid");
        for (const ordered_json& jv : jt.at("variants")) {
          QualityVariant v;
          v.level = jv.at("r").get<int>();
          v.compressed_size_mbits = jv.at("bin_mbits").get<double>();
          v.raw_size_mbits = jv.at("ply_mbits").get<double>();
          v.decode_compute_units = jv.at("compute_units").get<double>();
          v.point_count = jv.at("points").get<std::int64_t>();
          tile.variants.push_back(v);
        }
        gof.tiles.push_back(std::move(tile));
      }
      manifest.gofs.push_back(std::move(gof));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(origin + ": " + e.what());
  }

  validate(manifest);
  return manifest;
}

VideoManifest load_manifest(const std::filesystem::path& path) {
  return manifest_from_json(read_file(path), path.string());
}

void save_manifest(const VideoManifest& manifest, const std::filesystem::path& path) {
  write_file(path, manifest_to_json(manifest));
}

void save_bandwidth_csv(const VecX& bandwidth_mbps, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "gof,bandwidth_mbps\n";
  for (Eigen::Index g = 0; g < bandwidth_mbps.size(); ++g)
    out << (g + 1) << ',' << format_double(bandwidth_mbps[g]) << '\n';
  write_file(path, out.str());
}

void save_pose_csv(const std::vector<ViewerPose>& poses, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "gof,px,py,pz,qw,qx,qy,qz,hfov_deg,vfov_deg,near_m,far_m\n";
  for (std::size_t g = 0; g < poses.size(); ++g) {
    const ViewerPose& p = poses[g];
    out << (g + 1) << ',' << format_double(p.position.x()) << ','
        << format_double(p.position.y()) << ',' << format_double(p.position.z()) << ','
        << format_double(p.orientation.w()) << ',' << format_double(p.orientation.x()) << ','
        << format_double(p.orientation.y()) << ',' << format_double(p.orientation.z()) << ','
        << format_double(p.hfov_deg) << ',' << format_double(p.vfov_deg) << ','
        << format_double(p.near_m) << ',' << format_double(p.far_m) << '\n';
  }
  write_file(path, out.str());
}

ScenarioTraces load_traces(const std::filesystem::path& bandwidth_csv,
                           const std::filesystem::path& pose_csv, int expected_gofs) {
  ScenarioTraces traces;

  {
    const std::vector<std::string> lines = read_csv_lines(bandwidth_csv);
    const std::string origin = bandwidth_csv.string();
    if (lines.empty() || lines.front() != "gof,bandwidth_mbps")
      throw ParseError(origin + ": expected header gof,bandwidth_mbps");
    const long long rows = static_cast<long long>(lines.size()) - 1;
    if (rows != expected_gofs) throw LengthMismatch("bandwidth trace", expected_gofs, rows);
    traces.bandwidth_mbps.resize(rows);
    for (long long i = 0; i < rows; ++i) {
      const std::string where = origin + " row " + std::to_string(i + 1);
      const std::vector<std::string> f = split_csv(lines[i + 1]);
      if (f.size() != 2) throw ParseError(where + ": expected 2 fields");
      if (parse_int(f[0], where) != i + 1)
        throw ValidationError(where + ": gof indices must run 1.." + std::to_string(rows));
      traces.bandwidth_mbps[i] = parse_double(f[1], where);
    }
  }

  {
    const std::vector<std::string> lines = read_csv_lines(pose_csv);
    const std::string origin = pose_csv.string();
    static const std::string kHeader =
        "gof,px,py,pz,qw,qx,qy,qz,hfov_deg,vfov_deg,near_m,far_m";
    if (lines.empty() || lines.front() != kHeader)
      throw ParseError(origin + ": expected header " + kHeader);
    const long long rows = static_cast<long long>(lines.size()) - 1;
    if (rows != expected_gofs) throw LengthMismatch("pose trace", expected_gofs, rows);
    traces.poses.resize(rows);
    for (long long i = 0; i < rows; ++i) {
      const std::string where = origin + " row " + std::to_string(i + 1);
      const std::vector<std::string> f = split_csv(lines[i + 1]);
      if (f.size() != 12) throw ParseError(where + ": expected 12 fields");
      if (parse_int(f[0], where) != i + 1)
        throw ValidationError(where + ": gof indices must run 1.." + std::to_string(rows));
      ViewerPose& p = traces.poses[i];
      p.position = Vec3(parse_double(f[1], where), parse_double(f[2], where),
                        parse_double(f[3], where));
      p.orientation = Quat(parse_double(f[4], where), parse_double(f[5], where),
                           parse_double(f[6], where), parse_double(f[7], where));
      p.hfov_deg = parse_double(f[8], where);
      p.vfov_deg = parse_double(f[9], where);
      p.near_m = parse_double(f[10], where);
      p.far_m = parse_double(f[11], where);
    }
  }

  validate(traces, expected_gofs);
  // Stored quaternions are unit to 1e-6; renormalize so downstream rotation
  // math is exact.
  for (ViewerPose& p : traces.poses) p.orientation.normalize();
  return traces;
}

void save_report(const SimulationReport& report, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "gof,ts_s,td_s,tu_s,tb_s\n";
  for (int g = 0; g < report.gof_count(); ++g) {
    out << (g + 1) << ',' << format_double(report.ts_s[g]) << ','
        << format_double(report.td_s[g]) << ',' << format_double(report.tu_s[g]) << ','
        << format_double(report.tb_s[g]) << '\n';
  }
  out << "qoe," << format_double(report.qoe) << '\n';
  out << "utilization," << format_double(report.utilization) << '\n';
  out << "feasible," << (report.feasible ? 1 : 0) << '\n';
  write_file(path, out.str());
}

SimulationReport load_report(const std::filesystem::path& path) {
  const std::vector<std::string> lines = read_csv_lines(path);
  const std::string origin = path.string();
  if (lines.empty() || lines.front() != "gof,ts_s,td_s,tu_s,tb_s")
    throw ParseError(origin + ": expected header gof,ts_s,td_s,tu_s,tb_s");
  if (lines.size() < 4) throw ParseError(origin + ": missing trailer rows");

  const std::size_t rows = lines.size() - 4;  // header + 3 trailers
  SimulationReport report;
  report.ts_s.resize(rows);
  report.td_s.resize(rows);
  report.tu_s.resize(rows);
  report.tb_s.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string where = origin + " row " + std::to_string(i + 1);
    const std::vector<std::string> f = split_csv(lines[i + 1]);
    if (f.size() != 5) throw ParseError(where + ": expected 5 fields");
    if (parse_int(f[0], where) != static_cast<long long>(i) + 1)
      throw ValidationError(where + ": gof indices must run 1.." + std::to_string(rows));
    report.ts_s[i] = parse_double(f[1], where);
    report.td_s[i] = parse_double(f[2], where);
    report.tu_s[i] = parse_double(f[3], where);
    report.tb_s[i] = parse_double(f[4], where);
  }

  auto trailer = [&](std::size_t offset, const std::string& key) -> std::string {
    const std::vector<std::string> f = split_csv(lines[rows + 1 + offset]);
    if (f.size() != 2 || f[0] != key)
      throw ParseError(origin + ": expected trailer row " + key);
    return f[1];
  };
  report.qoe = parse_double(trailer(0, "qoe"), origin + " qoe");
  report.utilization = parse_double(trailer(1, "utilization"), origin + " utilization");
  const long long feasible = parse_int(trailer(2, "feasible"), origin + " feasible");
  if (feasible != 0 && feasible != 1)
    throw ParseError(origin + ": feasible must be 0 or 1");
  report.feasible = feasible == 1;
  return report;
}

void save_plan(const Plan& plan, const std::filesystem::path& path) {
  ordered_json choices = ordered_json::array();
  for (const auto& [key, choice] : plan.choices) {
    choices.push_back({{"g", key.first},
                       {"k", key.second},
                       {"form", choice.form == Form::Compressed ? "compressed" : "raw"},
                       {"level", choice.level}});
  }
  ordered_json root;
  root["choices"] = std::move(choices);
  write_file(path, root.dump(2) + "\n");
}

Plan load_plan(const std::filesystem::path& path) {
  const std::string origin = path.string();
  ordered_json root;
  try {
    root = ordered_json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(origin + ": " + e.what());
  }

  Plan plan;
  try {
    for (const ordered_json& jc : root.at("choices")) {
      const int g = jc.at("g").get<int>();
      const int k = jc.at("k").get<int>();
      const std::string form = jc.at("form").get<std::string>();
      if (form != "compressed" && form != "raw")
        throw ParseError(origin + ": form must be \"compressed\" or \"raw\"");
      if (plan.contains(g, k))
        throw ValidationError(origin + ": duplicate choice for gof " + std::to_string(g) +
                              " tile " + std::to_string(k));
      plan.set(g, k,
               PlanChoice{form == "compressed" ? Form::Compressed : Form::Raw,
                          jc.at("level").get<int>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(origin + ": " + e.what());
  }
  return plan;
}

}  // namespace pcv
