#include "pcv/ply.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pcv/errors.hpp"

namespace pcv {
namespace {

struct PropertyLayout {
  int x = -1, y = -1, z = -1;
  int red = -1, green = -1, blue = -1;
  int total = 0;
};

// Header description of one element: its name, row count, and how many
// properties each row carries (list properties are rejected for vertices,
// tolerated elsewhere since we skip those rows wholesale).
struct ElementDecl {
  std::string name;
  long long count = 0;
  PropertyLayout props;
  bool has_list = false;
};

}  // namespace

PointCloudFrame load_ply(const std::filesystem::path& path) {
  std::ifstream in(path);
  const std::string origin = path.string();
  if (!in) throw ParseError(origin + ": cannot open");

  std::string line;
  if (!std::getline(in, line)) throw ParseError(origin + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "ply") throw ParseError(origin + ": missing ply magic");

  std::vector<ElementDecl> elements;
  bool ascii = false;
  bool header_done = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string keyword;
    ls >> keyword;
    if (keyword == "comment" || keyword == "obj_info" || keyword.empty()) continue;
    if (keyword == "format") {
      std::string kind;
      ls >> kind;
      ascii = kind == "ascii";
      if (!ascii) throw ParseError(origin + ": only ascii format is supported, got " + kind);
    } else if (keyword == "element") {
      ElementDecl decl;
      if (!(ls >> decl.name >> decl.count))
        throw ParseError(origin + ": malformed element line: " + line);
      elements.push_back(decl);
    } else if (keyword == "property") {
      if (elements.empty()) throw ParseError(origin + ": property before any element");
      ElementDecl& decl = elements.back();
      std::string type;
      ls >> type;
      if (type == "list") {
        decl.has_list = true;
        continue;
      }
      std::string name;
      ls >> name;
      const int slot = decl.props.total++;
      if (name == "x") decl.props.x = slot;
      else if (name == "y") decl.props.y = slot;
      else if (name == "z") decl.props.z = slot;
      else if (name == "red") decl.props.red = slot;
      else if (name == "green") decl.props.green = slot;
      else if (name == "blue") decl.props.blue = slot;
    } else if (keyword == "end_header") {
      header_done = true;
      break;
    } else {
      throw ParseError(origin + ": unknown header keyword " + keyword);
    }
  }
  if (!header_done) throw ParseError(origin + ": missing end_header");
  if (!ascii) throw ParseError(origin + ": missing format line");

  const ElementDecl* vertex = nullptr;
  for (const ElementDecl& decl : elements)
    if (decl.name == "vertex") vertex = &decl;
  if (vertex == nullptr) throw ParseError(origin + ": no vertex element");
  if (vertex->props.x < 0 || vertex->props.y < 0 || vertex->props.z < 0)
    throw ParseError(origin + ": vertex element lacks x/y/z properties");
  if (vertex->has_list)
    throw ParseError(origin + ": list properties on vertices are not supported");
  if (vertex->count == 0) throw EmptyFrame(origin + ": vertex element has zero entries");

  const bool want_color =
      vertex->props.red >= 0 && vertex->props.green >= 0 && vertex->props.blue >= 0;

  PointCloudFrame frame;
  frame.positions.resize(vertex->count, 3);
  if (want_color) frame.colors.resize(vertex->count, 3);

  std::vector<double> fields(vertex->props.total);
  for (const ElementDecl& decl : elements) {
    if (&decl != vertex) {
      // Skip this element's rows (e.g. faces); they are line-delimited too.
      for (long long i = 0; i < decl.count; ++i)
        if (!std::getline(in, line))
          throw ParseError(origin + ": truncated " + decl.name + " data");
      continue;
    }
    for (long long i = 0; i < decl.count; ++i) {
      if (!std::getline(in, line))
        throw ParseError(origin + ": truncated vertex data at row " + std::to_string(i));
      std::istringstream vs(line);
      for (int p = 0; p < decl.props.total; ++p) {
        if (!(vs >> fields[p]))
          throw ParseError(origin + ": vertex row " + std::to_string(i) + " has fewer than " +
                           std::to_string(decl.props.total) + " values");
      }
      frame.positions(i, 0) = fields[decl.props.x];
      frame.positions(i, 1) = fields[decl.props.y];
      frame.positions(i, 2) = fields[decl.props.z];
      if (want_color) {
        frame.colors(i, 0) = static_cast<std::uint8_t>(fields[decl.props.red]);
        frame.colors(i, 1) = static_cast<std::uint8_t>(fields[decl.props.green]);
        frame.colors(i, 2) = static_cast<std::uint8_t>(fields[decl.props.blue]);
      }
    }
  }

  if (!frame.positions.allFinite())
    throw ValidationError(origin + ": non-finite vertex coordinates");
  return frame;
}

void save_ply(const PointCloudFrame& frame, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError(path.string() + ": cannot open for writing");

  const bool color = frame.has_colors();
  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << frame.point_count() << "\n";
  out << "property float x\nproperty float y\nproperty float z\n";
  if (color)
    out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out << "end_header\n";

  std::ostringstream body;
  for (Eigen::Index i = 0; i < frame.point_count(); ++i) {
    body << frame.positions(i, 0) << ' ' << frame.positions(i, 1) << ' '
         << frame.positions(i, 2);
    if (color)
      body << ' ' << static_cast<int>(frame.colors(i, 0)) << ' '
           << static_cast<int>(frame.colors(i, 1)) << ' '
           << static_cast<int>(frame.colors(i, 2));
    body << '\n';
  }
  out << body.str();
  if (!out) throw ParseError(path.string() + ": write failed");
}

}  // namespace pcv
