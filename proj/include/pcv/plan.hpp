#pragma once

#include <cstdint>
#include <map>
#include <utility>

namespace pcv {

// Delivery form of one tile: compressed (decode cost applies) or raw.
enum class Form : std::uint8_t { Compressed, Raw };

struct PlanChoice {
  Form form = Form::Compressed;
  int level = 1;
};

inline bool operator==(const PlanChoice& a, const PlanChoice& b) {
  return a.form == b.form && a.level == b.level;
}

// A streaming decision: exactly one (form, level) per visible (gof, tile).
// Keys are 1-based (gof_index, tile_index); map order gives the canonical
// slot order used everywhere decisions are compared or serialized.
struct Plan {
  std::map<std::pair<int, int>, PlanChoice> choices;

  bool contains(int gof, int tile) const { return choices.count({gof, tile}) != 0; }
  const PlanChoice& at(int gof, int tile) const { return choices.at({gof, tile}); }
  void set(int gof, int tile, PlanChoice c) { choices[{gof, tile}] = c; }
  std::size_t size() const { return choices.size(); }
};

inline bool operator==(const Plan& a, const Plan& b) { return a.choices == b.choices; }

}  // namespace pcv
