#include "twinloop/world/types.hpp"

#include <algorithm>

namespace twinloop::world {

std::string_view to_string(Color color) {
  switch (color) {
    case Color::kRed: return "red";
    case Color::kBlue: return "blue";
    case Color::kYellow: return "yellow";
    case Color::kOther: return "other";
  }
  return "other";
}

Color color_from_string(std::string_view name) {
  if (name == "red") return Color::kRed;
  if (name == "blue") return Color::kBlue;
  if (name == "yellow") return Color::kYellow;
  return Color::kOther;
}

const CubeObject* WorldState::find_cube(std::string_view tag) const {
  auto it = std::find_if(cubes.begin(), cubes.end(), [&](const auto& c) { return c.tag == tag; });
  return it == cubes.end() ? nullptr : &*it;
}

CubeObject* WorldState::find_cube(std::string_view tag) {
  auto it = std::find_if(cubes.begin(), cubes.end(), [&](const auto& c) { return c.tag == tag; });
  return it == cubes.end() ? nullptr : &*it;
}

const NamedPosition* WorldState::find_position(std::string_view tag) const {
  auto it = std::find_if(positions.begin(), positions.end(),
                         [&](const auto& p) { return p.tag == tag; });
  return it == positions.end() ? nullptr : &*it;
}

}  // namespace twinloop::world
