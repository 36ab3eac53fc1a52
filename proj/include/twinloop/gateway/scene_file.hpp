#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "twinloop/world/types.hpp"

// YAML scene files:
//
//   config:            # optional, any SceneConfig field
//     cube_edge: 25
//     home: [200, 0, 150]
//     base_yaw_limits_deg: [-135, 135]
//   cubes:
//     - {tag: cube_red, color: red, center: [150, 90]}   # z defaults to edge/2
//   positions:
//     - {tag: pos_red, color: red, center: [230, 90], radius: 20}
//
// Unknown keys are rejected so typos do not pass silently.
namespace twinloop::gateway {

struct Scene {
  world::SceneConfig config;
  std::vector<world::CubeObject> cubes;
  std::vector<world::NamedPosition> positions;
};

/// Throws Error(kBadArguments) with the offending key or value.
Scene parse_scene(std::string_view yaml_text);
/// Throws Error(kIoError) when unreadable, otherwise as parse_scene.
Scene load_scene(const std::filesystem::path& path);
/// Validated world (see world::new_world).
world::WorldState make_world(const Scene& scene);

}  // namespace twinloop::gateway
