#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "twinloop/world/types.hpp"

namespace twinloop::world {

/// Builds a validated world: cubes sorted by tag, robot at the configured
/// home pose with suction off and nothing held.
/// Throws Error(kDuplicateTag | kOverlappingCubes | kUnreachableHomePose).
WorldState new_world(const SceneConfig& config, std::vector<CubeObject> cubes,
                     std::vector<NamedPosition> positions);

using TaggedEntity = std::variant<CubeObject, NamedPosition>;

/// Throws Error(kUnknownTag).
TaggedEntity find_by_tag(const WorldState& world, std::string_view tag);

/// True when the two cubes interpenetrate by more than the overlap tolerance
/// along every axis.
bool cubes_overlap(const CubeObject& a, const CubeObject& b, double tol_overlap);

/// Grip offset: a held cube hangs with its top face on the suction cup.
Vec3 held_cube_center(const RobotState& robot, double edge);

/// All invariant violations of `world`, empty when valid.
std::vector<std::string> invariant_violations(const WorldState& world, const SceneConfig& config);

/// Throws Error(kInvalidWorld) listing the first violation.
void check_invariants(const WorldState& world, const SceneConfig& config);

}  // namespace twinloop::world
