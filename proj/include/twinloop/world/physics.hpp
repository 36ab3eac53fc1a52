#pragma once

#include "twinloop/world/types.hpp"

// Attach/detach rules of the suction gripper. The simulated managed element
// and the digital twin both step their worlds through these functions, which
// is what makes twin replays and element executions comparable.
namespace twinloop::world {

/// Moves the effector; a held cube follows. Throws Error(kOutOfWorkspace)
/// for unreachable targets and leaves the world untouched.
void move_arm(WorldState& world, Vec3 target, const SceneConfig& config);

/// Turning suction on attaches the nearest cube whose top-face center lies
/// within the grip radius of the effector. Turning it off drops the held
/// cube straight down onto the highest support below it (or the table).
void switch_suction(WorldState& world, bool on, const SceneConfig& config);

/// Cube the suction cup would pick right now, or nullptr.
const CubeObject* grippable_cube(const WorldState& world, const SceneConfig& config);

/// Center height a cube released at its current x/y comes to rest at.
double resting_center_z(const WorldState& world, const CubeObject& cube);

}  // namespace twinloop::world
