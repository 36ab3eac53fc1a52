#include "twinloop/world/physics.hpp"

#include <limits>

#include "twinloop/common/error.hpp"
#include "twinloop/kinematics/kinematics.hpp"
#include "twinloop/world/world.hpp"

namespace twinloop::world {
namespace {

constexpr double kContactEps = 1e-6;

}  // namespace

void move_arm(WorldState& world, Vec3 target, const SceneConfig& config) {
  JointAngles joints;
  try {
    joints = kinematics::inverse(target, config);
  } catch (const Error& e) {
    throw Error(ErrorCode::kOutOfWorkspace, e.what());
  }
  world.robot.effector = target;
  world.robot.joints = joints;
  if (world.held) {
    if (auto* cube = world.find_cube(*world.held)) {
      cube->center = held_cube_center(world.robot, cube->edge);
    }
  }
}

const CubeObject* grippable_cube(const WorldState& world, const SceneConfig& config) {
  const CubeObject* best = nullptr;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& cube : world.cubes) {
    if (world.held && *world.held == cube.tag) continue;
    const double d = distance(cube.top_center(), world.robot.effector);
    if (d <= config.grip_radius + kContactEps && d < best_dist) {
      best = &cube;
      best_dist = d;
    }
  }
  return best;
}

double resting_center_z(const WorldState& world, const CubeObject& cube) {
  double support_top = 0.0;
  for (const auto& other : world.cubes) {
    if (other.tag == cube.tag) continue;
    if (world.held && *world.held == other.tag) continue;
    const double reach = (cube.edge + other.edge) / 2.0;
    const bool under = std::abs(other.center.x - cube.center.x) < reach &&
                       std::abs(other.center.y - cube.center.y) < reach;
    if (under && other.top_z() <= cube.bottom_z() + kContactEps && other.top_z() > support_top) {
      support_top = other.top_z();
    }
  }
  return support_top + cube.edge / 2.0;
}

void switch_suction(WorldState& world, bool on, const SceneConfig& config) {
  if (on == world.robot.suction) {
    return;
  }
  world.robot.suction = on;
  if (on) {
    if (const auto* cube = grippable_cube(world, config)) {
      const std::string tag = cube->tag;
      world.held = tag;
      auto* attached = world.find_cube(tag);
      attached->center = held_cube_center(world.robot, attached->edge);
    }
    return;
  }
  if (world.held) {
    const std::string tag = *world.held;
    world.held.reset();
    if (auto* cube = world.find_cube(tag)) {
      cube->center.z = resting_center_z(world, *cube);
    }
  }
}

}  // namespace twinloop::world
