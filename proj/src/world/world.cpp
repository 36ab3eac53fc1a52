#include "twinloop/world/world.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "twinloop/common/error.hpp"
#include "twinloop/kinematics/kinematics.hpp"

namespace twinloop::world {
namespace {

constexpr double kRestEps = 1e-6;

std::string fmt(Vec3 v) {
  std::ostringstream out;
  out << "(" << v.x << ", " << v.y << ", " << v.z << ")";
  return out.str();
}

}  // namespace

bool cubes_overlap(const CubeObject& a, const CubeObject& b, double tol_overlap) {
  const double extent = (a.edge + b.edge) / 2.0 - tol_overlap;
  return std::abs(a.center.x - b.center.x) < extent && std::abs(a.center.y - b.center.y) < extent &&
         std::abs(a.center.z - b.center.z) < extent;
}

Vec3 held_cube_center(const RobotState& robot, double edge) {
  return robot.effector - Vec3{0.0, 0.0, edge / 2.0};
}

WorldState new_world(const SceneConfig& config, std::vector<CubeObject> cubes,
                     std::vector<NamedPosition> positions) {
  std::set<std::string> tags;
  for (const auto& cube : cubes) {
    if (!tags.insert(cube.tag).second) {
      throw Error(ErrorCode::kDuplicateTag, "duplicate tag '" + cube.tag + "'");
    }
  }
  for (const auto& pos : positions) {
    if (!tags.insert(pos.tag).second) {
      throw Error(ErrorCode::kDuplicateTag, "duplicate tag '" + pos.tag + "'");
    }
  }
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    for (std::size_t k = i + 1; k < cubes.size(); ++k) {
      if (cubes_overlap(cubes[i], cubes[k], config.tol_overlap)) {
        throw Error(ErrorCode::kOverlappingCubes,
                    "cubes '" + cubes[i].tag + "' and '" + cubes[k].tag + "' overlap");
      }
    }
  }
  if (!kinematics::reachable(config.home, config)) {
    throw Error(ErrorCode::kUnreachableHomePose, "home pose " + fmt(config.home) + " is unreachable");
  }

  std::sort(cubes.begin(), cubes.end(), [](const auto& a, const auto& b) { return a.tag < b.tag; });
  WorldState world;
  world.cubes = std::move(cubes);
  world.positions = std::move(positions);
  world.robot.effector = config.home;
  world.robot.suction = false;
  world.robot.joints = kinematics::inverse(config.home, config);
  check_invariants(world, config);
  return world;
}

TaggedEntity find_by_tag(const WorldState& world, std::string_view tag) {
  if (const auto* cube = world.find_cube(tag)) {
    return *cube;
  }
  if (const auto* pos = world.find_position(tag)) {
    return *pos;
  }
  throw Error(ErrorCode::kUnknownTag, "unknown tag '" + std::string(tag) + "'");
}

std::vector<std::string> invariant_violations(const WorldState& world, const SceneConfig& config) {
  std::vector<std::string> out;
  if (config.rear_arm_length <= 0.0 || config.forearm_length <= 0.0) {
    out.push_back("link lengths must be positive");
  }
  if (config.tol_at < 0.0 || config.tol_on < 0.0 || config.tol_overlap < 0.0) {
    out.push_back("tolerances must be non-negative");
  }

  std::set<std::string> tags;
  for (const auto& cube : world.cubes) {
    if (!tags.insert(cube.tag).second) out.push_back("duplicate tag '" + cube.tag + "'");
    if (!is_finite(cube.center)) out.push_back("cube '" + cube.tag + "' center not finite");
    if (!(cube.edge > 0.0)) out.push_back("cube '" + cube.tag + "' edge must be positive");
    const bool held = world.held && *world.held == cube.tag;
    if (!held && cube.center.z < cube.edge / 2.0 - kRestEps) {
      out.push_back("cube '" + cube.tag + "' sinks below the table");
    }
  }
  for (const auto& pos : world.positions) {
    if (!tags.insert(pos.tag).second) out.push_back("duplicate tag '" + pos.tag + "'");
    if (!is_finite(pos.center)) out.push_back("position '" + pos.tag + "' center not finite");
    if (!(pos.radius > 0.0)) out.push_back("position '" + pos.tag + "' radius must be positive");
  }

  if (!is_finite(world.robot.effector) || !kinematics::reachable(world.robot.effector, config)) {
    out.push_back("effector " + fmt(world.robot.effector) + " outside the workspace");
  }

  if (world.held) {
    const auto* cube = world.find_cube(*world.held);
    if (cube == nullptr) {
      out.push_back("held tag '" + *world.held + "' is not a cube");
    } else {
      if (!world.robot.suction) out.push_back("holding '" + *world.held + "' with suction off");
      if (distance(cube->center, held_cube_center(world.robot, cube->edge)) > kRestEps) {
        out.push_back("held cube '" + cube->tag + "' is not attached under the effector");
      }
    }
  }

  for (std::size_t i = 0; i < world.cubes.size(); ++i) {
    for (std::size_t k = i + 1; k < world.cubes.size(); ++k) {
      const auto& a = world.cubes[i];
      const auto& b = world.cubes[k];
      if (world.held && (*world.held == a.tag || *world.held == b.tag)) continue;
      if (cubes_overlap(a, b, config.tol_overlap)) {
        out.push_back("cubes '" + a.tag + "' and '" + b.tag + "' overlap");
      }
    }
  }
  return out;
}

void check_invariants(const WorldState& world, const SceneConfig& config) {
  const auto violations = invariant_violations(world, config);
  if (!violations.empty()) {
    throw Error(ErrorCode::kInvalidWorld, violations.front());
  }
}

}  // namespace twinloop::world
