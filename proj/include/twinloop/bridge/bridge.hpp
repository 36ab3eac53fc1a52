#pragma once

#include <map>
#include <string>
#include <vector>

#include "twinloop/pddl/ast.hpp"
#include "twinloop/world/types.hpp"

// Geometry <-> PDDL. Cubes become `block` objects and named positions become
// `position` objects, both named by their tag.
namespace twinloop::bridge {

using world::SceneConfig;
using world::Vec3;
using world::WorldState;

struct MotionPrimitive {
  enum class Kind { kMoveTo, kSuction };

  Kind kind = Kind::kMoveTo;
  Vec3 target;           // kMoveTo
  bool suction = false;  // kSuction

  static MotionPrimitive move_to(Vec3 target) { return {Kind::kMoveTo, target, false}; }
  static MotionPrimitive set_suction(bool on) { return {Kind::kSuction, {}, on}; }

  friend bool operator==(const MotionPrimitive&, const MotionPrimitive&) = default;
};

using MotionQueue = std::vector<MotionPrimitive>;

/// "move_to 150.000 90.000 37.500" or "suction on" / "suction off".
std::string to_string(const MotionPrimitive& primitive);

/// No two consecutive suction primitives request the same state.
bool suction_alternates(const MotionQueue& queue);

/// Symbolic description of the scene.
///  - (on y x): y's center within tol_on of x's top in x/y and of one edge
///    above x's center in z
///  - (ontable x): x is not held and has no support cube
///  - (at x p): x rests on the table within p.radius + tol_at of p's center,
///    nearest position wins
///  - (clear x), (free p), (handempty) / (holding x)
/// Throws Error(kAmbiguousStacking) when a cube matches two supports.
pddl::AtomSet extract_init(const WorldState& world, const SceneConfig& config);

/// The (at ..) and (on ..) atoms of the snapshot. Throws Error(kEmptyGoal)
/// when there are none.
pddl::AtomSet register_goal(const WorldState& snapshot, const SceneConfig& config);

/// Cube tags map to "block", position tags to "position".
std::map<std::string, std::string> objects_of(const WorldState& world);

/// Problem over the bundled extended Blocksworld domain. Throws
/// Error(kTypeError) when an atom names an unknown predicate or object, has
/// the wrong arity, or binds an object of the wrong type.
pddl::Problem build_problem(const pddl::AtomSet& init, const pddl::AtomSet& goal,
                            const std::map<std::string, std::string>& objects,
                            const std::string& name = "twin-task");

/// Expands every step into four primitives: approach from `approach_height`
/// above, descend to the grip or release point, switch suction, retreat.
/// Coordinates come from the world as it will be after the preceding steps.
/// Throws Error(kUnknownTag | kUnknownAction | kUnreachableTarget).
MotionQueue plan_to_motions(const pddl::Plan& plan, const WorldState& world,
                            const SceneConfig& config);

}  // namespace twinloop::bridge
