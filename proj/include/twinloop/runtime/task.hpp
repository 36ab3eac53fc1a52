#pragma once

#include "twinloop/pddl/ast.hpp"
#include "twinloop/world/types.hpp"

namespace twinloop::runtime {

struct SubtaskProgress {
  int completed = 0;
  int total = 0;

  friend bool operator==(const SubtaskProgress&, const SubtaskProgress&) = default;
};

/// Colour-sort task: one sub-task per coloured cube that has a position of
/// the same colour; it is complete when the cube is (at) such a position.
SubtaskProgress color_sort_progress(const world::WorldState& world, const world::SceneConfig& config);

/// Goal atoms that hold in the world's symbolic description.
SubtaskProgress goal_progress(const pddl::AtomSet& goal, const world::WorldState& world,
                              const world::SceneConfig& config);

bool satisfies(const world::WorldState& world, const pddl::AtomSet& goal, const world::SceneConfig& config);

}  // namespace twinloop::runtime
