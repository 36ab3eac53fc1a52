#include "twinloop/runtime/task.hpp"

#include "twinloop/bridge/bridge.hpp"

namespace twinloop::runtime {

SubtaskProgress color_sort_progress(const world::WorldState& world, const world::SceneConfig& config) {
  const auto atoms = bridge::extract_init(world, config);
  SubtaskProgress progress;
  for (const auto& cube : world.cubes) {
    if (cube.color == world::Color::kOther) continue;
    bool has_target = false;
    bool done = false;
    for (const auto& p : world.positions) {
      if (p.color != cube.color) continue;
      has_target = true;
      if (atoms.count({"at", {cube.tag, p.tag}}) != 0) done = true;
    }
    if (!has_target) continue;
    ++progress.total;
    if (done) ++progress.completed;
  }
  return progress;
}

SubtaskProgress goal_progress(const pddl::AtomSet& goal, const world::WorldState& world,
                              const world::SceneConfig& config) {
  const auto atoms = bridge::extract_init(world, config);
  SubtaskProgress progress{0, static_cast<int>(goal.size())};
  for (const auto& g : goal) {
    if (atoms.count(g) != 0) ++progress.completed;
  }
  return progress;
}

bool satisfies(const world::WorldState& world, const pddl::AtomSet& goal, const world::SceneConfig& config) {
  const auto p = goal_progress(goal, world, config);
  return p.completed == p.total;
}

}  // namespace twinloop::runtime
