#include "twinloop/bridge/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "twinloop/common/error.hpp"
#include "twinloop/kinematics/kinematics.hpp"
#include "twinloop/pddl/blocksworld.hpp"
#include "twinloop/world/physics.hpp"

namespace twinloop::bridge {
namespace {

using pddl::Atom;
using world::CubeObject;
using world::NamedPosition;

bool is_held(const WorldState& w, const CubeObject& cube) { return w.held && *w.held == cube.tag; }

// Support cube directly below `cube`, if any.
const CubeObject* support_of(const WorldState& w, const CubeObject& cube, double tol_on) {
  const CubeObject* found = nullptr;
  for (const auto& other : w.cubes) {
    if (other.tag == cube.tag || is_held(w, other)) continue;
    const double dz = cube.center.z - other.center.z;
    const double expected = (cube.edge + other.edge) / 2.0;
    if (std::abs(cube.center.x - other.center.x) <= tol_on &&
        std::abs(cube.center.y - other.center.y) <= tol_on && std::abs(dz - expected) <= tol_on) {
      if (found != nullptr) {
        throw Error(ErrorCode::kAmbiguousStacking,
                    cube.tag + " rests on both " + found->tag + " and " + other.tag);
      }
      found = &other;
    }
  }
  return found;
}

const NamedPosition* position_of(const WorldState& w, const CubeObject& cube, double tol_at) {
  const NamedPosition* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& p : w.positions) {
    const double d = world::horizontal_distance(cube.center, p.center);
    if (d <= p.radius + tol_at && d < best_d) {
      best = &p;
      best_d = d;
    }
  }
  return best;
}

const CubeObject& cube_arg(const WorldState& w, const std::string& tag) {
  if (const auto* cube = w.find_cube(tag)) return *cube;
  throw Error(ErrorCode::kUnknownTag, "no cube tagged '" + tag + "'");
}

const NamedPosition& position_arg(const WorldState& w, const std::string& tag) {
  if (const auto* p = w.find_position(tag)) return *p;
  throw Error(ErrorCode::kUnknownTag, "no position tagged '" + tag + "'");
}

std::string format_point(Vec3 p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.1f, %.1f, %.1f)", p.x, p.y, p.z);
  return buf;
}

class MotionBuilder {
 public:
  MotionBuilder(const WorldState& w, const SceneConfig& config) : world_(w), config_(config) {}

  void pick(const std::string& tag) {
    const Vec3 grip = cube_arg(world_, tag).top_center();
    const Vec3 above = grip + Vec3{0, 0, config_.approach_height};
    move(above);
    move(grip);
    suction(true);
    if (!world_.held || *world_.held != tag) {
      throw Error(ErrorCode::kUnreachableTarget, "suction cup cannot grip " + tag);
    }
    move(above);
  }

  // Effector point at which the held cube's center sits at `center`.
  void release_at(Vec3 center) {
    const auto& held = cube_arg(world_, world_.held.value_or(""));
    const Vec3 release = center + Vec3{0, 0, held.edge / 2.0};
    const Vec3 above = release + Vec3{0, 0, config_.approach_height};
    move(above);
    move(release);
    suction(false);
    move(above);
  }

  void place(const std::string& pos_tag) {
    const auto& p = position_arg(world_, pos_tag);
    release_at({p.center.x, p.center.y, held_edge() / 2.0});
  }

  void stack(const std::string& support_tag) {
    const auto& support = cube_arg(world_, support_tag);
    release_at({support.center.x, support.center.y, support.top_z() + held_edge() / 2.0});
  }

  void put_down() { release_at(parking_spot()); }

  void require_holding(const std::string& tag) {
    if (!world_.held || *world_.held != tag) {
      throw Error(ErrorCode::kUnreachableTarget, "plan releases " + tag + " which is not held");
    }
  }

  MotionQueue take() { return std::move(queue_); }

 private:
  double held_edge() const { return cube_arg(world_, *world_.held).edge; }

  void move(Vec3 target) {
    if (!kinematics::reachable(target, config_)) {
      throw Error(ErrorCode::kUnreachableTarget, "motion target " + format_point(target) +
                                                     " is outside the arm workspace");
    }
    world::move_arm(world_, target, config_);
    queue_.push_back(MotionPrimitive::move_to(target));
  }

  void suction(bool on) {
    world::switch_suction(world_, on, config_);
    queue_.push_back(MotionPrimitive::set_suction(on));
  }

  // Free table spot for put-down: away from other cubes and from every
  // position's capture zone, reachable with approach clearance. Nearest to
  // the current effector wins.
  Vec3 parking_spot() const {
    const auto& held = cube_arg(world_, *world_.held);
    const double half = held.edge / 2.0;
    std::optional<Vec3> best;
    double best_d = std::numeric_limits<double>::infinity();
    const Vec3 base = config_.base_position;
    for (int ri = 0; ri <= 30; ++ri) {
      const double r = 100.0 + 6.0 * ri;
      for (int ai = -24; ai <= 24; ++ai) {
        const double a = world::deg_to_rad(5.0 * ai);
        const Vec3 c{base.x + r * std::cos(a), base.y + r * std::sin(a), half};
        if (!spot_is_free(c, held)) continue;
        const Vec3 release = c + Vec3{0, 0, half};
        if (!kinematics::reachable(release, config_) ||
            !kinematics::reachable(release + Vec3{0, 0, config_.approach_height}, config_)) {
          continue;
        }
        const double d = world::horizontal_distance(c, world_.robot.effector);
        if (d < best_d) {
          best = c;
          best_d = d;
        }
      }
    }
    if (!best) throw Error(ErrorCode::kUnreachableTarget, "no free table spot to put down " + held.tag);
    return *best;
  }

  bool spot_is_free(Vec3 c, const CubeObject& held) const {
    for (const auto& other : world_.cubes) {
      if (other.tag == held.tag) continue;
      const double gap = (held.edge + other.edge) / 2.0 + config_.tol_on + config_.tol_overlap;
      if (std::abs(other.center.x - c.x) < gap && std::abs(other.center.y - c.y) < gap) return false;
    }
    for (const auto& p : world_.positions) {
      if (world::horizontal_distance(c, p.center) <= p.radius + config_.tol_at + held.edge / 2.0) {
        return false;
      }
    }
    return true;
  }

  WorldState world_;
  const SceneConfig& config_;
  MotionQueue queue_;
};

}  // namespace

std::string to_string(const MotionPrimitive& primitive) {
  if (primitive.kind == MotionPrimitive::Kind::kSuction) {
    return primitive.suction ? "suction on" : "suction off";
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "move_to %.3f %.3f %.3f", primitive.target.x, primitive.target.y,
                primitive.target.z);
  return buf;
}

bool suction_alternates(const MotionQueue& queue) {
  std::optional<bool> last;
  for (const auto& p : queue) {
    if (p.kind != MotionPrimitive::Kind::kSuction) continue;
    if (last && *last == p.suction) return false;
    last = p.suction;
  }
  return true;
}

pddl::AtomSet extract_init(const WorldState& w, const SceneConfig& config) {
  pddl::AtomSet atoms;
  std::vector<std::string> covered;   // cubes with something on top
  std::vector<std::string> occupied;  // positions with a cube
  for (const auto& cube : w.cubes) {
    if (is_held(w, cube)) {
      atoms.insert({"holding", {cube.tag}});
      continue;
    }
    if (const auto* support = support_of(w, cube, config.tol_on)) {
      atoms.insert({"on", {cube.tag, support->tag}});
      covered.push_back(support->tag);
      continue;
    }
    atoms.insert({"ontable", {cube.tag}});
    if (const auto* p = position_of(w, cube, config.tol_at)) {
      atoms.insert({"at", {cube.tag, p->tag}});
      occupied.push_back(p->tag);
    }
  }
  for (const auto& cube : w.cubes) {
    if (is_held(w, cube)) continue;
    if (std::find(covered.begin(), covered.end(), cube.tag) == covered.end()) {
      atoms.insert({"clear", {cube.tag}});
    }
  }
  for (const auto& p : w.positions) {
    if (std::find(occupied.begin(), occupied.end(), p.tag) == occupied.end()) {
      atoms.insert({"free", {p.tag}});
    }
  }
  if (!w.held) atoms.insert({"handempty", {}});
  return atoms;
}

pddl::AtomSet register_goal(const WorldState& snapshot, const SceneConfig& config) {
  pddl::AtomSet goal;
  for (const auto& atom : extract_init(snapshot, config)) {
    if (atom.predicate == "at" || atom.predicate == "on") goal.insert(atom);
  }
  if (goal.empty()) {
    throw Error(ErrorCode::kEmptyGoal, "no cube sits at a position or on another cube");
  }
  return goal;
}

std::map<std::string, std::string> objects_of(const WorldState& w) {
  std::map<std::string, std::string> objects;
  for (const auto& cube : w.cubes) objects[cube.tag] = "block";
  for (const auto& p : w.positions) objects[p.tag] = "position";
  return objects;
}

pddl::Problem build_problem(const pddl::AtomSet& init, const pddl::AtomSet& goal,
                            const std::map<std::string, std::string>& objects, const std::string& name) {
  const auto& domain = pddl::extended_blocksworld();
  for (const auto& [object, type] : objects) {
    if (!domain.has_type(type)) {
      throw Error(ErrorCode::kTypeError, "object " + object + " has unknown type " + type);
    }
  }
  auto check = [&](const Atom& atom) {
    const auto* schema = domain.find_predicate(atom.predicate);
    if (schema == nullptr) {
      throw Error(ErrorCode::kTypeError, "unknown predicate in " + pddl::to_string(atom));
    }
    if (schema->params.size() != atom.args.size()) {
      throw Error(ErrorCode::kTypeError, "wrong arity in " + pddl::to_string(atom));
    }
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
      auto it = objects.find(atom.args[i]);
      if (it == objects.end()) {
        throw Error(ErrorCode::kTypeError,
                    "undeclared object " + atom.args[i] + " in " + pddl::to_string(atom));
      }
      if (!domain.is_subtype(it->second, schema->params[i].type)) {
        throw Error(ErrorCode::kTypeError, atom.args[i] + " is a " + it->second + ", expected " +
                                               schema->params[i].type + " in " +
                                               pddl::to_string(atom));
      }
    }
  };
  for (const auto& atom : init) check(atom);
  for (const auto& atom : goal) check(atom);

  pddl::Problem problem;
  problem.name = name;
  problem.domain = domain.name;
  problem.objects = objects;
  problem.init = init;
  problem.goal = goal;
  return problem;
}

MotionQueue plan_to_motions(const pddl::Plan& plan, const WorldState& w, const SceneConfig& config) {
  MotionBuilder builder(w, config);
  for (const auto& step : plan.steps) {
    const auto& a = step.args;
    auto need = [&](std::size_t n) {
      if (a.size() != n) {
        throw Error(ErrorCode::kArityMismatch, pddl::to_string(step) + " expects " +
                                                   std::to_string(n) + " arguments");
      }
    };
    if (step.name == "pick-up") {
      need(1);
      builder.pick(a[0]);
    } else if (step.name == "unstack" || step.name == "pick-from-pos") {
      need(2);
      builder.pick(a[0]);
    } else if (step.name == "put-down") {
      need(1);
      builder.require_holding(a[0]);
      builder.put_down();
    } else if (step.name == "stack") {
      need(2);
      builder.require_holding(a[0]);
      builder.stack(a[1]);
    } else if (step.name == "place") {
      need(2);
      builder.require_holding(a[0]);
      builder.place(a[1]);
    } else {
      throw Error(ErrorCode::kUnknownAction, "no motion expansion for " + step.name);
    }
  }
  return builder.take();
}

}  // namespace twinloop::bridge
