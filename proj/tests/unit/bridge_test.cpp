#include <doctest.h>

#include "check.hpp"
#include "support.hpp"
#include "twinloop/bridge/bridge.hpp"
#include "twinloop/pddl/blocksworld.hpp"
#include "twinloop/pddl/grounding.hpp"
#include "twinloop/pddl/parser.hpp"
#include "twinloop/planner/planner.hpp"
#include "twinloop/world/physics.hpp"
#include "twinloop/world/world.hpp"

using namespace twinloop;
using namespace twinloop::world;

namespace {

pddl::AtomSet atoms(std::initializer_list<const char*> list) {
  pddl::AtomSet out;
  for (const char* a : list) out.insert(pddl::parse_atom(a));
  return out;
}

CubeObject cube(std::string tag, Vec3 c) { return {std::move(tag), Color::kRed, c, 25.0}; }

// Runs the motions on a copy of the world with the shared physics.
WorldState run(WorldState w, const bridge::MotionQueue& q, const SceneConfig& c) {
  for (const auto& p : q) {
    if (p.kind == bridge::MotionPrimitive::Kind::kMoveTo) move_arm(w, p.target, c);
    else switch_suction(w, p.suction, c);
  }
  return w;
}

}  // namespace

TEST_CASE("cube at a position") {
  SceneConfig c;
  const auto w = new_world(c, {cube("cubeA", {200, 100, 12.5})}, {{"posA", Color::kRed, {203, 98, 0}, 20}});
  CHECK(bridge::extract_init(w, c) == atoms({"(at cubeA posA)", "(ontable cubeA)", "(clear cubeA)", "(handempty)"}));
}

TEST_CASE("cube on the table") {
  SceneConfig c;
  const auto w = new_world(c, {cube("cubeA", {200, 0, 12.5})}, {{"posA", Color::kRed, {200, 100, 0}, 20}});
  CHECK(bridge::extract_init(w, c) == atoms({"(ontable cubeA)", "(clear cubeA)", "(free posA)", "(handempty)"}));
}

TEST_CASE("cube on a cube") {
  SceneConfig c;
  const auto w = new_world(c, {cube("cubeA", {200, 0, 12.5}), cube("cubeB", {202, -1, 38.5})}, {});
  CHECK(bridge::extract_init(w, c) == atoms({"(on cubeB cubeA)", "(ontable cubeA)", "(clear cubeB)", "(handempty)"}));
}

TEST_CASE("capture radius plus tolerance, nearest position wins") {
  SceneConfig c;  // radius 20, tol_at 15
  auto inside = new_world(c, {cube("a", {200, 0, 12.5})}, {{"p", Color::kRed, {234, 0, 0}, 20}});
  CHECK(bridge::extract_init(inside, c).contains(pddl::parse_atom("(at a p)")));
  auto outside = new_world(c, {cube("a", {200, 0, 12.5})}, {{"p", Color::kRed, {236, 0, 0}, 20}});
  CHECK_FALSE(bridge::extract_init(outside, c).contains(pddl::parse_atom("(at a p)")));
  auto two = new_world(c, {cube("a", {200, 0, 12.5})},
                       {{"near", Color::kRed, {210, 0, 0}, 20}, {"far", Color::kRed, {180, 0, 0}, 20}});
  const auto s = bridge::extract_init(two, c);
  CHECK(s.contains(pddl::parse_atom("(at a near)")));
  CHECK(s.contains(pddl::parse_atom("(free far)")));
}

TEST_CASE("held cube") {
  SceneConfig c;
  auto w = new_world(c, {cube("a", {200, 0, 12.5})}, {});
  move_arm(w, {200, 0, 25}, c);
  switch_suction(w, true, c);
  move_arm(w, {200, 0, 100}, c);
  CHECK(bridge::extract_init(w, c) == atoms({"(holding a)"}));
}

TEST_CASE("ambiguous stacking") {
  SceneConfig c;
  // Not a valid world (a and b interpenetrate); extraction still has to refuse it.
  WorldState w = new_world(c, {}, {});
  w.cubes = {cube("a", {200, 0, 12.5}), cube("b", {214, 0, 12.5}), cube("c", {207, 0, 37.5})};
  CHECK_ERROR_CODE(bridge::extract_init(w, c), ErrorCode::kAmbiguousStacking);
}

TEST_CASE("extraction is translation invariant") {
  SceneConfig c;
  const auto rig = support::make_rig("colorsort.yaml");
  const auto base = rig.runtime->twin();
  WorldState moved = base;
  const Vec3 d{7.5, -11.0, 0};
  for (auto& cb : moved.cubes) cb.center = cb.center + d;
  for (auto& p : moved.positions) p.center = p.center + d;
  CHECK(bridge::extract_init(base, rig.scene.config) == bridge::extract_init(moved, rig.scene.config));
}

TEST_CASE("register_goal keeps only at/on atoms") {
  SceneConfig c;
  auto w = new_world(c, {cube("a", {200, 100, 12.5}), cube("b", {200, 0, 12.5}), cube("d", {200, 0, 37.5})},
                     {{"p", Color::kRed, {200, 100, 0}, 20}});
  CHECK(bridge::register_goal(w, c) == atoms({"(at a p)", "(on d b)"}));
  auto flat = new_world(c, {cube("a", {200, 0, 12.5})}, {});
  CHECK_ERROR_CODE(bridge::register_goal(flat, c), ErrorCode::kEmptyGoal);
}

TEST_CASE("build_problem type checks") {
  const std::map<std::string, std::string> objects{{"a", "block"}, {"p", "position"}};
  const auto p = bridge::build_problem(atoms({"(ontable a)", "(clear a)", "(free p)", "(handempty)"}),
                                       atoms({"(at a p)"}), objects);
  CHECK(p.domain == pddl::extended_blocksworld().name);
  CHECK(planner::solve(pddl::extended_blocksworld(), p).size() == 2);
  CHECK_ERROR_CODE(bridge::build_problem(atoms({"(at p a)"}), atoms({"(clear a)"}), objects), ErrorCode::kTypeError);
  CHECK_ERROR_CODE(bridge::build_problem(atoms({"(zap a)"}), atoms({"(clear a)"}), objects), ErrorCode::kTypeError);
  CHECK_ERROR_CODE(bridge::build_problem(atoms({"(clear z)"}), atoms({"(clear a)"}), objects), ErrorCode::kTypeError);
  CHECK(bridge::objects_of(new_world(SceneConfig{}, {cube("a", {200, 0, 12.5})}, {{"p", Color::kRed, {240, 0, 0}, 20}})) ==
        objects);
}

TEST_CASE("two-cube plan expands to pick/place primitives") {
  const auto rig = support::make_rig("two_cubes.yaml");
  const auto& c = rig.scene.config;
  const auto& w = rig.runtime->twin();
  const auto plan = pddl::parse_plan(support::read_text(support::data_path("plans/two_cubes.plan")));
  const auto q = bridge::plan_to_motions(plan, w, c);
  REQUIRE(q.size() == 16);
  CHECK(bridge::suction_alternates(q));
  // pick-up cube_0 at (160, 60): approach, grip at the top face, suction, retreat
  CHECK(q[0] == bridge::MotionPrimitive::move_to({160, 60, 25 + c.approach_height}));
  CHECK(q[1] == bridge::MotionPrimitive::move_to({160, 60, 25}));
  CHECK(q[2] == bridge::MotionPrimitive::set_suction(true));
  // place cube_0 at pos_0 (240, -60): release with the cube resting on the table
  CHECK(q[5] == bridge::MotionPrimitive::move_to({240, -60, 25}));
  CHECK(q[6] == bridge::MotionPrimitive::set_suction(false));
  CHECK(bridge::to_string(q[6]) == "suction off");
  CHECK(bridge::to_string(q[0]) == "move_to 160.000 60.000 75.000");

  const auto after = run(w, q, c);
  const auto s = bridge::extract_init(after, c);
  CHECK(s.contains(pddl::parse_atom("(at cube_0 pos_0)")));
  CHECK(s.contains(pddl::parse_atom("(at cube_1 pos_1)")));
}

TEST_CASE("stack, unstack and put-down motions reach their symbolic effects") {
  SceneConfig c;
  const auto w = new_world(c, {cube("a", {180, 40, 12.5}), cube("b", {180, -40, 12.5})}, {});
  const auto plan = pddl::parse_plan("(pick-up a)(stack a b)(unstack a b)(put-down a)");
  const auto q = bridge::plan_to_motions(plan, w, c);
  CHECK(q.size() == 16);
  // stack release point: support top plus one edge
  CHECK(q[5].target.z == doctest::Approx(50.0));
  const auto stacked = run(w, {q.begin(), q.begin() + 8}, c);
  CHECK(bridge::extract_init(stacked, c).contains(pddl::parse_atom("(on a b)")));
  const auto after = run(w, q, c);
  const auto s = bridge::extract_init(after, c);
  CHECK(s.contains(pddl::parse_atom("(ontable a)")));
  CHECK(s.contains(pddl::parse_atom("(clear b)")));
  CHECK(invariant_violations(after, c).empty());
}

TEST_CASE("motion errors") {
  SceneConfig c;
  const auto w = new_world(c, {cube("a", {180, 40, 12.5})}, {{"far", Color::kRed, {420, 0, 0}, 20}});
  CHECK_ERROR_CODE(bridge::plan_to_motions(pddl::parse_plan("(fly a)"), w, c), ErrorCode::kUnknownAction);
  CHECK_ERROR_CODE(bridge::plan_to_motions(pddl::parse_plan("(pick-up a b)"), w, c), ErrorCode::kArityMismatch);
  CHECK_ERROR_CODE(bridge::plan_to_motions(pddl::parse_plan("(pick-up zz)"), w, c), ErrorCode::kUnknownTag);
  CHECK_ERROR_CODE(bridge::plan_to_motions(pddl::parse_plan("(pick-up a)(place a far)"), w, c),
                   ErrorCode::kUnreachableTarget);
}

TEST_CASE("planned declarative goal is reached by the motions") {
  const auto rig = support::make_rig("colorsort.yaml");
  const auto& c = rig.scene.config;
  auto goal_world = rig.runtime->twin();
  const std::map<std::string, Vec3> target{
      {"cube_red", {230, -90, 12.5}}, {"cube_blue", {250, 0, 12.5}}, {"cube_yellow", {230, 90, 12.5}}};
  for (auto& cb : goal_world.cubes) cb.center = target.at(cb.tag);
  const auto goal = bridge::register_goal(goal_world, c);
  CHECK(goal.size() == 3);
  const auto init_world = rig.runtime->twin();
  const auto problem = bridge::build_problem(bridge::extract_init(init_world, c), goal, bridge::objects_of(init_world));
  const auto plan = planner::solve(pddl::extended_blocksworld(), problem);
  CHECK(plan.size() == 6);
  const auto after = run(init_world, bridge::plan_to_motions(plan, init_world, c), c);
  const auto s = bridge::extract_init(after, c);
  CHECK(std::includes(s.begin(), s.end(), goal.begin(), goal.end()));
}
