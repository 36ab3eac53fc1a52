#include <doctest.h>

#include "check.hpp"
#include "support.hpp"
#include "twinloop/kinematics/kinematics.hpp"
#include "twinloop/metrics/metrics.hpp"
#include "twinloop/pddl/parser.hpp"
#include "twinloop/runtime/runtime.hpp"
#include "twinloop/runtime/task.hpp"
#include "twinloop/world/world.hpp"

using namespace twinloop;
using namespace twinloop::runtime;

namespace {

const std::vector<CubeEdit> kSortEdits{
    {"cube_red", 230, -90, {}}, {"cube_blue", 250, 0, {}}, {"cube_yellow", 230, 90, {}}};

RuntimeConfig instant() {
  RuntimeConfig c;
  c.animation_speed = 0.0;
  return c;
}

template <class T>
std::size_t count_events(const std::vector<RuntimeEvent>& events) {
  std::size_t n = 0;
  for (const auto& e : events) n += std::holds_alternative<T>(e) ? 1 : 0;
  return n;
}

void pick_and_place(Runtime& rt, world::Vec3 from, world::Vec3 to) {
  rt.move_effector({from.x, from.y, 75});
  rt.move_effector({from.x, from.y, 25});
  rt.set_suction(true);
  rt.move_effector({from.x, from.y, 75});
  rt.move_effector({to.x, to.y, 75});
  rt.move_effector({to.x, to.y, 25});
  rt.set_suction(false);
  rt.move_effector({to.x, to.y, 75});
}

}  // namespace

TEST_CASE("declarative session end to end") {
  auto rig = support::make_rig("colorsort.yaml", instant());
  auto& rt = *rig.runtime;
  rt.advance(200);
  rt.select_declarative();
  CHECK(rt.mode() == Mode::kDeclarativeEditing);
  rt.register_goal(kSortEdits);
  CHECK(rt.mode() == Mode::kGoalRegistered);
  REQUIRE(rt.goal());
  CHECK(rt.goal()->size() == 3);
  // the edited cubes are shown where the user put them
  CHECK(rt.twin().find_cube("cube_blue")->center.x == doctest::Approx(250));

  rt.solve();
  CHECK(rt.mode() == Mode::kAwaitingApproval);
  REQUIRE(rt.plan());
  CHECK(rt.plan()->size() == 6);
  CHECK(rig.element->actuation_calls() == 0);
  CHECK(satisfies(rt.twin(), *rt.goal(), rig.scene.config));

  rt.execute();
  CHECK(rt.mode() == Mode::kDone);
  REQUIRE(rt.last_execution());
  CHECK(rt.last_execution()->ok());
  CHECK(rig.element->actuation_calls() == rt.motions().size());
  CHECK(color_sort_progress(rig.element->truth(), rig.scene.config) == SubtaskProgress{3, 3});
  CHECK(metrics::subtasks(rt.log(), "element")->completed == 3);
  CHECK(metrics::subtasks(rt.log(), "vr")->completed == 3);
  CHECK(metrics::completion_time(rt.log()).has_value());
  CHECK(rt.invariant_violations_seen() == 0);
}

TEST_CASE("no actuation before approval") {
  auto rig = support::make_rig("colorsort.yaml");  // 100 mm/s animation
  auto& rt = *rig.runtime;
  rt.select_declarative();
  rt.register_goal(kSortEdits);
  rt.solve();
  CHECK(rt.mode() == Mode::kSimulatingPlan);
  CHECK(rt.animating());
  CHECK_ERROR_CODE(rt.execute(), ErrorCode::kInvalidTransition);
  CHECK(rig.element->actuation_calls() == 0);

  // restart during the simulation returns to editing, nothing sent
  rt.restart();
  CHECK(rt.mode() == Mode::kDeclarativeEditing);
  CHECK_FALSE(rt.goal());
  rt.register_goal(kSortEdits);
  rt.solve();
  int guard = 0;
  while (rt.mode() == Mode::kSimulatingPlan && guard++ < 100000) rt.advance(10);
  CHECK(rt.mode() == Mode::kAwaitingApproval);
  CHECK(rig.element->actuation_calls() == 0);
}

TEST_CASE("procedural record, replay and execute") {
  auto rig = support::make_rig("colorsort.yaml", instant());
  auto& rt = *rig.runtime;
  CHECK_ERROR_CODE(rt.set_suction(true), ErrorCode::kInvalidTransition);
  rt.record();
  pick_and_place(rt, {150, 90, 0}, {230, -90, 0});
  pick_and_place(rt, {150, 0, 0}, {250, 0, 0});
  pick_and_place(rt, {150, -90, 0}, {230, 90, 0});
  // the element has not moved while recording
  CHECK(rig.element->actuation_calls() == 0);
  rt.stop();
  CHECK(rt.mode() == Mode::kProceduralStopped);
  CHECK(color_sort_progress(rt.twin(), rig.scene.config) == SubtaskProgress{3, 3});
  CHECK(rt.recording().size() > 10);

  rt.replay();
  CHECK(color_sort_progress(rt.twin(), rig.scene.config) == SubtaskProgress{3, 3});
  CHECK(rig.element->actuation_calls() == 0);

  rt.execute();
  CHECK(rt.mode() == Mode::kDone);
  CHECK(color_sort_progress(rig.element->truth(), rig.scene.config) == SubtaskProgress{3, 3});
  CHECK(metrics::completion_time(rt.log()).has_value());
}

TEST_CASE("replay animates at the configured speed") {
  auto rig = support::make_rig("colorsort.yaml");
  auto& rt = *rig.runtime;
  rt.record();
  rt.move_effector({200, 0, 50});  // 100 mm from home
  rt.stop();
  rt.replay();
  CHECK(rt.animating());
  rt.advance(500);
  CHECK(rt.twin().robot.effector.z == doctest::Approx(100).epsilon(0.02));
  rt.advance(600);
  CHECK_FALSE(rt.animating());
  CHECK(rt.twin().robot.effector == world::Vec3{200, 0, 50});
}

TEST_CASE("element drop during execution ends in Failed") {
  ElementOptions options;
  options.drop_service_at = 3;
  auto rig = support::make_rig("colorsort.yaml", instant(), options);
  auto& rt = *rig.runtime;
  rt.select_declarative();
  rt.register_goal(kSortEdits);
  rt.solve();
  rt.execute();
  CHECK(rt.mode() == Mode::kFailed);
  REQUIRE(rt.last_execution());
  CHECK(rt.last_execution()->aborted_at == 3u);
  CHECK(rt.last_execution()->results.size() == 4);
  CHECK_FALSE(rt.last_execution()->results.back().ok);
  CHECK(rt.status().notice.find("ServiceUnavailable") != std::string::npos);
  CHECK_ERROR_CODE(rt.monitor_tick(), ErrorCode::kServiceUnavailable);
  rt.restart();
  CHECK(rt.mode() == Mode::kIdle);
}

TEST_CASE("unreachable control sphere is clamped and reported") {
  auto rig = support::make_rig("colorsort.yaml");
  auto& rt = *rig.runtime;
  const world::Vec3 far{600, 0, 80};
  CHECK_ERROR_CODE(rt.move_effector(far), ErrorCode::kOutOfWorkspace);
  CHECK(rt.twin().robot.effector == kinematics::clamp_to_workspace(far, rig.scene.config));
  CHECK(rt.status().notice.find("OutOfWorkspace") != std::string::npos);
  CHECK_ERROR_CODE(rt.move_effector({std::nan(""), 0, 0}), ErrorCode::kBadArguments);
  rt.select_declarative();
  CHECK_ERROR_CODE(rt.move_effector({200, 0, 100}), ErrorCode::kInvalidTransition);
}

TEST_CASE("stale detections") {
  auto rig = support::make_rig("colorsort.yaml");
  auto& rt = *rig.runtime;
  rt.advance(100);
  CHECK_NOTHROW(rt.monitor_tick());
  rig.element->set_detector_online(false);
  const auto before = rt.twin();
  rt.advance(2500);
  CHECK(rt.status().notice.find("StaleData") != std::string::npos);
  CHECK_ERROR_CODE(rt.monitor_tick(), ErrorCode::kStaleData);
  CHECK(rt.twin() == before);
  rig.element->set_detector_online(true);
  rt.advance(200);
  CHECK(rt.status().notice.empty());
}

TEST_CASE("twin mirrors the element outside recording") {
  auto rig = support::make_rig("colorsort.yaml");
  auto& rt = *rig.runtime;
  rt.advance(200);
  // someone moves a cube on the real table
  rig.element->move_to({150, 90, 25});
  rig.element->set_suction(true);
  rig.element->move_to({200, 60, 75});
  rig.element->set_suction(false);
  rt.advance(300);
  const auto* red = rt.twin().find_cube("cube_red");
  CHECK(red->center.x == doctest::Approx(200));
  CHECK(red->center.y == doctest::Approx(60));

  // while recording the twin is a sandbox
  rt.record();
  rig.element->move_to({200, 60, 25});
  rig.element->set_suction(true);
  rig.element->move_to({120, 120, 75});
  rig.element->set_suction(false);
  rt.advance(300);
  CHECK(rt.twin().find_cube("cube_red")->center.x == doctest::Approx(200));
}

TEST_CASE("topic traffic") {
  auto rig = support::make_rig("colorsort.yaml");
  auto& rt = *rig.runtime;
  auto first = rt.drain_events();
  CHECK(count_events<ModeStatus>(first) == 1);
  rt.advance(1000);
  const auto events = rt.drain_events();
  CHECK(count_events<CameraMeta>(events) == 1);
  CHECK(count_events<DetectionMessage>(events) == 10);
  CHECK(count_events<TwinUpdate>(events) >= 1);
  rt.record();
  const auto after = rt.drain_events();
  REQUIRE(count_events<ModeStatus>(after) >= 1);
  CHECK(std::get<ModeStatus>(after.front()).mode == Mode::kProceduralRecording);
}

TEST_CASE("goal registration errors") {
  auto rig = support::make_rig("colorsort.yaml", instant());
  auto& rt = *rig.runtime;
  CHECK_ERROR_CODE(rt.register_goal(kSortEdits), ErrorCode::kInvalidTransition);
  rt.select_declarative();
  CHECK_ERROR_CODE(rt.register_goal({{"cube_green", 200, 0, {}}}), ErrorCode::kUnknownTag);
  CHECK_ERROR_CODE(rt.register_goal({}), ErrorCode::kEmptyGoal);
  CHECK_ERROR_CODE(rt.register_goal({{"cube_red", 200, 0, 12.5}, {"cube_blue", 205, 0, 12.5}}),
                   ErrorCode::kInvalidWorld);
  CHECK(rt.mode() == Mode::kDeclarativeEditing);
  CHECK_ERROR_CODE(rt.solve(), ErrorCode::kInvalidTransition);

  // dropped on top of another cube: the goal is a stack
  rt.register_goal({{"cube_red", 150, 0, {}}});
  CHECK(rt.goal()->contains(pddl::parse_atom("(on cube_red cube_blue)")));
}

TEST_CASE("planning failure returns to editing") {
  auto config = instant();
  config.node_budget = 1;
  auto rig = support::make_rig("colorsort.yaml", config);
  auto& rt = *rig.runtime;
  rt.select_declarative();
  rt.register_goal(kSortEdits);
  rt.solve();
  CHECK(rt.mode() == Mode::kDeclarativeEditing);
  CHECK(rt.status().notice.find("BudgetExceeded") != std::string::npos);
  CHECK_FALSE(rt.plan());
  CHECK(rig.element->actuation_calls() == 0);
}

TEST_CASE("async jobs complete through advance") {
  auto config = instant();
  config.async_jobs = true;
  auto rig = support::make_rig("colorsort.yaml", config);
  auto& rt = *rig.runtime;
  rt.select_declarative();
  rt.register_goal(kSortEdits);
  rt.solve();
  int guard = 0;
  while (rt.mode() != Mode::kAwaitingApproval && guard++ < 100000) rt.advance(10);
  CHECK(rt.mode() == Mode::kAwaitingApproval);
  rt.execute();
  while (rt.busy() && guard++ < 200000) rt.advance(10);
  CHECK(rt.mode() == Mode::kDone);
}
