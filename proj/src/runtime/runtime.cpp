#include "twinloop/runtime/runtime.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "twinloop/kinematics/kinematics.hpp"
#include "twinloop/pddl/blocksworld.hpp"
#include "twinloop/world/physics.hpp"
#include "twinloop/world/world.hpp"

namespace twinloop::runtime {
namespace {

using nlohmann::json;

std::string describe(const Error& e) { return std::string(to_string(e.code())) + ": " + e.what(); }

std::string format_point(Vec3 p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.1f, %.1f, %.1f)", p.x, p.y, p.z);
  return buf;
}

template <class T>
bool ready(const std::future<T>& f) {
  return f.valid() && f.wait_for(std::chrono::seconds(0)) == std::future_status::ready;
}

json atoms_json(const pddl::AtomSet& atoms) {
  json out = json::array();
  for (const auto& a : atoms) out.push_back(pddl::to_string(a));
  return out;
}

}  // namespace

Runtime::Runtime(RuntimeConfig config, std::shared_ptr<ElementLink> element, WorldState initial_twin)
    : config_(std::move(config)),
      element_(std::move(element)),
      twin_(std::move(initial_twin)),
      init_world_(twin_),
      record_snapshot_(twin_),
      recording_(config_.sample_distance_mm) {
  log_.participant = config_.participant;
  log_.strategy = metrics::Strategy::kProcedural;
  log_event("session-start");
  events_.emplace_back(status());
}

Runtime::~Runtime() {
  if (plan_job_.valid()) plan_job_.wait();
  if (exec_job_.valid()) exec_job_.wait();
}

// ---------------------------------------------------------------- time

void Runtime::advance(double ms) {
  const double end = now_ms_ + std::max(ms, 0.0);
  if (ms <= 0.0) {
    step(0.0);
    return;
  }
  while (now_ms_ < end - 1e-9) step(std::min(config_.tick_ms, end - now_ms_));
}

void Runtime::step(double dt) {
  now_ms_ += dt;
  poll_jobs();
  if (animation_) advance_animation(dt);
  poll_detection();
  if (now_ms_ + 1e-9 >= next_poll_ms_) {
    next_poll_ms_ = now_ms_ + config_.state_poll_period_ms;
    poll_state();
  }
  const bool stale = now_ms_ - last_detection_ms_ > config_.stale_after_ms;
  if (stale && !stale_) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "StaleData: no object detection for %.1f s",
                  (now_ms_ - last_detection_ms_) / 1000.0);
    set_notice(buf);
  }
  stale_ = stale;
  if (now_ms_ + 1e-9 >= next_camera_ms_) {
    next_camera_ms_ = now_ms_ + config_.camera_period_ms;
    CameraMeta meta;
    meta.stamp_ms = now_ms_;
    events_.emplace_back(meta);
  }
  if (twin_dirty_ && now_ms_ + 1e-9 >= next_twin_ms_) {
    next_twin_ms_ = now_ms_ + config_.twin_publish_period_ms;
    twin_dirty_ = false;
    events_.emplace_back(TwinUpdate{now_ms_, twin_});
  }
}

void Runtime::poll_jobs() {
  if (ready(plan_job_)) finish_planning(plan_job_.get());
  if (ready(exec_job_)) finish_execution(exec_job_.get());
}

bool Runtime::busy() const {
  return plan_job_.valid() || exec_job_.valid() || animation_.has_value();
}

// ---------------------------------------------------------------- monitor

void Runtime::poll_detection() {
  try {
    if (auto msg = element_->poll_detection(now_ms_)) apply_detection(*msg);
  } catch (const Error& e) {
    if (!element_down_) set_notice(describe(e));
    element_down_ = true;
  }
}

void Runtime::poll_state() {
  try {
    element_state_ = element_->get_state();
    if (element_down_) set_notice("");
    element_down_ = false;
    if (mirror_robot()) refresh_twin();
  } catch (const Error& e) {
    if (!element_down_) set_notice(describe(e));
    element_down_ = true;
  }
}

const WorldState& Runtime::monitor_tick() {
  try {
    element_state_ = element_->get_state();
    if (auto msg = element_->poll_detection(now_ms_)) {
      apply_detection(*msg);
    } else if (mirror_robot()) {
      refresh_twin();
    }
  } catch (const Error& e) {
    set_notice(describe(e));
    element_down_ = true;
    throw;
  }
  if (!latest_detection_ || now_ms_ - last_detection_ms_ > config_.stale_after_ms) {
    const Error stale(ErrorCode::kStaleData, "no object detection within " +
                                                 std::to_string(config_.stale_after_ms / 1000.0) + " s");
    set_notice(describe(stale));
    throw stale;
  }
  return twin_;
}

void Runtime::apply_detection(const DetectionMessage& msg) {
  latest_detection_ = msg;
  last_detection_ms_ = now_ms_;
  if (stale_) set_notice("");
  stale_ = false;
  events_.emplace_back(msg);
  if (mirror_cubes() || mirror_robot()) refresh_twin();
}

bool Runtime::mirror_cubes() const {
  switch (mode()) {
    case Mode::kIdle:
    case Mode::kDeclarativeEditing:
    case Mode::kGoalRegistered:
    case Mode::kExecuting:
    case Mode::kDone:
    case Mode::kFailed:
      return true;
    default:
      return false;
  }
}

bool Runtime::mirror_robot() const { return mirror_cubes() && mode() != Mode::kIdle; }

void Runtime::refresh_twin() {
  WorldState w = twin_;
  if (mirror_robot() && element_state_) {
    w.robot.effector = element_state_->effector;
    w.robot.suction = element_state_->suction;
    try {
      w.robot.joints = kinematics::inverse(w.robot.effector, config_.scene);
    } catch (const Error&) {
      // keep the previous joints for a pose the twin cannot reproduce
    }
  }
  if (mirror_cubes() && latest_detection_) {
    w.cubes.clear();
    for (const auto& obj : latest_detection_->objects) {
      world::CubeObject cube{obj.tag, obj.color, obj.center, config_.scene.cube_edge};
      cube.center.z = std::max(cube.center.z, cube.edge / 2.0);
      w.cubes.push_back(cube);
    }
    std::sort(w.cubes.begin(), w.cubes.end(),
              [](const auto& a, const auto& b) { return a.tag < b.tag; });
    w.held.reset();
    if (w.robot.suction) {
      double best = config_.scene.grip_radius;
      for (const auto& cube : w.cubes) {
        const double d = world::distance(cube.center, world::held_cube_center(w.robot, cube.edge));
        if (d <= best) {
          best = d;
          w.held = cube.tag;
        }
      }
      if (w.held) {
        auto* cube = w.find_cube(*w.held);
        cube->center = world::held_cube_center(w.robot, cube->edge);
      }
    }
    const bool editing = mode() == Mode::kDeclarativeEditing || mode() == Mode::kGoalRegistered;
    for (const auto& [tag, center] : editing ? edits_ : std::map<std::string, Vec3>{}) {
      if (auto* cube = w.find_cube(tag); cube != nullptr && w.held != tag) cube->center = center;
    }
  }
  if (w != twin_) {
    twin_ = std::move(w);
    mark_twin();
  }
}

// ---------------------------------------------------------------- bookkeeping

ModeStatus Runtime::status() const {
  return {mode(), std::string(hint(mode())), notice_};
}

void Runtime::fire(Trigger trigger) {
  const Mode from = mode();
  const Mode to = machine_.fire(trigger);
  log_event("transition", {{"from", to_string(from)}, {"trigger", to_string(trigger)}, {"to", to_string(to)}});
  if (to == Mode::kDeclarativeEditing) {
    log_.strategy = metrics::Strategy::kDeclarative;
  } else if (to == Mode::kProceduralRecording) {
    log_.strategy = metrics::Strategy::kProcedural;
  }
  notice_.clear();
  events_.emplace_back(status());
}

void Runtime::set_notice(std::string notice) {
  if (notice == notice_) return;
  notice_ = std::move(notice);
  if (!notice_.empty()) log_event("notice", {{"text", notice_}});
  events_.emplace_back(status());
}

void Runtime::log_event(std::string_view kind, json data) { log_.add(now_ms_ / 1000.0, kind, std::move(data)); }

void Runtime::log_progress(std::string_view where) {
  auto progress = color_sort_progress(twin_, config_.scene);
  if (progress.total == 0 && goal_) progress = goal_progress(*goal_, twin_, config_.scene);
  log_event(metrics::event::kSubtasks,
            {{"where", where}, {"completed", progress.completed}, {"total", progress.total}});
}

void Runtime::mark_twin() {
  twin_dirty_ = true;
  check_twin();
}

void Runtime::check_twin() {
  if (config_.scene.detector_noise > 0.0) return;  // noisy mirrors may graze each other
  const auto violations = world::invariant_violations(twin_, config_.scene);
  if (violations.empty()) return;
  ++invariant_violations_;
  log_event("invariant-violation", {{"what", violations.front()}});
}

std::vector<RuntimeEvent> Runtime::drain_events() {
  std::vector<RuntimeEvent> out;
  out.swap(events_);
  return out;
}

// ---------------------------------------------------------------- procedural

RobotState Runtime::move_effector(Vec3 target) {
  if (mode() != Mode::kIdle && mode() != Mode::kProceduralRecording) {
    throw Error(ErrorCode::kInvalidTransition,
                "moving the control sphere is not available in " + std::string(to_string(mode())));
  }
  if (!world::is_finite(target)) throw Error(ErrorCode::kBadArguments, "target is not finite");
  const bool reachable = kinematics::reachable(target, config_.scene);
  const Vec3 goal = reachable ? target : kinematics::clamp_to_workspace(target, config_.scene);
  world::move_arm(twin_, goal, config_.scene);
  recording_.observe({twin_.robot.effector, twin_.robot.suction});
  mark_twin();
  if (!reachable) {
    const Error e(ErrorCode::kOutOfWorkspace,
                  format_point(target) + " is out of reach, moved to " + format_point(goal));
    set_notice(describe(e));
    throw e;
  }
  return twin_.robot;
}

RobotState Runtime::set_suction(bool on) {
  if (mode() != Mode::kProceduralRecording) {
    throw Error(ErrorCode::kInvalidTransition,
                "suction is only available while recording, not in " + std::string(to_string(mode())));
  }
  world::switch_suction(twin_, on, config_.scene);
  recording_.observe({twin_.robot.effector, twin_.robot.suction});
  log_event("suction", {{"on", on}});
  mark_twin();
  return twin_.robot;
}

void Runtime::record() {
  fire(Trigger::kRecord);
  log_event(metrics::event::kRecordClick);
  animation_.reset();
  clear_declarative();
  refresh_twin();
  record_snapshot_ = twin_;
  recording_.start({twin_.robot.effector, twin_.robot.suction});
}

void Runtime::stop() {
  fire(Trigger::kStop);
  log_event("stop-click");
  recording_.stop({twin_.robot.effector, twin_.robot.suction});
  log_progress("vr");
}

void Runtime::replay() {
  if (mode() == Mode::kProceduralStopped && recording_.empty()) {
    throw Error(ErrorCode::kInvalidTransition, "nothing recorded to replay");
  }
  fire(Trigger::kReplay);
  log_event("replay-click");
  twin_ = record_snapshot_;
  mark_twin();
  start_animation(to_motions(recording_.entries(), record_snapshot_.robot.suction), false);
}

void Runtime::restart() {
  const Mode from = mode();
  fire(Trigger::kRestart);
  log_event("restart-click");
  animation_.reset();
  if (from == Mode::kProceduralRecording || from == Mode::kProceduralStopped) {
    twin_ = record_snapshot_;
    mark_twin();
    recording_.clear();
    refresh_twin();
    return;
  }
  recording_.clear();
  if (mode() == Mode::kDeclarativeEditing) {
    enter_declarative();
  } else {
    clear_declarative();
    refresh_twin();
  }
}

void Runtime::execute() {
  const Mode from = mode();
  if (!machine_.can(Trigger::kExecute)) fire(Trigger::kExecute);  // throws
  bridge::MotionQueue payload;
  if (from == Mode::kProceduralStopped) {
    payload = to_motions(recording_.entries(), element_state_ ? element_state_->suction : false);
  } else {
    payload = motions_;
  }
  fire(Trigger::kExecute);
  log_event(metrics::event::kExecuteClick, {{"primitives", payload.size()}});
  animation_.reset();
  if (config_.async_jobs) {
    auto element = element_;
    exec_job_ = std::async(std::launch::async,
                           [element, payload] { return execute_motions(*element, payload); });
  } else {
    finish_execution(execute_motions(*element_, payload));
  }
}

void Runtime::finish_execution(ExecutionReport report) {
  json entry = {{"ok", report.ok()}, {"executed", report.results.size()}};
  if (report.aborted_at) {
    entry["aborted_at"] = *report.aborted_at;
    entry["error"] = report.error;
  }
  log_event("execution", entry);
  last_report_ = std::move(report);
  const bool ok = last_report_->ok();
  fire(ok ? Trigger::kExecutionDone : Trigger::kExecutionFailed);
  try {
    element_state_ = element_->get_state();
    apply_detection(element_->sense(now_ms_));
    log_progress("element");
  } catch (const Error& e) {
    set_notice(describe(e));
    element_down_ = true;
  }
  if (!ok) {
    set_notice("ExecutionAborted at primitive " + std::to_string(*last_report_->aborted_at) + ": " +
               last_report_->error);
  }
}

// ---------------------------------------------------------------- declarative

void Runtime::clear_declarative() {
  edits_.clear();
  goal_.reset();
  plan_.reset();
  motions_.clear();
}

void Runtime::enter_declarative() {
  clear_declarative();
  refresh_twin();
  init_world_ = twin_;
}

void Runtime::select_procedural() {
  fire(Trigger::kSelectProcedural);
  log_event(metrics::event::kModeSwitch, {{"to", "procedural"}});
  animation_.reset();
  clear_declarative();
  refresh_twin();
}

void Runtime::select_declarative() {
  fire(Trigger::kSelectDeclarative);
  log_event(metrics::event::kModeSwitch, {{"to", "declarative"}});
  animation_.reset();
  recording_.clear();
  enter_declarative();
}

void Runtime::register_goal(const std::vector<CubeEdit>& edits) {
  if (!machine_.can(Trigger::kRegisterGoal)) fire(Trigger::kRegisterGoal);  // throws
  WorldState goal_world = init_world_;
  std::map<std::string, Vec3> applied;
  for (const auto& edit : edits) {
    auto* cube = goal_world.find_cube(edit.tag);
    if (cube == nullptr) throw Error(ErrorCode::kUnknownTag, "no cube tagged '" + edit.tag + "'");
    if (!std::isfinite(edit.x) || !std::isfinite(edit.y) || (edit.z && !std::isfinite(*edit.z))) {
      throw Error(ErrorCode::kBadArguments, "edit for " + edit.tag + " is not finite");
    }
    if (goal_world.held == edit.tag) goal_world.held.reset();
    cube->center = {edit.x, edit.y, 1e6};  // dropped from above
    cube->center.z = edit.z ? *edit.z : world::resting_center_z(goal_world, *cube);
    applied[edit.tag] = cube->center;
  }
  if (const auto problems = world::invariant_violations(goal_world, config_.scene); !problems.empty()) {
    throw Error(ErrorCode::kInvalidWorld, "goal state is not physical: " + problems.front());
  }
  pddl::AtomSet goal;
  try {
    goal = bridge::register_goal(goal_world, config_.scene);
  } catch (const Error& e) {
    set_notice(describe(e));
    throw;
  }
  fire(Trigger::kRegisterGoal);
  edits_ = std::move(applied);
  goal_ = goal;
  plan_.reset();
  motions_.clear();
  log_event("register-goal", {{"goal", atoms_json(goal)}});
  refresh_twin();
}

void Runtime::solve() {
  fire(Trigger::kSolve);
  log_event("solve-click");
  const WorldState start = init_world_;
  const auto goal = *goal_;
  const auto scene = config_.scene;
  planner::SearchConfig search;
  search.mode = config_.search_mode.value_or(planner::default_mode(start.cubes.size()));
  search.node_budget = config_.node_budget;

  auto job = [start, goal, scene, search]() {
    PlanOutcome out;
    try {
      const auto problem = bridge::build_problem(bridge::extract_init(start, scene), goal,
                                                 bridge::objects_of(start));
      auto plan = planner::solve(pddl::extended_blocksworld(), problem, search);
      out.motions = bridge::plan_to_motions(plan, start, scene);
      out.plan = std::move(plan);
    } catch (const Error& e) {
      out.error = describe(e);
    }
    return out;
  };
  if (config_.async_jobs) {
    plan_job_ = std::async(std::launch::async, job);
  } else {
    finish_planning(job());
  }
}

void Runtime::finish_planning(PlanOutcome outcome) {
  if (!outcome.plan) {
    log_event("plan-failed", {{"error", outcome.error}});
    fire(Trigger::kPlanFailed);
    enter_declarative();
    set_notice(outcome.error);
    return;
  }
  json steps = json::array();
  for (const auto& s : outcome.plan->steps) steps.push_back(pddl::to_string(s));
  log_event("plan", {{"length", outcome.plan->size()}, {"steps", steps}});
  plan_ = std::move(outcome.plan);
  motions_ = std::move(outcome.motions);
  fire(Trigger::kPlanFound);
  twin_ = init_world_;
  mark_twin();
  start_animation(motions_, true);
}

// ---------------------------------------------------------------- animation

void Runtime::start_animation(bridge::MotionQueue motions, bool plan_simulation) {
  animation_ = Animation{std::move(motions), 0, twin_.robot.effector, 0.0, plan_simulation};
  advance_animation(0.0);
}

void Runtime::advance_animation(double dt) {
  const bool instant = config_.animation_speed <= 0.0;
  double budget = instant ? 0.0 : config_.animation_speed * dt / 1000.0;
  auto& a = *animation_;
  while (a.index < a.motions.size()) {
    const auto& p = a.motions[a.index];
    if (p.kind == bridge::MotionPrimitive::Kind::kSuction) {
      world::switch_suction(twin_, p.suction, config_.scene);
      mark_twin();
      ++a.index;
      a.from = twin_.robot.effector;
      a.traveled = 0.0;
      continue;
    }
    const double length = world::distance(a.from, p.target);
    if (instant || a.traveled + budget >= length) {
      budget -= std::max(0.0, length - a.traveled);
      world::move_arm(twin_, p.target, config_.scene);
      mark_twin();
      ++a.index;
      a.from = p.target;
      a.traveled = 0.0;
      continue;
    }
    a.traveled += budget;
    const Vec3 at = world::lerp(a.from, p.target, a.traveled / length);
    if (kinematics::reachable(at, config_.scene)) {
      world::move_arm(twin_, at, config_.scene);
      mark_twin();
    }
    return;
  }
  const bool plan_simulation = a.plan_simulation;
  animation_.reset();
  if (plan_simulation && mode() == Mode::kSimulatingPlan) {
    fire(Trigger::kSimulationDone);
    log_progress("vr");
  }
}

}  // namespace twinloop::runtime
