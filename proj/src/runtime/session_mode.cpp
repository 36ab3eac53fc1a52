#include "twinloop/runtime/session_mode.hpp"

#include <algorithm>

#include "twinloop/common/error.hpp"

namespace twinloop::runtime {
namespace {

struct ModeName {
  Mode mode;
  std::string_view name;
  std::string_view hint;
};

constexpr ModeName kModes[] = {
    {Mode::kIdle, "Idle", "Press Record to demonstrate a motion, or switch to declarative control"},
    {Mode::kProceduralRecording, "ProceduralRecording",
     "Move the control sphere; toggle suction; press Stop when done"},
    {Mode::kProceduralStopped, "ProceduralStopped",
     "Replay to check the motion, Execute to run it on the robot, or Restart"},
    {Mode::kDeclarativeEditing, "DeclarativeEditing",
     "Drag the cubes to where they should end up, then Register Goal State"},
    {Mode::kGoalRegistered, "GoalRegistered", "Press Solve to let the planner find the actions"},
    {Mode::kPlanning, "Planning", "Planning, please wait"},
    {Mode::kSimulatingPlan, "SimulatingPlan", "Watch the twin perform the plan"},
    {Mode::kAwaitingApproval, "AwaitingApproval", "Press Execute to run the plan on the robot, or Restart"},
    {Mode::kExecuting, "Executing", "The robot is executing; watch the workspace"},
    {Mode::kDone, "Done", "Finished. Start again with Record or switch control strategy"},
    {Mode::kFailed, "Failed", "Execution stopped early. Restart to try again"},
};

struct TriggerName {
  Trigger trigger;
  std::string_view name;
  bool user;
};

constexpr TriggerName kTriggers[] = {
    {Trigger::kRecord, "record", true},
    {Trigger::kStop, "stop", true},
    {Trigger::kReplay, "replay", true},
    {Trigger::kRestart, "restart", true},
    {Trigger::kExecute, "execute", true},
    {Trigger::kSelectProcedural, "select_procedural", true},
    {Trigger::kSelectDeclarative, "select_declarative", true},
    {Trigger::kRegisterGoal, "register_goal", true},
    {Trigger::kSolve, "solve", true},
    {Trigger::kPlanFound, "plan_found", false},
    {Trigger::kPlanFailed, "plan_failed", false},
    {Trigger::kSimulationDone, "simulation_done", false},
    {Trigger::kExecutionDone, "execution_done", false},
    {Trigger::kExecutionFailed, "execution_failed", false},
};

using M = Mode;
using T = Trigger;

}  // namespace

std::string_view to_string(Mode mode) {
  for (const auto& m : kModes) {
    if (m.mode == mode) return m.name;
  }
  return "?";
}

std::string_view to_string(Trigger trigger) {
  for (const auto& t : kTriggers) {
    if (t.trigger == trigger) return t.name;
  }
  return "?";
}

std::optional<Mode> mode_from_string(std::string_view name) {
  for (const auto& m : kModes) {
    if (m.name == name) return m.mode;
  }
  return std::nullopt;
}

std::optional<Trigger> trigger_from_string(std::string_view name) {
  for (const auto& t : kTriggers) {
    if (t.name == name) return t.trigger;
  }
  return std::nullopt;
}

const std::vector<Transition>& transition_table() {
  static const std::vector<Transition> table = {
      {M::kIdle, T::kRecord, M::kProceduralRecording},
      {M::kIdle, T::kSelectDeclarative, M::kDeclarativeEditing},
      {M::kIdle, T::kSelectProcedural, M::kIdle},

      {M::kProceduralRecording, T::kStop, M::kProceduralStopped},
      {M::kProceduralRecording, T::kRestart, M::kIdle},

      {M::kProceduralStopped, T::kReplay, M::kProceduralStopped},
      {M::kProceduralStopped, T::kRestart, M::kIdle},
      {M::kProceduralStopped, T::kExecute, M::kExecuting},

      {M::kDeclarativeEditing, T::kRegisterGoal, M::kGoalRegistered},
      {M::kDeclarativeEditing, T::kRestart, M::kDeclarativeEditing},
      {M::kDeclarativeEditing, T::kSelectProcedural, M::kIdle},

      {M::kGoalRegistered, T::kSolve, M::kPlanning},
      {M::kGoalRegistered, T::kRegisterGoal, M::kGoalRegistered},
      {M::kGoalRegistered, T::kRestart, M::kDeclarativeEditing},

      {M::kPlanning, T::kPlanFound, M::kSimulatingPlan},
      {M::kPlanning, T::kPlanFailed, M::kDeclarativeEditing},

      {M::kSimulatingPlan, T::kSimulationDone, M::kAwaitingApproval},
      {M::kSimulatingPlan, T::kRestart, M::kDeclarativeEditing},

      {M::kAwaitingApproval, T::kExecute, M::kExecuting},
      {M::kAwaitingApproval, T::kRestart, M::kDeclarativeEditing},

      {M::kExecuting, T::kExecutionDone, M::kDone},
      {M::kExecuting, T::kExecutionFailed, M::kFailed},

      {M::kDone, T::kRestart, M::kIdle},
      {M::kDone, T::kSelectProcedural, M::kIdle},
      {M::kDone, T::kSelectDeclarative, M::kDeclarativeEditing},
      {M::kDone, T::kRecord, M::kProceduralRecording},

      {M::kFailed, T::kRestart, M::kIdle},
      {M::kFailed, T::kSelectProcedural, M::kIdle},
      {M::kFailed, T::kSelectDeclarative, M::kDeclarativeEditing},
  };
  return table;
}

std::optional<Mode> next_mode(Mode from, Trigger trigger) {
  for (const auto& t : transition_table()) {
    if (t.from == from && t.trigger == trigger) return t.to;
  }
  return std::nullopt;
}

std::string_view hint(Mode mode) {
  for (const auto& m : kModes) {
    if (m.mode == mode) return m.hint;
  }
  return "";
}

bool is_user_trigger(Trigger trigger) {
  for (const auto& t : kTriggers) {
    if (t.trigger == trigger) return t.user;
  }
  return false;
}

std::vector<Trigger> user_triggers(Mode mode) {
  std::vector<Trigger> out;
  for (const auto& t : transition_table()) {
    if (t.from == mode && is_user_trigger(t.trigger) &&
        std::find(out.begin(), out.end(), t.trigger) == out.end()) {
      out.push_back(t.trigger);
    }
  }
  return out;
}

Mode SessionMachine::fire(Trigger trigger) {
  const auto next = next_mode(mode_, trigger);
  if (!next) {
    throw Error(ErrorCode::kInvalidTransition, std::string(to_string(trigger)) + " is not available in " +
                                                   std::string(to_string(mode_)));
  }
  history_.push_back({mode_, trigger, *next});
  mode_ = *next;
  return mode_;
}

}  // namespace twinloop::runtime
