#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twinloop::runtime {

enum class Mode {
  kIdle,
  kProceduralRecording,
  kProceduralStopped,
  kDeclarativeEditing,
  kGoalRegistered,
  kPlanning,
  kSimulatingPlan,
  kAwaitingApproval,
  kExecuting,
  kDone,
  kFailed,
};

enum class Trigger {
  kRecord,
  kStop,
  kReplay,
  kRestart,
  kExecute,
  kSelectProcedural,
  kSelectDeclarative,
  kRegisterGoal,
  kSolve,
  kPlanFound,
  kPlanFailed,
  kSimulationDone,
  kExecutionDone,
  kExecutionFailed,
};

inline constexpr Mode kAllModes[] = {
    Mode::kIdle,           Mode::kProceduralRecording, Mode::kProceduralStopped, Mode::kDeclarativeEditing,
    Mode::kGoalRegistered, Mode::kPlanning,            Mode::kSimulatingPlan,    Mode::kAwaitingApproval,
    Mode::kExecuting,      Mode::kDone,                Mode::kFailed,
};

inline constexpr Trigger kAllTriggers[] = {
    Trigger::kRecord,         Trigger::kStop,          Trigger::kReplay,
    Trigger::kRestart,        Trigger::kExecute,       Trigger::kSelectProcedural,
    Trigger::kSelectDeclarative, Trigger::kRegisterGoal, Trigger::kSolve,
    Trigger::kPlanFound,      Trigger::kPlanFailed,    Trigger::kSimulationDone,
    Trigger::kExecutionDone,  Trigger::kExecutionFailed,
};

std::string_view to_string(Mode mode);
std::string_view to_string(Trigger trigger);
std::optional<Mode> mode_from_string(std::string_view name);
std::optional<Trigger> trigger_from_string(std::string_view name);

struct Transition {
  Mode from;
  Trigger trigger;
  Mode to;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// The complete transition table; anything not listed is rejected.
const std::vector<Transition>& transition_table();

std::optional<Mode> next_mode(Mode from, Trigger trigger);

/// Guidance shown to the operator in each mode.
std::string_view hint(Mode mode);

/// Triggers a user may press in `mode` (internal completion events excluded).
std::vector<Trigger> user_triggers(Mode mode);

bool is_user_trigger(Trigger trigger);

class SessionMachine {
 public:
  Mode mode() const { return mode_; }
  bool can(Trigger trigger) const { return next_mode(mode_, trigger).has_value(); }

  /// Throws Error(kInvalidTransition) when the table has no such edge.
  Mode fire(Trigger trigger);

  const std::vector<Transition>& history() const { return history_; }

 private:
  Mode mode_ = Mode::kIdle;
  std::vector<Transition> history_;
};

}  // namespace twinloop::runtime
