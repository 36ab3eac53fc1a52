#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace twinloop {

enum class ErrorCode {
  // world model
  kDuplicateTag,
  kOverlappingCubes,
  kUnreachableHomePose,
  kUnknownTag,
  kInvalidWorld,
  // pddl
  kSyntaxError,
  kUndeclaredType,
  kUndeclaredVariable,
  kArityMismatch,
  kUnknownPredicate,
  kUnknownObjectType,
  kUnknownAction,
  kUnsupportedFeature,
  kPreconditionUnsatisfied,
  kTypeError,
  // planner
  kUnsolvable,
  kBudgetExceeded,
  // state bridge
  kAmbiguousStacking,
  kEmptyGoal,
  kUnreachableTarget,
  // kinematics
  kJointLimitViolation,
  kOutOfWorkspace,
  // runtime
  kStaleData,
  kServiceUnavailable,
  kInvalidTransition,
  kExecutionAborted,
  // gateway
  kPortInUse,
  kMalformedFrame,
  kUnknownService,
  kBadArguments,
  kIoError,
  // metrics
  kMalformedLog,
  kNoCompletedSessions,
  kRangeError,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. `code()` identifies the failure class; `what()`
/// carries a human readable detail (position, offending atom, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace twinloop
